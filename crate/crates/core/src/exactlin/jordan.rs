use num_traits::Zero;

use super::{char_poly, rational_roots, RatMatrix};
use crate::{Error, Rat, Result};

/// Jordan normal form over the rationals.
///
/// `transform` holds the Jordan basis as columns, so that
/// `transform^-1 * M * transform` is block diagonal with blocks
/// `lambda * I + E` where `E` has ones on the superdiagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanData {
    pub transform: RatMatrix,
    pub blocks: Vec<(Rat, usize)>,
}

impl JordanData {
    pub fn jordan_matrix(&self) -> RatMatrix {
        let n = self.dimension();
        let mut j = RatMatrix::zeros(n, n);
        let mut at = 0;
        for (lambda, size) in &self.blocks {
            for k in 0..*size {
                j[(at + k, at + k)] = lambda.clone();
                if k > 0 {
                    j[(at + k - 1, at + k)] = Rat::from_integer(1.into());
                }
            }
            at += size;
        }
        j
    }

    pub fn dimension(&self) -> usize {
        self.blocks.iter().map(|b| b.1).sum()
    }

    /// Eigenvalue attached to each basis vector, in basis order.
    pub fn diagonal(&self) -> Vec<Rat> {
        self.blocks
            .iter()
            .flat_map(|(l, s)| std::iter::repeat_n(l.clone(), *s))
            .collect()
    }

    /// For each basis vector, whether it starts a block (is an eigenvector).
    pub fn block_starts(&self) -> Vec<bool> {
        self.blocks
            .iter()
            .flat_map(|(_, s)| (0..*s).map(|k| k == 0))
            .collect()
    }
}

/// Blocks are ordered by ascending eigenvalue, and by descending size within
/// one eigenvalue.
pub fn rational_jordan_form(m: &RatMatrix) -> Result<JordanData> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("Jordan form needs a square matrix".into()));
    }
    let n = m.rows();
    let (roots, rest) = rational_roots(&char_poly(m)?);
    if rest.len() > 1 {
        return Err(Error::NonRationalSpectrum);
    }
    let mut eigen: Vec<(Rat, usize)> = Vec::new();
    for r in roots {
        match eigen.last_mut() {
            Some((l, k)) if *l == r => *k += 1,
            _ => eigen.push((r, 1)),
        }
    }

    let mut columns: Vec<Vec<Rat>> = Vec::with_capacity(n);
    let mut blocks = Vec::new();
    for (lambda, mult) in eigen {
        let nil = m.shifted(&lambda);
        // kernels of nil^j until the generalized eigenspace is reached
        let mut kernels: Vec<Vec<Vec<Rat>>> = vec![Vec::new()];
        let mut power = RatMatrix::identity(n);
        loop {
            power = &power * &nil;
            let k = power.kernel();
            let done = k.len() == mult;
            kernels.push(k);
            if done {
                break;
            }
        }
        let top = kernels.len() - 1;
        let mut chains: Vec<(usize, Vec<Rat>)> = Vec::new();
        let mut carried: Vec<Vec<Rat>> = Vec::new();
        for level in (1..=top).rev() {
            let mut acc: Vec<Vec<Rat>> = kernels[level - 1].clone();
            acc.extend(carried.iter().cloned());
            let mut rank = span_rank(&acc);
            let mut heads = Vec::new();
            for v in &kernels[level] {
                acc.push(v.clone());
                let r = span_rank(&acc);
                if r > rank {
                    rank = r;
                    heads.push(v.clone());
                    chains.push((level, v.clone()));
                } else {
                    acc.pop();
                }
            }
            carried = carried
                .into_iter()
                .chain(heads)
                .map(|v| nil.mul_vec(&v))
                .collect();
        }
        for (len, head) in chains {
            let mut chain = vec![head];
            for _ in 1..len {
                let next = nil.mul_vec(chain.last().unwrap());
                chain.push(next);
            }
            chain.reverse();
            columns.extend(chain);
            blocks.push((lambda.clone(), len));
        }
    }
    let transform = RatMatrix::from_columns(&columns)?;
    debug_assert!(columns.iter().all(|c| !c.iter().all(Zero::is_zero)));
    Ok(JordanData { transform, blocks })
}

fn span_rank(vectors: &[Vec<Rat>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    RatMatrix::from_rows(vectors.to_vec())
        .expect("equal-length vectors")
        .rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn check(m: &RatMatrix) -> JordanData {
        let jd = rational_jordan_form(m).unwrap();
        let p = &jd.transform;
        let pinv = p.inverse().expect("transform must be invertible");
        assert_eq!(&(&pinv * m) * p, jd.jordan_matrix());
        jd
    }

    #[test]
    fn single_block() {
        let jd = check(&RatMatrix::from_i64(&[&[1, 1], &[0, 1]]));
        assert_eq!(jd.blocks, vec![(rat(1, 1), 2)]);
        assert_eq!(jd.transform, RatMatrix::identity(2));
    }

    #[test]
    fn distinct_eigenvalues() {
        let jd = check(&RatMatrix::from_i64(&[&[0, 1], &[-2, 3]]));
        assert_eq!(jd.blocks, vec![(rat(1, 1), 1), (rat(2, 1), 1)]);
    }

    #[test]
    fn rotation_is_rejected() {
        let m = RatMatrix::from_i64(&[&[0, 1], &[-1, 0]]);
        assert_eq!(rational_jordan_form(&m), Err(Error::NonRationalSpectrum));
    }

    #[test]
    fn mixed_blocks_same_eigenvalue() {
        // one 2-block and one 1-block for eigenvalue 2, plus eigenvalue -1
        let m = RatMatrix::from_i64(&[
            &[2, 1, 0, 0],
            &[0, 2, 0, 0],
            &[0, 0, 2, 0],
            &[1, 0, 0, -1],
        ]);
        let jd = check(&m);
        assert_eq!(jd.blocks, vec![(rat(-1, 1), 1), (rat(2, 1), 2), (rat(2, 1), 1)]);
    }

    #[test]
    fn nilpotent_three_block_conjugated() {
        let n = RatMatrix::from_i64(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let p = RatMatrix::from_i64(&[&[1, 2, 0], &[0, 1, 3], &[1, 0, 1]]);
        let m = &(&p * &n) * &p.inverse().unwrap();
        let jd = check(&m);
        assert_eq!(jd.blocks, vec![(rat(0, 1), 3)]);
    }
}
