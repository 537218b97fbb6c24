use num_traits::Zero;

use super::accum::{Accumulator, Scaled};
use super::series::Series;
use super::word::Word;
use crate::exactlin::RatMatrix;
use crate::{Error, Rat, Result};

/// Continuous algebra endomorphism of `F` fixing `m`, given by the images of
/// the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Endomorphism {
    nvars: usize,
    trunc: usize,
    images: Vec<Series>,
}

impl Endomorphism {
    pub fn new(images: Vec<Series>) -> Result<Self> {
        let first = images
            .first()
            .ok_or_else(|| Error::InvalidArgument("endomorphism needs at least one image".into()))?;
        let (nvars, trunc) = (first.nvars(), first.trunc());
        if images.len() != nvars {
            return Err(Error::InvalidArgument(format!(
                "{} images for {nvars} generators",
                images.len()
            )));
        }
        for (i, s) in images.iter().enumerate() {
            first.check_compatible(s)?;
            if !s.constant_term().is_zero() {
                return Err(Error::NotInMaximalIdeal(i));
            }
        }
        Ok(Endomorphism { nvars, trunc, images })
    }

    pub fn identity(nvars: usize, trunc: usize) -> Self {
        Endomorphism {
            nvars,
            trunc,
            images: (0..nvars).map(|i| Series::var(nvars, trunc, i)).collect(),
        }
    }

    /// Linear substitution `x_i -> sum_j m[j][i] x_j` (column `i` is the
    /// image of `x_i`).
    pub fn linear(m: &RatMatrix, trunc: usize) -> Result<Self> {
        let n = m.rows();
        if !m.is_square() {
            return Err(Error::DimensionMismatch("linear map must be square".into()));
        }
        let images = (0..n)
            .map(|i| {
                Series::from_terms(n, trunc, (0..n).map(|j| (Word::letter(j), m[(j, i)].clone())))
            })
            .collect();
        Endomorphism::new(images)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn images(&self) -> &[Series] {
        &self.images
    }

    pub fn image(&self, i: usize) -> &Series {
        &self.images[i]
    }

    /// Matrix of the induced map on `m/m^2`; column `i` holds the linear
    /// coefficients of the image of `x_i`.
    pub fn linear_part(&self) -> RatMatrix {
        let cols: Vec<Vec<Rat>> = self.images.iter().map(Series::linear_coeffs).collect();
        RatMatrix::from_columns(&cols).expect("square by construction")
    }

    pub fn is_automorphism(&self) -> bool {
        self.linear_part().inverse().is_some()
    }

    pub fn is_identity(&self) -> bool {
        *self == Endomorphism::identity(self.nvars, self.trunc)
    }

    /// Same map read modulo `m^(level+1)`.
    pub fn truncated(&self, level: usize) -> Self {
        Endomorphism {
            nvars: self.nvars,
            trunc: level,
            images: self.images.iter().map(|s| s.truncated(level)).collect(),
        }
    }

    fn check(&self, f: &Series) -> Result<()> {
        if f.nvars() != self.nvars || f.trunc() != self.trunc {
            return Err(Error::TruncMismatch(self.nvars, self.trunc, f.nvars(), f.trunc()));
        }
        Ok(())
    }

    /// `H(f)`: every generator replaced by its image.
    ///
    /// Words are walked as a trie. A node at depth `k` only needs its subtree
    /// evaluated modulo `m^(trunc-k+1)`, because every image lies in `m`.
    pub fn substitute(&self, f: &Series) -> Result<Series> {
        self.check(f)?;
        let mut terms: Vec<(Word, Rat)> = f.terms().map(|(w, c)| (*w, c.clone())).collect();
        terms.sort_by(|a, b| a.0.lex_cmp(b.0));
        let images: Vec<Scaled> = self.images.iter().map(Scaled::of).collect();
        let acc = substitute_trie(&images, &terms, 0, self.trunc);
        Ok(acc.into_series(self.nvars, self.trunc))
    }

    /// `(self o other)(x_i) = self(other(x_i))`.
    pub fn compose(&self, other: &Endomorphism) -> Result<Endomorphism> {
        if self.nvars != other.nvars || self.trunc != other.trunc {
            return Err(Error::TruncMismatch(self.nvars, self.trunc, other.nvars, other.trunc));
        }
        let images = other
            .images
            .iter()
            .map(|g| self.substitute(g))
            .collect::<Result<Vec<_>>>()?;
        Ok(Endomorphism {
            nvars: self.nvars,
            trunc: self.trunc,
            images,
        })
    }

    /// Formal inverse modulo `m^(trunc+1)`.
    ///
    /// The linear part is inverted exactly; afterwards each degree `d` of the
    /// inverse is fixed by cancelling the degree-`d` discrepancy of `H o G`.
    pub fn invert(&self) -> Result<Endomorphism> {
        let lin_inv = self.linear_part().inverse().ok_or(Error::NotAutomorphism)?;
        let g0 = Endomorphism::linear(&lin_inv, self.trunc)?;
        let mut g = g0.clone();
        for d in 2..=self.trunc {
            let h_d = self.truncated(d);
            let g_d = g.truncated(d);
            let composite = h_d.compose(&g_d)?;
            let g0_d = g0.truncated(d);
            for i in 0..self.nvars {
                let delta = composite.images[i].homogeneous_part(d);
                if delta.is_zero() {
                    continue;
                }
                let correction = g0_d.substitute(&delta)?;
                for (w, c) in correction.terms() {
                    g.images[i].add_term(*w, -c.clone());
                }
            }
        }
        Ok(g)
    }
}

fn substitute_trie(images: &[Scaled], group: &[(Word, Rat)], depth: usize, level: usize) -> Accumulator {
    let mut acc = Accumulator::new();
    let mut rest = group;
    if let Some((w, c)) = rest.first() {
        if w.len() == depth {
            let f = acc.align(c.denom());
            acc.add(Word::EMPTY, c.numer() * f);
            rest = &rest[1..];
        }
    }
    if level == 0 {
        return acc;
    }
    while let Some((w, _)) = rest.first() {
        let letter = w.at(depth);
        let end = rest
            .iter()
            .position(|(v, _)| v.at(depth) != letter)
            .unwrap_or(rest.len());
        let (run, tail) = rest.split_at(end);
        rest = tail;
        let child = substitute_trie(images, run, depth + 1, level - 1).into_scaled(level - 1);
        acc.add_product(&images[letter], &child, level);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn w(l: &[usize]) -> Word {
        Word::from_letters(l)
    }

    fn poly(n: usize, t: usize, terms: &[(&[usize], i64)]) -> Series {
        Series::from_terms(n, t, terms.iter().map(|(l, c)| (w(l), rat(*c, 1))))
    }

    #[test]
    fn substitute_shear() {
        let h = Endomorphism::new(vec![poly(2, 4, &[(&[0], 1)]), poly(2, 4, &[(&[1], 1), (&[0, 0], -1)])]).unwrap();
        let y = Series::var(2, 4, 1);
        assert_eq!(h.substitute(&y).unwrap(), poly(2, 4, &[(&[1], 1), (&[0, 0], -1)]));
        let f = poly(2, 4, &[(&[0, 1], 3), (&[1, 1, 0], 1)]);
        assert_eq!(Endomorphism::identity(2, 4).substitute(&f).unwrap(), f);
    }

    #[test]
    fn substitute_cube_expansion() {
        let h = Endomorphism::new(vec![poly(1, 6, &[(&[0], 1), (&[0, 0], 1)])]).unwrap();
        let x3 = poly(1, 6, &[(&[0, 0, 0], 1)]);
        let expected = poly(
            1,
            6,
            &[(&[0, 0, 0], 1), (&[0, 0, 0, 0], 3), (&[0; 5], 3), (&[0; 6], 1)],
        );
        assert_eq!(h.substitute(&x3).unwrap(), expected);
    }

    #[test]
    fn compose_is_order_sensitive() {
        let a = Endomorphism::new(vec![poly(1, 5, &[(&[0], 1), (&[0, 0], 1)])]).unwrap();
        let b = Endomorphism::new(vec![poly(1, 5, &[(&[0], 1), (&[0, 0], -1)])]).unwrap();
        // a(b(x)) = (x + x^2) - (x + x^2)^2 = x - 2x^3 - x^4
        let ab = a.compose(&b).unwrap();
        assert_eq!(ab.image(0), &poly(1, 5, &[(&[0], 1), (&[0; 3], -2), (&[0; 4], -1)]));
        assert_eq!(a.compose(&Endomorphism::identity(1, 5)).unwrap(), a);
    }

    #[test]
    fn invert_catalan() {
        let h = Endomorphism::new(vec![poly(1, 5, &[(&[0], 1), (&[0, 0], 1)])]).unwrap();
        let g = h.invert().unwrap();
        assert_eq!(
            g.image(0),
            &poly(1, 5, &[(&[0], 1), (&[0; 2], -1), (&[0; 3], 2), (&[0; 4], -5), (&[0; 5], 14)])
        );
        assert!(h.compose(&g).unwrap().is_identity());
        assert!(g.compose(&h).unwrap().is_identity());
    }

    #[test]
    fn invert_shears() {
        let h = Endomorphism::new(vec![poly(2, 5, &[(&[0], 1)]), poly(2, 5, &[(&[1], 1), (&[0, 0], -1)])]).unwrap();
        let g = h.invert().unwrap();
        assert_eq!(g.image(1), &poly(2, 5, &[(&[1], 1), (&[0, 0], 1)]));
        let lin = Endomorphism::new(vec![poly(2, 5, &[(&[0], 1), (&[1], 1)]), poly(2, 5, &[(&[1], 1)])]).unwrap();
        assert_eq!(lin.invert().unwrap().image(0), &poly(2, 5, &[(&[0], 1), (&[1], -1)]));
    }

    #[test]
    fn singular_linear_part() {
        let h = Endomorphism::new(vec![poly(2, 3, &[(&[0], 1), (&[1], 1)]), poly(2, 3, &[(&[0], 2), (&[1], 2)])]).unwrap();
        assert_eq!(h.invert(), Err(Error::NotAutomorphism));
    }

    #[test]
    fn constant_image_rejected() {
        let s = poly(1, 3, &[(&[], 1), (&[0], 1)]);
        assert_eq!(Endomorphism::new(vec![s]), Err(Error::NotInMaximalIdeal(0)));
    }
}
