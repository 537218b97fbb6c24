//! Sparse rational systems solved by modular elimination and p-adic lifting.
//!
//! Rational Gaussian elimination on wide sparse systems suffers from
//! coefficient swell. Instead the column structure is found modulo a 62-bit
//! prime, the resulting square subsystem is solved by Dixon lifting with
//! rational reconstruction, and the candidate is checked exactly against
//! every equation before it is returned.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::sparse::SparseVec;
use crate::{Error, Rat, Result};

const PRIMES: [u64; 4] = [
    4611686018427387847,
    4611686018427387817,
    4611686018427387787,
    4611686018427387761,
];

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn reduce_mod(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits")
}

/// Integer column `scale * col` with its rational scale.
struct IntColumn {
    entries: Vec<(usize, BigInt)>,
    scale: BigInt,
}

fn integral(v: &[(usize, &Rat)]) -> IntColumn {
    let scale = v.iter().fold(BigInt::one(), |d, (_, c)| d.lcm(c.denom()));
    let entries = v
        .iter()
        .map(|(i, c)| (*i, c.numer() * (&scale / c.denom())))
        .collect();
    IntColumn { entries, scale }
}

/// Lex-first maximal independent set of columns modulo `p`, the pivot row
/// of each, and whether `rhs` lies in their span modulo `p`.
fn structure(cols: &[IntColumn], rhs: &IntColumn, m: usize, p: u64) -> (Vec<usize>, Vec<usize>, bool) {
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut chosen = Vec::new();
    let reduce = |basis: &[(usize, Vec<u64>)], col: &IntColumn| -> Vec<u64> {
        let mut v = vec![0u64; m];
        for (i, c) in &col.entries {
            v[*i] = reduce_mod(c, p);
        }
        for (r, b) in basis {
            let f = v[*r];
            if f == 0 {
                continue;
            }
            for (x, y) in v.iter_mut().zip(b) {
                if *y != 0 {
                    *x = (*x + p - mul_mod(f, *y, p)) % p;
                }
            }
        }
        v
    };
    for (j, col) in cols.iter().enumerate() {
        if basis.len() == m {
            break;
        }
        let mut v = reduce(&basis, col);
        if let Some(r) = v.iter().position(|x| *x != 0) {
            let inv = inv_mod(v[r], p);
            for x in v.iter_mut() {
                *x = mul_mod(*x, inv, p);
            }
            basis.push((r, v));
            chosen.push(j);
        }
    }
    let consistent = reduce(&basis, rhs).iter().all(|x| *x == 0);
    let rows = basis.into_iter().map(|(r, _)| r).collect();
    (chosen, rows, consistent)
}

/// Inverse of a square matrix modulo `p`, if it is invertible there.
fn inverse_mod(a: &[Vec<u64>], p: u64) -> Option<Vec<Vec<u64>>> {
    let r = a.len();
    let mut m: Vec<Vec<u64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut ext = row.clone();
            ext.extend((0..r).map(|j| u64::from(i == j)));
            ext
        })
        .collect();
    for c in 0..r {
        let piv = (c..r).find(|&i| m[i][c] != 0)?;
        m.swap(c, piv);
        let inv = inv_mod(m[c][c], p);
        for x in m[c].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let pivot_row = m[c].clone();
        for (i, row) in m.iter_mut().enumerate() {
            let f = row[c];
            if i == c || f == 0 {
                continue;
            }
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if *y != 0 {
                    *x = (*x + p - mul_mod(f, *y, p)) % p;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[r..].to_vec()).collect())
}

/// `n/d` with `n ≡ a d (mod m)` and `|n|, d <= sqrt(m/2)`.
fn rational_reconstruction(a: &BigInt, m: &BigInt) -> Option<Rat> {
    let bound = (m >> 1usize).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(Rat::new(r1, t1))
}

/// Bits of a Hadamard-type bound on the numerators and denominators of the
/// solution of `a x = b` (Cramer's rule).
fn hadamard_bits(a: &[Vec<BigInt>], b: &[BigInt]) -> u64 {
    let norm_bits = |v: &mut dyn Iterator<Item = &BigInt>| -> u64 {
        let sq: BigInt = v.map(|x| x * x).sum();
        sq.bits() / 2 + 1
    };
    let r = a.len();
    let cols: u64 = (0..r).map(|j| norm_bits(&mut a.iter().map(|row| &row[j]))).sum();
    cols + norm_bits(&mut b.iter())
}

/// Dixon lifting for the square system `a x = b`, nonsingular mod `p`.
fn dixon(a: &[Vec<BigInt>], b: &[BigInt], p: u64, accept: impl Fn(&[Rat]) -> bool) -> Option<Vec<Rat>> {
    let r = a.len();
    let a_mod: Vec<Vec<u64>> = a.iter().map(|row| row.iter().map(|x| reduce_mod(x, p)).collect()).collect();
    let inv = inverse_mod(&a_mod, p)?;
    let bp = BigInt::from(p);
    let steps = (2 * hadamard_bits(a, b) + 2) / 61 + 2;
    let mut residual = b.to_vec();
    let mut acc = vec![BigInt::zero(); r];
    let mut modulus = BigInt::one();
    for _ in 0..steps {
        let res_mod: Vec<u64> = residual.iter().map(|x| reduce_mod(x, p)).collect();
        let y: Vec<u64> = inv
            .iter()
            .map(|row| row.iter().zip(&res_mod).fold(0u64, |s, (u, v)| (s + mul_mod(*u, *v, p)) % p))
            .collect();
        for (i, row) in a.iter().enumerate() {
            let ay: BigInt = row.iter().zip(&y).filter(|(_, v)| **v != 0).map(|(u, v)| u * v).sum();
            residual[i] = (&residual[i] - ay) / &bp;
        }
        for (x, v) in acc.iter_mut().zip(&y) {
            *x += &modulus * v;
        }
        modulus *= &bp;
        if residual.iter().all(Zero::is_zero) {
            // exact integer solution
            let x: Vec<Rat> = acc.iter().map(|v| Rat::from_integer(v.clone())).collect();
            if accept(&x) {
                return Some(x);
            }
        }
        let candidate: Option<Vec<Rat>> = acc.iter().map(|v| rational_reconstruction(v, &modulus)).collect();
        if let Some(x) = candidate {
            if accept(&x) {
                return Some(x);
            }
        }
    }
    None
}

/// Solves `sum_j x_j columns[j] = rhs`.
///
/// Among all solutions the one supported on the lexicographically first
/// basis of the column space is returned (every dependent column gets zero),
/// so the answer does not depend on the primes used. Solutions are verified
/// exactly; `Inconsistent` is reported when `rhs` is outside the column span
/// modulo the primes tried.
pub fn solve_sparse<K: Ord + Clone>(columns: &[SparseVec<K>], rhs: &SparseVec<K>) -> Result<Vec<Rat>> {
    let mut index: BTreeMap<&K, usize> = BTreeMap::new();
    for k in columns.iter().flat_map(|c| c.keys()).chain(rhs.keys()) {
        let next = index.len();
        index.entry(k).or_insert(next);
    }
    let m = index.len();
    let ints: Vec<IntColumn> = columns
        .iter()
        .map(|c| integral(&c.iter().map(|(k, v)| (index[k], v)).collect::<Vec<_>>()))
        .collect();
    let b = integral(&rhs.iter().map(|(k, v)| (index[k], v)).collect::<Vec<_>>());
    if rhs.is_empty() {
        return Ok(vec![Rat::zero(); columns.len()]);
    }

    let mut dense_b = vec![BigInt::zero(); m];
    for (i, v) in &b.entries {
        dense_b[*i] = v.clone();
    }
    // exact check of sum_j x'_j (scaled column j) = scaled rhs
    let verify = |chosen: &[usize], x: &[Rat]| -> bool {
        let mut acc: Vec<Rat> = dense_b.iter().map(|v| -Rat::from_integer(v.clone())).collect();
        for (j, xj) in chosen.iter().zip(x) {
            for (i, v) in &ints[*j].entries {
                acc[*i] += xj * v;
            }
        }
        acc.iter().all(Zero::is_zero)
    };

    for p in PRIMES {
        let (chosen, rows, consistent) = structure(&ints, &b, m, p);
        if !consistent {
            continue;
        }
        let mut dense: Vec<BTreeMap<usize, &BigInt>> = vec![BTreeMap::new(); chosen.len()];
        for (c, j) in chosen.iter().enumerate() {
            for (i, v) in &ints[*j].entries {
                dense[c].insert(*i, v);
            }
        }
        let a: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|i| dense.iter().map(|col| col.get(i).map_or_else(BigInt::zero, |v| (*v).clone())).collect())
            .collect();
        let rhs_sq: Vec<BigInt> = rows.iter().map(|i| dense_b[*i].clone()).collect();
        if let Some(x) = dixon(&a, &rhs_sq, p, |x| verify(&chosen, x)) {
            let mut out = vec![Rat::zero(); columns.len()];
            for (j, xj) in chosen.iter().zip(x) {
                // x'_j solves the scaled system; undo both scalings
                out[*j] = xj * Rat::from_integer(ints[*j].scale.clone()) / Rat::from_integer(b.scale.clone());
            }
            return Ok(out);
        }
    }
    Err(Error::Inconsistent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn col(entries: &[(u32, Rat)]) -> SparseVec<u32> {
        entries.iter().cloned().collect()
    }

    #[test]
    fn reconstruction() {
        let m = BigInt::from(1_000_003i64) * BigInt::from(1_000_033i64);
        let x = rat(-17, 59);
        let a = (x.numer() * x.denom().modinv(&m).unwrap()).mod_floor(&m);
        assert_eq!(rational_reconstruction(&a, &m), Some(x));
    }

    #[test]
    fn square_system() {
        // x + 2y = 3, 3x + 4y = 5  ->  x = -1, y = 2
        let cols = [col(&[(0, rat(1, 1)), (1, rat(3, 1))]), col(&[(0, rat(2, 1)), (1, rat(4, 1))])];
        let rhs = col(&[(0, rat(3, 1)), (1, rat(5, 1))]);
        assert_eq!(solve_sparse(&cols, &rhs).unwrap(), vec![rat(-1, 1), rat(2, 1)]);
    }

    #[test]
    fn dependent_columns_get_zero() {
        let cols = [
            col(&[(0, rat(1, 3))]),
            col(&[(0, rat(2, 1))]),
            col(&[(1, rat(5, 7)), (0, rat(1, 1))]),
        ];
        let rhs = col(&[(0, rat(1, 1)), (1, rat(1, 1))]);
        let x = solve_sparse(&cols, &rhs).unwrap();
        assert_eq!(x, vec![rat(-6, 5), rat(0, 1), rat(7, 5)]);
    }

    #[test]
    fn inconsistent() {
        let cols = [col(&[(0, rat(1, 1)), (1, rat(1, 1))])];
        let rhs = col(&[(0, rat(1, 1))]);
        assert_eq!(solve_sparse(&cols, &rhs), Err(Error::Inconsistent));
    }

    #[test]
    fn large_coefficients() {
        // Hilbert-like 6x6 system with a known rational solution
        let n = 6;
        let truth: Vec<Rat> = (0..n).map(|i| rat(i as i64 * 7 - 11, 3 + i as i64)).collect();
        let cols: Vec<SparseVec<u32>> = (0..n)
            .map(|j| (0..n).map(|i| (i as u32, rat(1, (i + j + 1) as i64))).collect())
            .collect();
        let mut rhs: SparseVec<u32> = SparseVec::new();
        for (j, c) in cols.iter().enumerate() {
            for (i, v) in c {
                *rhs.entry(*i).or_insert_with(Rat::zero) += v * &truth[j];
            }
        }
        assert_eq!(solve_sparse(&cols, &rhs).unwrap(), truth);
    }
}
