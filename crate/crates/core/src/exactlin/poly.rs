use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::RatMatrix;
use crate::{Error, Rat, Result};

/// Characteristic polynomial `det(tI - M)`, coefficients from the constant
/// term upwards (so the last entry is 1).
///
/// Berkowitz recursion: division-free, so no fractions are introduced beyond
/// those already in `M`.
pub fn char_poly(m: &RatMatrix) -> Result<Vec<Rat>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("char_poly needs a square matrix".into()));
    }
    let n = m.rows();
    // highest degree first while building
    let mut vect = vec![Rat::one()];
    for r in 0..n {
        // leading (r+1)x(r+1) block: S = m[0..r][0..r], C = column r above
        // the diagonal, R = row r left of the diagonal, a = m[r][r].
        let a = m[(r, r)].clone();
        let mut t = Vec::with_capacity(r + 2);
        t.push(Rat::one());
        t.push(-a);
        let mut sc: Vec<Rat> = (0..r).map(|i| m[(i, r)].clone()).collect();
        for _ in 0..r {
            let rc = (0..r).fold(Rat::zero(), |acc, j| acc + &m[(r, j)] * &sc[j]);
            t.push(-rc);
            sc = (0..r)
                .map(|i| (0..r).fold(Rat::zero(), |acc, j| acc + &m[(i, j)] * &sc[j]))
                .collect();
        }
        let mut next = vec![Rat::zero(); r + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, v) in vect.iter().enumerate() {
                if i >= j && !v.is_zero() {
                    *slot += &t[i - j] * v;
                }
            }
        }
        vect = next;
    }
    vect.reverse();
    Ok(vect)
}

/// Rational roots of a nonzero polynomial (coefficients constant term first),
/// each repeated by multiplicity, ascending, together with the cofactor left
/// after dividing them out.
pub fn rational_roots(p: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let mut poly = trim(p.to_vec());
    let mut roots = Vec::new();
    if poly.is_empty() {
        return (roots, poly);
    }
    while poly.len() > 1 && poly[0].is_zero() {
        roots.push(Rat::zero());
        poly.remove(0);
    }
    if poly.len() > 1 {
        let ints = integer_coefficients(&poly);
        let lead = ints.last().unwrap().abs();
        let constant = ints[0].abs();
        let nums = divisors(&constant);
        let dens = divisors(&lead);
        let mut candidates: Vec<Rat> = Vec::new();
        for p in &nums {
            for q in &dens {
                for s in [-1, 1] {
                    let c = Rat::new(p * BigInt::from(s), q.clone());
                    if !candidates.contains(&c) {
                        candidates.push(c);
                    }
                }
            }
        }
        candidates.sort();
        for c in candidates {
            while poly.len() > 1 {
                let (q, rem) = divide_linear(&poly, &c);
                if !rem.is_zero() {
                    break;
                }
                roots.push(c.clone());
                poly = q;
            }
        }
    }
    roots.sort();
    (roots, poly)
}

fn trim(mut p: Vec<Rat>) -> Vec<Rat> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn integer_coefficients(p: &[Rat]) -> Vec<BigInt> {
    let l = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    p.iter()
        .map(|c| (c * Rat::from_integer(l.clone())).to_integer())
        .collect()
}

/// Synthetic division by `(t - c)`; returns quotient and remainder.
fn divide_linear(p: &[Rat], c: &Rat) -> (Vec<Rat>, Rat) {
    let n = p.len();
    let mut q = vec![Rat::zero(); n - 1];
    let mut carry = Rat::zero();
    for i in (0..n).rev() {
        let v = &p[i] + &carry * c;
        if i == 0 {
            return (q, v);
        }
        q[i - 1] = v.clone();
        carry = v;
    }
    unreachable!()
}

/// Positive divisors by trial division.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            let other = &n / &d;
            if other != d {
                large.push(other);
            }
            small.push(d.clone());
        }
        d += 1;
        if d.to_u64().is_none() {
            break;
        }
    }
    large.reverse();
    small.extend(large);
    small
}
