use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::accum::{Accumulator, Scaled};
use super::word::{Word, MAX_DEGREE, MAX_VARS};
use crate::{Error, Rat, Result};

/// Element of `Q<<x_1..x_n>> / m^(trunc+1)`.
///
/// Terms are kept in a `BTreeMap` keyed by [`Word`], so iteration runs
/// degree-first and then lexicographically. Zero coefficients and words
/// longer than `trunc` are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Series {
    nvars: usize,
    trunc: usize,
    terms: BTreeMap<Word, Rat>,
}

impl Series {
    pub fn zero(nvars: usize, trunc: usize) -> Series {
        assert!((1..=MAX_VARS).contains(&nvars), "unsupported variable count {nvars}");
        assert!(trunc <= MAX_DEGREE, "truncation {trunc} above {MAX_DEGREE}");
        Series {
            nvars,
            trunc,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize, trunc: usize) -> Series {
        Series::monomial(nvars, trunc, Word::EMPTY, Rat::one())
    }

    /// The generator `x_i` (0-based).
    pub fn var(nvars: usize, trunc: usize, i: usize) -> Series {
        assert!(i < nvars);
        Series::monomial(nvars, trunc, Word::letter(i), Rat::one())
    }

    pub fn monomial(nvars: usize, trunc: usize, w: Word, c: Rat) -> Series {
        let mut s = Series::zero(nvars, trunc);
        s.add_term(w, c);
        s
    }

    /// Collects terms, summing repeated words and dropping zeros and words
    /// beyond the truncation.
    pub fn from_terms<I: IntoIterator<Item = (Word, Rat)>>(nvars: usize, trunc: usize, terms: I) -> Series {
        let mut s = Series::zero(nvars, trunc);
        for (w, c) in terms {
            s.add_term(w, c);
        }
        s
    }

    pub(crate) fn from_accumulator(nvars: usize, trunc: usize, acc: HashMap<Word, Rat>) -> Series {
        let terms = acc
            .into_iter()
            .filter(|(w, c)| !c.is_zero() && w.len() <= trunc)
            .collect();
        Series { nvars, trunc, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &Rat)> + Clone {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> Rat {
        self.terms.get(w).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(&Word::EMPTY)
    }

    /// Coefficients of `x_0 .. x_{n-1}`.
    pub fn linear_coeffs(&self) -> Vec<Rat> {
        (0..self.nvars).map(|i| self.coeff(&Word::letter(i))).collect()
    }

    /// Adds `c * w` in place; words beyond the truncation are ignored.
    pub fn add_term(&mut self, w: Word, c: Rat) {
        assert!(w.max_letter().is_none_or(|l| l < self.nvars), "letter outside alphabet");
        if w.len() > self.trunc || c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(x) => {
                *x += c;
                if x.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn check_compatible(&self, other: &Series) -> Result<()> {
        if self.nvars != other.nvars || self.trunc != other.trunc {
            return Err(Error::TruncMismatch(self.nvars, self.trunc, other.nvars, other.trunc));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Series) -> Result<Series> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(*w, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Series) -> Result<Series> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(*w, -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Series) -> Result<Series> {
        self.check_compatible(other)?;
        let mut acc = Accumulator::new();
        acc.add_product(&Scaled::of(self), &Scaled::of(other), self.trunc);
        Ok(acc.into_series(self.nvars, self.trunc))
    }

    pub fn scale(&self, c: &Rat) -> Series {
        if c.is_zero() {
            return Series::zero(self.nvars, self.trunc);
        }
        Series {
            nvars: self.nvars,
            trunc: self.trunc,
            terms: self.terms.iter().map(|(w, a)| (*w, a * c)).collect(),
        }
    }

    /// Sum of the terms of degree exactly `r`.
    pub fn homogeneous_part(&self, r: usize) -> Series {
        self.filter_degrees(|d| d == r)
    }

    /// Sum of the terms of degree at most `r`.
    pub fn low_part(&self, r: usize) -> Series {
        self.filter_degrees(|d| d <= r)
    }

    pub fn filter_degrees(&self, keep: impl Fn(usize) -> bool) -> Series {
        Series {
            nvars: self.nvars,
            trunc: self.trunc,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| keep(w.len()))
                .map(|(w, c)| (*w, c.clone()))
                .collect(),
        }
    }

    /// Smallest degree with a nonzero coefficient.
    pub fn order(&self) -> Option<usize> {
        self.terms.keys().next().map(|w| w.len())
    }

    /// Largest degree with a nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(|w| w.len())
    }

    pub fn is_homogeneous_of(&self, d: usize) -> bool {
        self.terms.keys().all(|w| w.len() == d)
    }

    /// Image in `F / m^(level+1)` for `level <= trunc`.
    pub fn truncated(&self, level: usize) -> Series {
        assert!(level <= self.trunc, "cannot truncate upwards");
        self.retrunc(level)
    }

    /// Reinterprets a polynomial at a different truncation level; terms above
    /// the new level are dropped.
    pub fn retrunc(&self, level: usize) -> Series {
        let mut s = self.filter_degrees(|d| d <= level);
        assert!(level <= MAX_DEGREE);
        s.trunc = level;
        s
    }

    pub fn map_words(&self, f: impl Fn(Word) -> Word) -> Series {
        Series::from_terms(self.nvars, self.trunc, self.terms.iter().map(|(w, c)| (f(*w), c.clone())))
    }
}

impl Add for &Series {
    type Output = Series;

    fn add(self, rhs: &Series) -> Series {
        self.try_add(rhs).expect("series shape mismatch")
    }
}

impl Sub for &Series {
    type Output = Series;

    fn sub(self, rhs: &Series) -> Series {
        self.try_sub(rhs).expect("series shape mismatch")
    }
}

impl Mul for &Series {
    type Output = Series;

    fn mul(self, rhs: &Series) -> Series {
        self.try_mul(rhs).expect("series shape mismatch")
    }
}

impl Neg for &Series {
    type Output = Series;

    fn neg(self) -> Series {
        self.scale(&-Rat::one())
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}){w:?}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn w(l: &[usize]) -> Word {
        Word::from_letters(l)
    }

    #[test]
    fn product_of_generators_keeps_order() {
        let x = Series::var(2, 4, 0);
        let y = Series::var(2, 4, 1);
        assert_eq!(&x * &y, Series::monomial(2, 4, w(&[0, 1]), rat(1, 1)));
        let s = &x + &y;
        let sq = &s * &s;
        for word in [w(&[0, 0]), w(&[0, 1]), w(&[1, 0]), w(&[1, 1])] {
            assert_eq!(sq.coeff(&word), rat(1, 1));
        }
        assert_eq!(sq.len(), 4);
    }

    #[test]
    fn truncation_drops_high_products() {
        let x = Series::var(1, 3, 0);
        let x3 = &(&x * &x) * &x;
        assert_eq!(x3.len(), 1);
        assert!((&x3 * &x).is_zero());
    }

    #[test]
    fn graded_parts() {
        let f = Series::from_terms(1, 4, [(w(&[0]), rat(1, 1)), (w(&[0, 0]), rat(1, 1))]);
        assert_eq!(f.homogeneous_part(2), Series::monomial(1, 4, w(&[0, 0]), rat(1, 1)));
        assert!(Series::zero(1, 4).homogeneous_part(2).is_zero());
        let g = Series::from_terms(2, 4, [(w(&[0, 1]), rat(1, 1)), (w(&[1, 0]), rat(1, 1))]);
        assert!(g.homogeneous_part(1).is_zero());
        assert_eq!(f.low_part(1), Series::var(1, 4, 0));
    }

    #[test]
    fn mismatched_shapes_are_rejected() {
        let a = Series::var(2, 4, 0);
        let b = Series::var(2, 5, 0);
        assert_eq!(a.try_mul(&b), Err(Error::TruncMismatch(2, 4, 2, 5)));
        assert!(a.try_add(&Series::var(3, 4, 0)).is_err());
    }
}
