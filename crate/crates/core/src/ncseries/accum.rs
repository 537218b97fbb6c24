//! Integer accumulation over a common denominator.
//!
//! Summing many `BigRational` products normalises (one gcd) at every step,
//! which dominates substitution and derivation costs once coefficients grow.
//! Here numerators are accumulated as integers and each output coefficient
//! is reduced once at the end.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::series::Series;
use super::word::Word;
use crate::Rat;

/// A series written as `terms / den`, terms sorted by word.
pub(crate) struct Scaled {
    pub terms: Vec<(Word, BigInt)>,
    pub den: BigInt,
}

impl Scaled {
    pub fn of(s: &Series) -> Scaled {
        let den = s
            .terms()
            .fold(BigInt::one(), |d, (_, c)| d.lcm(c.denom()));
        let terms = s
            .terms()
            .map(|(w, c)| (*w, c.numer() * (&den / c.denom())))
            .collect();
        Scaled { terms, den }
    }
}

#[derive(Default)]
pub(crate) struct Accumulator {
    map: HashMap<Word, BigInt>,
    den: BigInt,
}

impl Accumulator {
    pub fn new() -> Self {
        Accumulator {
            map: HashMap::new(),
            den: BigInt::one(),
        }
    }

    /// Makes the common denominator a multiple of `den` and returns the
    /// factor that contributions over `den` must be multiplied by.
    pub fn align(&mut self, den: &BigInt) -> BigInt {
        let lcm = self.den.lcm(den);
        if lcm != self.den {
            let f = &lcm / &self.den;
            for v in self.map.values_mut() {
                *v *= &f;
            }
            self.den = lcm;
        }
        &self.den / den
    }

    /// Adds an already aligned numerator.
    pub fn add(&mut self, w: Word, v: BigInt) {
        match self.map.get_mut(&w) {
            Some(x) => *x += v,
            None => {
                self.map.insert(w, v);
            }
        }
    }

    /// `self += a * b`, keeping products of degree `<= level`.
    pub fn add_product(&mut self, a: &Scaled, b: &Scaled, level: usize) {
        let f = self.align(&(&a.den * &b.den));
        for (wa, ca) in &a.terms {
            if wa.len() > level {
                break;
            }
            let room = level - wa.len();
            let ca = ca * &f;
            for (wb, cb) in &b.terms {
                if wb.len() > room {
                    break;
                }
                self.add(wa.concat(*wb), &ca * cb);
            }
        }
    }

    /// Sorted form for further products.
    pub fn into_scaled(self, level: usize) -> Scaled {
        let mut terms: Vec<(Word, BigInt)> = self
            .map
            .into_iter()
            .filter(|(w, v)| !v.is_zero() && w.len() <= level)
            .collect();
        terms.sort_by_key(|a| a.0);
        Scaled { terms, den: self.den }
    }

    pub fn into_series(self, nvars: usize, trunc: usize) -> Series {
        let den = self.den;
        Series::from_terms(
            nvars,
            trunc,
            self.map
                .into_iter()
                .filter(|(w, v)| !v.is_zero() && w.len() <= trunc)
                .map(|(w, v)| (w, Rat::new(v, den.clone()))),
        )
    }
}
