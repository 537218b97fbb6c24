//! Necklaces, canonical representatives of superpotentials and cyclic
//! derivatives.
//!
//! The projection `F -> F/[F,F]^cl` is realised by moving every coefficient
//! onto the standard word of its necklace, which is the lexicographically
//! largest rotation.

use std::collections::HashMap;

use crate::derive::Derivation;
use crate::ncseries::{words_of_degree, Series, Word};
use crate::{Error, Rat, Result};

/// Lexicographically greatest cyclic rotation of `w`.
pub fn standard_word(w: Word) -> Word {
    (1..w.len()).map(|k| w.rotate(k)).fold(w, Word::max)
}

pub fn is_standard(w: Word) -> bool {
    standard_word(w) == w
}

/// Standard words of length exactly `degree`, ascending.
pub fn necklaces_of_degree(nvars: usize, degree: usize) -> Vec<Word> {
    words_of_degree(nvars, degree)
        .into_iter()
        .filter(|w| is_standard(*w))
        .collect()
}

/// A class in `F / ([F,F]^cl + m^(N+1))`, stored as its canonical
/// representative (supported on standard words only).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Superpotential {
    rep: Series,
}

impl Superpotential {
    pub fn rep(&self) -> &Series {
        &self.rep
    }

    pub fn into_rep(self) -> Series {
        self.rep
    }

    pub fn nvars(&self) -> usize {
        self.rep.nvars()
    }

    pub fn trunc(&self) -> usize {
        self.rep.trunc()
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    /// Minimal degree of the canonical representative.
    pub fn order(&self) -> Result<usize> {
        self.rep.order().ok_or(Error::ZeroPotential)
    }

    pub fn truncated(&self, level: usize) -> Superpotential {
        Superpotential {
            rep: self.rep.truncated(level),
        }
    }

    pub fn retrunc(&self, level: usize) -> Superpotential {
        Superpotential {
            rep: self.rep.retrunc(level),
        }
    }

    /// Word-level cyclic derivative: `u x_i v` contributes `v u`.
    pub fn cyclic_derivative(&self, i: usize) -> Series {
        cyclic_derivative(&self.rep, i)
    }
}

/// Cyclic derivative of an arbitrary series. It vanishes on commutators, so
/// any representative of a superpotential gives the same answer.
pub fn cyclic_derivative(f: &Series, i: usize) -> Series {
    assert!(i < f.nvars(), "generator {i} out of range");
    let mut acc: HashMap<Word, Rat> = HashMap::new();
    for (w, c) in f.terms() {
        let d = w.len();
        for j in (0..d).filter(|&j| w.at(j) == i) {
            let out = w.slice(j + 1, d).concat(w.slice(0, j));
            *acc.entry(out).or_insert_with(|| Rat::from_integer(0.into())) += c;
        }
    }
    Series::from_accumulator(f.nvars(), f.trunc(), acc)
}

/// The projection `pi`: sums each necklace onto its standard word.
pub fn canonicalize(f: &Series) -> Superpotential {
    let mut acc: HashMap<Word, Rat> = HashMap::new();
    for (w, c) in f.terms() {
        *acc.entry(standard_word(*w)).or_insert_with(|| Rat::from_integer(0.into())) += c;
    }
    Superpotential {
        rep: Series::from_accumulator(f.nvars(), f.trunc(), acc),
    }
}

/// `Phi_#(xi) = pi(xi(phi))`.
pub fn apply_derivation(xi: &Derivation, phi: &Superpotential) -> Result<Superpotential> {
    Ok(canonicalize(&xi.apply(phi.rep())?))
}

/// Word commutator `uv - vu` as a series.
pub fn commutator(nvars: usize, trunc: usize, u: Word, v: Word) -> Series {
    let one = Rat::from_integer(1.into());
    Series::from_terms(nvars, trunc, [(u.concat(v), one.clone()), (v.concat(u), -one)])
}
