//! Euler fields, weights and weighted-homogeneous normal forms of
//! superpotentials with finite-dimensional Jacobi algebra.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::cyclic::{apply_derivation, canonicalize, Superpotential};
use crate::derive::{jordan_chevalley, word_weight, Derivation};
use crate::exactlin::{solve_sparse, RatMatrix, SparseVec};
use crate::jacobi::{finite_dim_certificate, is_quasi_homogeneous, jacobi_generators, JacobiConfig, JacobiReport};
use crate::ncseries::{count_words_up_to, words_of_degree, Endomorphism, Series, Word};
use crate::{Error, Rat, Result};

/// Weights `(r_1, ..., r_n)` attached to the generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightType {
    pub weights: Vec<Rat>,
}

impl WeightType {
    pub fn new(weights: Vec<Rat>) -> Self {
        WeightType { weights }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Weights sorted ascending; equal for right-equivalent inputs.
    pub fn canonical(&self) -> WeightType {
        let mut weights = self.weights.clone();
        weights.sort();
        WeightType { weights }
    }
}

pub fn canonical_type(r: &WeightType) -> WeightType {
    r.canonical()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizationResult {
    pub weight_type: WeightType,
    /// Automorphism `H` with `H(Phi)` weighted homogeneous.
    pub transform: Endomorphism,
    pub normal_form: Superpotential,
    /// Euler field: `Phi_#(euler) = Phi`.
    pub euler: Derivation,
}

/// Every word of the canonical representative has weight exactly one.
pub fn is_weighted_homogeneous(phi: &Superpotential, r: &WeightType) -> bool {
    if r.len() != phi.nvars() {
        return false;
    }
    let one = Rat::one();
    phi.rep().terms().all(|(w, _)| word_weight(*w, &r.weights) == one)
}

fn certified(phi: &Superpotential, config: &JacobiConfig) -> Result<JacobiReport> {
    let report = finite_dim_certificate(phi, config)?;
    if !report.finite {
        return Err(Error::NotCertifiedFinite(report.searched_to));
    }
    if !is_quasi_homogeneous(phi, &report, config.size_guard)? {
        return Err(Error::NotQuasiHomogeneous);
    }
    Ok(report)
}

/// Finds `xi` with `xi(x_i) = g_i ∈ m` and `Phi_#(xi) = Phi`.
///
/// The coefficients of the `g_i` are unknowns; since
/// `pi(xi(Phi)) = pi(sum g_i D_i Phi)` the identity is one linear system in
/// necklace coordinates, solved exactly up to the truncation of `phi`.
/// Unknowns outside the first basis of the column space are set to zero,
/// which makes the answer deterministic.
pub fn euler_solve(phi: &Superpotential, config: &JacobiConfig) -> Result<Derivation> {
    certified(phi, config)?;
    let (n, trunc) = (phi.nvars(), phi.trunc());
    let size = count_words_up_to(n, trunc);
    if size > config.size_guard {
        return Err(Error::LevelTooLarge {
            size,
            guard: config.size_guard,
        });
    }
    let gens = jacobi_generators(phi);

    let mut unknowns: Vec<(usize, Word)> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        let Some(ord) = g.order() else { continue };
        for d in 1..=trunc.saturating_sub(ord) {
            unknowns.extend(words_of_degree(n, d).into_iter().map(|w| (i, w)));
        }
    }
    let columns: Vec<SparseVec<Word>> = unknowns
        .par_iter()
        .map(|(i, w)| {
            let g = &gens[*i];
            let room = trunc - w.len();
            let prod = Series::from_terms(
                n,
                trunc,
                g.terms()
                    .take_while(|(v, _)| v.len() <= room)
                    .map(|(v, c)| (w.concat(*v), c.clone())),
            );
            canonicalize(&prod).rep().terms().map(|(v, c)| (*v, c.clone())).collect()
        })
        .collect();
    let target: SparseVec<Word> = phi.rep().terms().map(|(v, c)| (*v, c.clone())).collect();
    let solution = match solve_sparse(&columns, &target) {
        Err(Error::Inconsistent) => return Err(Error::NotQuasiHomogeneous),
        other => other?,
    };

    let mut images = vec![Series::zero(n, trunc); n];
    for ((i, w), c) in unknowns.iter().zip(solution) {
        images[*i].add_term(*w, c);
    }
    let xi = Derivation::new(images)?;
    if apply_derivation(&xi, phi)? != *phi {
        return Err(Error::VerificationFailed("Euler identity does not hold".into()));
    }
    Ok(xi)
}

struct Weighted {
    euler: Derivation,
    weights: WeightType,
    conjugator: Endomorphism,
}

fn weigh(phi: &Superpotential, config: &JacobiConfig) -> Result<Weighted> {
    let euler = euler_solve(phi, config)?;
    let jc = jordan_chevalley(&euler)?;
    if apply_derivation(&jc.semisimple, phi)? != *phi {
        return Err(Error::VerificationFailed("semisimple part is not an Euler field".into()));
    }
    if !apply_derivation(&jc.nilpotent, phi)?.is_zero() {
        return Err(Error::VerificationFailed("nilpotent part does not annihilate".into()));
    }
    let half = Rat::new(1.into(), 2.into());
    for (i, r) in jc.eigenvalues.iter().enumerate() {
        if !(*r > Rat::zero() && *r < half) {
            return Err(Error::WeightOutOfRange(r.to_string(), i));
        }
    }
    Ok(Weighted {
        euler,
        weights: WeightType::new(jc.eigenvalues),
        conjugator: jc.conjugator,
    })
}

/// Weights of the semisimple part of an Euler field. Every weight lies
/// strictly between `0` and `1/2`.
pub fn weights(phi: &Superpotential, config: &JacobiConfig) -> Result<WeightType> {
    Ok(weigh(phi, config)?.weights)
}

/// Coordinates in which `phi` becomes weighted homogeneous.
///
/// The Jordan-Chevalley conjugator `H` diagonalises the semisimple part of
/// the Euler field, so `H(Phi)` is fixed by `sum r_i x_i d/dx_i`. The result
/// is exact modulo `m^(trunc+1)`.
pub fn normalize(phi: &Superpotential, config: &JacobiConfig) -> Result<NormalizationResult> {
    let Weighted {
        euler,
        weights,
        conjugator,
    } = weigh(phi, config)?;
    let normal_form = canonicalize(&conjugator.substitute(phi.rep())?);
    if !is_weighted_homogeneous(&normal_form, &weights) {
        return Err(Error::VerificationFailed("normal form is not weighted homogeneous".into()));
    }
    Ok(NormalizationResult {
        weight_type: weights,
        transform: conjugator,
        normal_form,
        euler,
    })
}

/// Evidence that a weighted-homogeneous superpotential has only one type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniquenessCertificate {
    pub weights: WeightType,
    /// Row `i` records a monomial `x_i^a` (as `a e_i`) or
    /// `x_i^b x_p x_i^c` (as `(b+c) e_i + e_p`) present in the potential;
    /// `A r = 1` for every admissible type `r`.
    pub matrix: RatMatrix,
}

/// Checks that two diagonal Euler fields of `phi` coincide, and certifies
/// why: the monomials forced by finite dimensionality give a strictly
/// diagonally dominant (hence invertible) system for the weights.
pub fn semisimple_uniqueness_check(
    phi: &Superpotential,
    xi: &Derivation,
    eta: &Derivation,
    config: &JacobiConfig,
) -> Result<UniquenessCertificate> {
    let a = xi.diagonal_weights().ok_or(Error::NotDiagonal)?;
    let b = eta.diagonal_weights().ok_or(Error::NotDiagonal)?;
    let report = finite_dim_certificate(phi, config)?;
    if !report.finite {
        return Err(Error::NotCertifiedFinite(report.searched_to));
    }
    for d in [xi, eta] {
        if apply_derivation(d, phi)? != *phi {
            return Err(Error::InvalidArgument("not an Euler field of the potential".into()));
        }
    }
    if a != b {
        return Err(Error::UniquenessViolated("distinct diagonal Euler fields".into()));
    }

    let n = phi.nvars();
    let mut matrix = RatMatrix::zeros(n, n);
    for i in 0..n {
        let row = forced_monomial(phi, i).ok_or_else(|| {
            Error::UniquenessViolated(format!("no monomial x_{i}^a or x_{i}^b x_p x_{i}^c"))
        })?;
        for (p, c) in row.into_iter().enumerate() {
            matrix[(i, p)] = Rat::from_integer(c.into());
        }
    }
    for i in 0..n {
        let off: Rat = (0..n).filter(|&p| p != i).map(|p| matrix[(i, p)].clone()).sum();
        if matrix[(i, i)] <= off {
            return Err(Error::UniquenessViolated(format!("row {i} is not diagonally dominant")));
        }
    }
    let ones = vec![Rat::one(); n];
    if matrix.mul_vec(&a) != ones {
        return Err(Error::UniquenessViolated("weights do not solve A r = 1".into()));
    }
    Ok(UniquenessCertificate {
        weights: WeightType::new(a),
        matrix,
    })
}

/// Letter counts of a pure power of `x_i`, or else of a word with exactly
/// one other letter, found among the necklaces of `phi`.
fn forced_monomial(phi: &Superpotential, i: usize) -> Option<Vec<usize>> {
    let counts: Vec<Vec<usize>> = phi.rep().terms().map(|(w, _)| w.letter_counts(phi.nvars())).collect();
    let total = |c: &Vec<usize>| c.iter().sum::<usize>();
    counts
        .iter()
        .find(|c| c[i] >= 2 && c[i] == total(c))
        .or_else(|| counts.iter().find(|c| c[i] >= 1 && total(c) == c[i] + 1))
        .cloned()
}

/// Image of a superpotential in the commutative power series ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutativePoly {
    pub nvars: usize,
    pub trunc: usize,
    /// Exponent vector to coefficient; zero coefficients are never stored.
    pub terms: BTreeMap<Vec<usize>, Rat>,
}

impl CommutativePoly {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_weighted_homogeneous(&self, r: &WeightType) -> bool {
        r.len() == self.nvars
            && self.terms.keys().all(|e| {
                e.iter()
                    .zip(&r.weights)
                    .map(|(k, w)| w * Rat::from_integer((*k).into()))
                    .sum::<Rat>()
                    .is_one()
            })
    }
}

/// `x_i -> x_i` in commuting variables. Commutators die, so this is well
/// defined on superpotentials.
pub fn abelianize(phi: &Superpotential) -> CommutativePoly {
    let mut terms: BTreeMap<Vec<usize>, Rat> = BTreeMap::new();
    for (w, c) in phi.rep().terms() {
        *terms.entry(w.letter_counts(phi.nvars())).or_insert_with(Rat::zero) += c;
    }
    terms.retain(|_, c| !c.is_zero());
    CommutativePoly {
        nvars: phi.nvars(),
        trunc: phi.trunc(),
        terms,
    }
}
