//! Truncated Jacobi ideals, finite-dimensionality certificates and the class
//! of a superpotential in `HH_0` of its Jacobi algebra.
//!
//! Everything here is linear algebra on `F / m^(N+1)`: a closed two-sided
//! ideal `J` is represented by the span of `u g v` for generators `g` and
//! words `u`, `v`, row-reduced against the degree-first word order.

use rayon::prelude::*;

use crate::cyclic::{canonicalize, Superpotential};
use crate::exactlin::{Echelon, SparseVec};
use crate::ncseries::{count_words_up_to, words_of_degree, Series, Word};
use crate::{Error, Result};

/// Default size guard on the monomial basis (`2^22` words).
pub const DEFAULT_SIZE_GUARD: u128 = 1 << 22;
/// Default certificate search bound.
pub const DEFAULT_NMAX: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JacobiConfig {
    pub nmax: usize,
    pub size_guard: u128,
}

impl Default for JacobiConfig {
    fn default() -> Self {
        JacobiConfig {
            nmax: DEFAULT_NMAX,
            size_guard: DEFAULT_SIZE_GUARD,
        }
    }
}

/// `(J + m^(level+1)) / m^(level+1)` in reduced echelon form. The pivot of a
/// row is its smallest word, so rows with pivot degree `>= d` span
/// `J ∩ m^d` modulo `m^(level+1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedIdeal {
    nvars: usize,
    level: usize,
    basis: Echelon<Word>,
}

impl TruncatedIdeal {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn dim(&self) -> usize {
        self.basis.rank()
    }

    pub fn basis(&self) -> &Echelon<Word> {
        &self.basis
    }

    /// Basis rows whose pivot has degree `d`.
    pub fn rows_of_degree(&self, d: usize) -> Vec<Series> {
        self.basis
            .rows()
            .filter(|(p, _)| p.len() == d)
            .map(|(_, r)| self.row_series(r))
            .collect()
    }

    pub fn rows(&self) -> Vec<Series> {
        self.basis.rows().map(|(_, r)| self.row_series(r)).collect()
    }

    fn row_series(&self, r: &SparseVec<Word>) -> Series {
        Series::from_terms(self.nvars, self.level, r.iter().map(|(w, c)| (*w, c.clone())))
    }

    /// Reduction of `f` (read at this level) modulo the ideal.
    pub fn reduce(&self, f: &Series) -> Series {
        let v: SparseVec<Word> = f
            .terms()
            .filter(|(w, _)| w.len() <= self.level)
            .map(|(w, c)| (*w, c.clone()))
            .collect();
        self.row_series(&self.basis.reduce(v))
    }

    pub fn contains(&self, f: &Series) -> bool {
        self.reduce(f).is_zero()
    }

    /// Whether every word of degree `d` lies in the span.
    pub fn covers_degree(&self, d: usize) -> bool {
        d <= self.level
            && self.basis.pivots().filter(|p| p.len() == d).count() as u128
                == (self.nvars as u128).pow(d as u32)
    }

    /// Words of degree `< below` that are not pivots: a basis of the
    /// quotient in those degrees.
    pub fn normal_words(&self, below: usize) -> Vec<Word> {
        (0..below.min(self.level + 1))
            .flat_map(|d| words_of_degree(self.nvars, d))
            .filter(|w| !self.basis.is_pivot(w))
            .collect()
    }

    /// Closure under left and right multiplication by generators.
    pub fn is_two_sided(&self) -> bool {
        let rows = self.rows();
        rows.iter().all(|r| {
            (0..self.nvars).all(|i| {
                let x = Series::var(self.nvars, self.level, i);
                self.contains(&(&x * r)) && self.contains(&(r * &x))
            })
        })
    }
}

fn check_guard(nvars: usize, level: usize, guard: u128) -> Result<()> {
    let size = count_words_up_to(nvars, level);
    if size > guard {
        return Err(Error::LevelTooLarge { size, guard });
    }
    Ok(())
}

/// Cyclic derivatives `[D_1 Phi, ..., D_n Phi]`.
pub fn jacobi_generators(phi: &Superpotential) -> Vec<Series> {
    (0..phi.nvars()).map(|i| phi.cyclic_derivative(i)).collect()
}

/// Span of `u g v` over generators `g` and words `u`, `v` with
/// `deg u + ord g + deg v <= level`.
pub fn ideal_span(gens: &[Series], level: usize, size_guard: u128) -> Result<TruncatedIdeal> {
    let nvars = gens
        .first()
        .map(Series::nvars)
        .ok_or_else(|| Error::InvalidArgument("no generators".into()))?;
    check_guard(nvars, level, size_guard)?;
    let gens: Vec<Series> = gens
        .iter()
        .map(|g| g.retrunc(level))
        .filter(|g| !g.is_zero())
        .collect();

    let mut jobs: Vec<(usize, Word, Word)> = Vec::new();
    for (gi, g) in gens.iter().enumerate() {
        let ord = g.order().expect("nonzero generator");
        for k in 0..=level.saturating_sub(ord) {
            if ord + k > level {
                break;
            }
            for a in 0..=k {
                let lefts = words_of_degree(nvars, a);
                let rights = words_of_degree(nvars, k - a);
                for u in &lefts {
                    for v in &rights {
                        jobs.push((gi, *u, *v));
                    }
                }
            }
        }
    }
    let rows: Vec<SparseVec<Word>> = jobs
        .par_iter()
        .map(|(gi, u, v)| {
            let room = level - u.len() - v.len();
            gens[*gi]
                .terms()
                .take_while(|(w, _)| w.len() <= room)
                .map(|(w, c)| (u.concat(*w).concat(*v), c.clone()))
                .collect()
        })
        .collect();
    let mut basis = Echelon::new();
    for r in rows {
        basis.insert(r);
    }
    basis.reduce_fully();
    Ok(TruncatedIdeal { nvars, level, basis })
}

/// Outcome of the finite-dimensionality search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiReport {
    /// `m^N ⊆ J` was proven for some `N <= searched_to`.
    pub finite: bool,
    /// Last level examined.
    pub searched_to: usize,
    /// Smallest `N` with `m^N ⊆ J`.
    pub nil_degree: Option<usize>,
    pub dimension: Option<usize>,
    /// Basis of the Jacobi algebra (words of degree below `nil_degree`).
    pub normal_words: Vec<Word>,
}

/// Searches `N = 1..=nmax` for the first level where every degree-`N` word
/// lies in `J + m^(N+1)`; since `J` is closed this gives `m^N ⊆ J`.
///
/// A negative outcome is inconclusive, not a proof of infinite dimension.
/// `phi` known modulo `m^(T+1)` only determines its cyclic derivatives
/// modulo `m^T`, so the search stops at level `T - 1`.
pub fn finite_dim_certificate(phi: &Superpotential, config: &JacobiConfig) -> Result<JacobiReport> {
    phi.order()?;
    let gens = jacobi_generators(phi);
    let top = config.nmax.min(phi.trunc().saturating_sub(1));
    for level in 1..=top {
        let ideal = ideal_span(&gens, level, config.size_guard)?;
        if ideal.covers_degree(level) {
            let normal_words = ideal.normal_words(level);
            return Ok(JacobiReport {
                finite: true,
                searched_to: level,
                nil_degree: Some(level),
                dimension: Some(normal_words.len()),
                normal_words,
            });
        }
    }
    Ok(JacobiReport {
        finite: false,
        searched_to: top,
        nil_degree: None,
        dimension: None,
        normal_words: Vec::new(),
    })
}

/// Row space of `pi(J)` in necklace coordinates at `level`.
///
/// `pi(u g v) = pi(v u g)`, so the rows `pi(w g)` for words `w` suffice.
pub(crate) fn cyclic_ideal_rows(phi: &Superpotential, level: usize, size_guard: u128) -> Result<Echelon<Word>> {
    check_guard(phi.nvars(), level, size_guard)?;
    let gens: Vec<Series> = jacobi_generators(phi)
        .into_iter()
        .map(|g| g.retrunc(level))
        .filter(|g| !g.is_zero())
        .collect();
    let mut jobs: Vec<(usize, Word)> = Vec::new();
    for (gi, g) in gens.iter().enumerate() {
        let ord = g.order().expect("nonzero generator");
        for k in 0..=level.saturating_sub(ord) {
            if ord + k > level {
                break;
            }
            jobs.extend(words_of_degree(phi.nvars(), k).into_iter().map(|w| (gi, w)));
        }
    }
    let rows: Vec<SparseVec<Word>> = jobs
        .par_iter()
        .map(|(gi, w)| {
            let g = &gens[*gi];
            let room = level - w.len();
            let prod = Series::from_terms(
                g.nvars(),
                level,
                g.terms()
                    .take_while(|(v, _)| v.len() <= room)
                    .map(|(v, c)| (w.concat(*v), c.clone())),
            );
            canonicalize(&prod)
                .rep()
                .terms()
                .map(|(v, c)| (*v, c.clone()))
                .collect()
        })
        .collect();
    let mut basis = Echelon::new();
    for r in rows {
        basis.insert(r);
    }
    Ok(basis)
}

fn certified_level(report: &JacobiReport) -> Result<usize> {
    match (report.finite, report.nil_degree) {
        (true, Some(n)) => Ok(n),
        _ => Err(Error::NotCertifiedFinite(report.searched_to)),
    }
}

/// Residue of `theta` in `F_cyc / pi(J)`; zero exactly when `[theta] = 0`
/// in `HH_0` of the Jacobi algebra.
///
/// With `m^N ⊆ J` every term of degree `>= N` dies, so the computation at
/// level `N` is exact.
pub fn class_in_hh0(
    theta: &Superpotential,
    phi: &Superpotential,
    report: &JacobiReport,
    size_guard: u128,
) -> Result<Superpotential> {
    let level = certified_level(report)?;
    let rows = cyclic_ideal_rows(phi, level, size_guard)?;
    let target: SparseVec<Word> = theta
        .rep()
        .terms()
        .filter(|(w, _)| w.len() <= level)
        .map(|(w, c)| (*w, c.clone()))
        .collect();
    let residue = rows.reduce(target);
    Ok(canonicalize(&Series::from_terms(
        theta.nvars(),
        theta.trunc(),
        residue,
    )))
}

/// `[Phi] = 0` in `HH_0(Lambda(F, Phi))`.
pub fn is_quasi_homogeneous(phi: &Superpotential, report: &JacobiReport, size_guard: u128) -> Result<bool> {
    Ok(class_in_hh0(phi, phi, report, size_guard)?.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn w(l: &[usize]) -> Word {
        Word::from_letters(l)
    }

    fn sp(n: usize, t: usize, terms: &[(&[usize], i64)]) -> Superpotential {
        canonicalize(&Series::from_terms(n, t, terms.iter().map(|(l, c)| (w(l), rat(*c, 1)))))
    }

    #[test]
    fn generators() {
        let g = jacobi_generators(&sp(2, 6, &[(&[0, 1, 0, 1], 1)]));
        assert_eq!(g[0], Series::from_terms(2, 6, [(w(&[1, 0, 1]), rat(2, 1))]));
        assert_eq!(g[1], Series::from_terms(2, 6, [(w(&[0, 1, 0]), rat(2, 1))]));
        let g = jacobi_generators(&sp(2, 6, &[(&[0; 3], 1), (&[1; 3], 1)]));
        assert_eq!(g[1], Series::from_terms(2, 6, [(w(&[1, 1]), rat(3, 1))]));
    }

    #[test]
    fn span_of_square() {
        let x2 = Series::from_terms(1, 4, [(w(&[0, 0]), rat(1, 1))]);
        let ideal = ideal_span(&[x2], 4, DEFAULT_SIZE_GUARD).unwrap();
        assert_eq!(ideal.dim(), 3);
        assert_eq!(ideal.normal_words(5), vec![Word::EMPTY, w(&[0])]);
    }

    #[test]
    fn span_of_two_squares_matches_factor_enumeration() {
        let gens = [
            Series::from_terms(2, 3, [(w(&[0, 0]), rat(1, 1))]),
            Series::from_terms(2, 3, [(w(&[1, 1]), rat(1, 1))]),
        ];
        let ideal = ideal_span(&gens, 3, DEFAULT_SIZE_GUARD).unwrap();
        // oracle: words of degree <= 3 containing xx or yy as a factor
        let expected: Vec<Word> = (0..=3)
            .flat_map(|d| words_of_degree(2, d))
            .filter(|u| (1..u.len()).any(|j| u.at(j) == u.at(j - 1)))
            .collect();
        assert_eq!(ideal.dim(), expected.len());
        for u in expected {
            assert!(ideal.contains(&Series::monomial(2, 3, u, rat(1, 1))));
        }
        assert!(!ideal.contains(&Series::monomial(2, 3, w(&[0, 1, 0]), rat(1, 1))));
        assert!(ideal.is_two_sided());
    }

    #[test]
    fn linear_generator() {
        let g = Series::from_terms(2, 3, [(w(&[0]), rat(1, 1)), (w(&[1]), rat(-1, 1))]);
        let ideal = ideal_span(std::slice::from_ref(&g), 3, DEFAULT_SIZE_GUARD).unwrap();
        assert!(ideal.contains(&g));
        let xy = Series::var(2, 3, 0).try_mul(&g).unwrap().try_mul(&Series::var(2, 3, 1)).unwrap();
        assert!(ideal.contains(&xy));
    }

    #[test]
    fn certificate_for_cube() {
        let r = finite_dim_certificate(&sp(1, 8, &[(&[0; 3], 1)]), &JacobiConfig::default()).unwrap();
        assert!(r.finite);
        assert_eq!(r.nil_degree, Some(2));
        assert_eq!(r.dimension, Some(2));
        assert_eq!(r.normal_words, vec![Word::EMPTY, w(&[0])]);
    }

    #[test]
    fn certificate_inconclusive_for_fermat_cubic() {
        let cfg = JacobiConfig {
            nmax: 6,
            ..JacobiConfig::default()
        };
        let r = finite_dim_certificate(&sp(2, 8, &[(&[0; 3], 1), (&[1; 3], 1)]), &cfg).unwrap();
        assert!(!r.finite);
        assert_eq!(r.searched_to, 6);
    }

    #[test]
    fn size_guard() {
        let g = Series::from_terms(3, 8, [(w(&[0, 0]), rat(1, 1))]);
        assert!(matches!(ideal_span(&[g], 8, 100), Err(Error::LevelTooLarge { .. })));
    }

    #[test]
    fn classes_for_cube() {
        let phi = sp(1, 8, &[(&[0; 3], 1)]);
        let report = finite_dim_certificate(&phi, &JacobiConfig::default()).unwrap();
        assert!(class_in_hh0(&phi, &phi, &report, DEFAULT_SIZE_GUARD).unwrap().is_zero());
        let x = sp(1, 8, &[(&[0], 1)]);
        assert_eq!(class_in_hh0(&x, &phi, &report, DEFAULT_SIZE_GUARD).unwrap(), x);
        let x2 = sp(1, 8, &[(&[0, 0], 1)]);
        assert!(class_in_hh0(&x2, &phi, &report, DEFAULT_SIZE_GUARD).unwrap().is_zero());
        assert!(is_quasi_homogeneous(&phi, &report, DEFAULT_SIZE_GUARD).unwrap());
    }

    #[test]
    fn quartic_is_quasi_homogeneous() {
        let phi = sp(1, 8, &[(&[0; 4], 1)]);
        let report = finite_dim_certificate(&phi, &JacobiConfig::default()).unwrap();
        assert_eq!(report.nil_degree, Some(3));
        assert!(is_quasi_homogeneous(&phi, &report, DEFAULT_SIZE_GUARD).unwrap());
    }

    #[test]
    fn class_requires_certificate() {
        let phi = sp(2, 8, &[(&[0; 3], 1), (&[1; 3], 1)]);
        let cfg = JacobiConfig {
            nmax: 4,
            ..JacobiConfig::default()
        };
        let report = finite_dim_certificate(&phi, &cfg).unwrap();
        assert_eq!(
            class_in_hh0(&phi, &phi, &report, DEFAULT_SIZE_GUARD),
            Err(Error::NotCertifiedFinite(4))
        );
    }
}
