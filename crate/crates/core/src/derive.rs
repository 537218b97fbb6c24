//! Derivations of `F` preserving `m`, the adjoint action of automorphisms,
//! and the Jordan-Chevalley decomposition.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::exactlin::{rational_jordan_form, RatMatrix};
use crate::ncseries::{Accumulator, Endomorphism, Scaled, Series, Word};
use crate::{Error, Rat, Result};

/// A derivation in `Der^+`, determined by the images of the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    nvars: usize,
    trunc: usize,
    images: Vec<Series>,
}

impl Derivation {
    pub fn new(images: Vec<Series>) -> Result<Self> {
        let first = images
            .first()
            .ok_or_else(|| Error::InvalidArgument("derivation needs at least one image".into()))?;
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
        Ok(Derivation { nvars, trunc, images })
    }

    pub fn zero(nvars: usize, trunc: usize) -> Self {
        Derivation {
            nvars,
            trunc,
            images: vec![Series::zero(nvars, trunc); nvars],
        }
    }

    /// `x_i -> weights[i] * x_i`.
    pub fn diagonal(weights: &[Rat], trunc: usize) -> Self {
        let n = weights.len();
        Derivation {
            nvars: n,
            trunc,
            images: weights
                .iter()
                .enumerate()
                .map(|(i, r)| Series::var(n, trunc, i).scale(r))
                .collect(),
        }
    }

    /// Principle derivation with the given linear part (column `i` is the
    /// image of `x_i`).
    pub fn linear(m: &RatMatrix, trunc: usize) -> Result<Self> {
        let e = Endomorphism::linear(m, trunc)?;
        Derivation::new(e.images().to_vec())
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

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(Series::is_zero)
    }

    pub fn linear_part(&self) -> RatMatrix {
        let cols: Vec<Vec<Rat>> = self.images.iter().map(Series::linear_coeffs).collect();
        RatMatrix::from_columns(&cols).expect("square by construction")
    }

    /// The principle derivation `x_i -> xi(x_i)_(1)`.
    pub fn linear_derivation(&self) -> Derivation {
        self.map_images(|s| s.homogeneous_part(1))
    }

    /// Eigenvalues when every `x_i` is an eigenvector, i.e. `xi(x_i) = r_i x_i`.
    pub fn diagonal_weights(&self) -> Option<Vec<Rat>> {
        self.images
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let x = Word::letter(i);
                s.terms().all(|(w, _)| *w == x).then(|| s.coeff(&x))
            })
            .collect()
    }

    pub fn is_principle(&self) -> bool {
        self.images.iter().all(|s| s.is_homogeneous_of(1))
    }

    pub fn truncated(&self, level: usize) -> Derivation {
        Derivation {
            nvars: self.nvars,
            trunc: level,
            images: self.images.iter().map(|s| s.truncated(level)).collect(),
        }
    }

    fn map_images(&self, f: impl Fn(&Series) -> Series) -> Derivation {
        Derivation {
            nvars: self.nvars,
            trunc: self.trunc,
            images: self.images.iter().map(f).collect(),
        }
    }

    fn check_series(&self, f: &Series) -> Result<()> {
        if f.nvars() != self.nvars || f.trunc() != self.trunc {
            return Err(Error::TruncMismatch(self.nvars, self.trunc, f.nvars(), f.trunc()));
        }
        Ok(())
    }

    fn check_derivation(&self, other: &Derivation) -> Result<()> {
        if other.nvars != self.nvars || other.trunc != self.trunc {
            return Err(Error::TruncMismatch(self.nvars, self.trunc, other.nvars, other.trunc));
        }
        Ok(())
    }

    /// Leibniz extension: `xi(uv) = xi(u) v + u xi(v)`.
    pub fn apply(&self, f: &Series) -> Result<Series> {
        self.check_series(f)?;
        let images: Vec<Scaled> = self.images.iter().map(Scaled::of).collect();
        let mut acc = Accumulator::new();
        let f_den = f.terms().fold(BigInt::one(), |d, (_, c)| d.lcm(c.denom()));
        for g in &images {
            acc.align(&(&f_den * &g.den));
        }
        // the denominator is now fixed, so these factors stay valid
        let factors: Vec<BigInt> = images.iter().map(|g| acc.align(&(&f_den * &g.den))).collect();
        for (w, c) in f.terms() {
            let d = w.len();
            if d == 0 {
                continue;
            }
            let room = self.trunc + 1 - d;
            let c = c.numer() * (&f_den / c.denom());
            for j in 0..d {
                let prefix = w.slice(0, j);
                let suffix = w.slice(j + 1, d);
                let letter = w.at(j);
                let scale = &c * &factors[letter];
                for (u, a) in &images[letter].terms {
                    if u.len() > room {
                        break;
                    }
                    acc.add(prefix.concat(*u).concat(suffix), &scale * a);
                }
            }
        }
        Ok(acc.into_series(self.nvars, self.trunc))
    }

    pub fn try_add(&self, other: &Derivation) -> Result<Derivation> {
        self.check_derivation(other)?;
        Ok(Derivation {
            nvars: self.nvars,
            trunc: self.trunc,
            images: self.images.iter().zip(&other.images).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, other: &Derivation) -> Result<Derivation> {
        self.check_derivation(other)?;
        Ok(Derivation {
            nvars: self.nvars,
            trunc: self.trunc,
            images: self.images.iter().zip(&other.images).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, c: &Rat) -> Derivation {
        self.map_images(|s| s.scale(c))
    }
}

/// `[xi, eta](x_i) = xi(eta(x_i)) - eta(xi(x_i))`.
pub fn bracket(xi: &Derivation, eta: &Derivation) -> Result<Derivation> {
    xi.check_derivation(eta)?;
    let images = (0..xi.nvars)
        .map(|i| Ok(&xi.apply(&eta.images[i])? - &eta.apply(&xi.images[i])?))
        .collect::<Result<Vec<_>>>()?;
    Ok(Derivation {
        nvars: xi.nvars,
        trunc: xi.trunc,
        images,
    })
}

/// `Ad_H xi = H o xi o H^-1`.
pub fn adjoint(h: &Endomorphism, xi: &Derivation) -> Result<Derivation> {
    let h_inv = h.invert()?;
    adjoint_with_inverse(h, &h_inv, xi)
}

/// [`adjoint`] with a precomputed inverse.
pub fn adjoint_with_inverse(h: &Endomorphism, h_inv: &Endomorphism, xi: &Derivation) -> Result<Derivation> {
    if h.nvars() != xi.nvars || h.trunc() != xi.trunc {
        return Err(Error::TruncMismatch(h.nvars(), h.trunc(), xi.nvars, xi.trunc));
    }
    let images = h_inv
        .images()
        .iter()
        .map(|g| h.substitute(&xi.apply(g)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(Derivation {
        nvars: xi.nvars,
        trunc: xi.trunc,
        images,
    })
}

/// Weight of a word under diagonal weights `r`.
pub fn word_weight(w: Word, weights: &[Rat]) -> Rat {
    w.letters().fold(Rat::zero(), |acc, l| acc + &weights[l])
}

/// Splits `f` into eigenvectors of a diagonal derivation, keyed by eigenvalue.
pub fn eigen_develop(f: &Series, xi: &Derivation) -> Result<BTreeMap<Rat, Series>> {
    xi.check_series(f)?;
    let weights = xi.diagonal_weights().ok_or(Error::NotDiagonal)?;
    Ok(develop_by_weights(f, &weights))
}

pub(crate) fn develop_by_weights(f: &Series, weights: &[Rat]) -> BTreeMap<Rat, Series> {
    let mut out: BTreeMap<Rat, Series> = BTreeMap::new();
    for (w, c) in f.terms() {
        out.entry(word_weight(*w, weights))
            .or_insert_with(|| Series::zero(f.nvars(), f.trunc()))
            .add_term(*w, c.clone());
    }
    out
}

/// Solves `(xi' + xi'' - b) h - f = residue` on one homogeneous degree.
///
/// `xi'` must be diagonal and `xi''` a principle nilpotent derivation
/// commuting with it. On each `xi'`-eigenspace with eigenvalue `c != b` the
/// operator `(c - b) + xi''` is inverted by a finite Neumann series; the
/// component with `c == b` is returned, negated, as the residue.
pub fn graded_solve(
    xi_semisimple: &Derivation,
    xi_nilpotent: &Derivation,
    f: &Series,
    b: &Rat,
) -> Result<(Series, Series)> {
    if !xi_semisimple.is_principle() || !xi_nilpotent.is_principle() {
        return Err(Error::NotPrinciple);
    }
    let weights = xi_semisimple.diagonal_weights().ok_or(Error::NotDiagonal)?;
    if !bracket(xi_semisimple, xi_nilpotent)?.is_zero() {
        return Err(Error::NotCommuting);
    }
    if !xi_nilpotent.linear_part().is_nilpotent() {
        return Err(Error::InvalidArgument("second derivation is not nilpotent".into()));
    }
    xi_semisimple.check_series(f)?;
    if let Some(p) = f.order() {
        if !f.is_homogeneous_of(p) {
            return Err(Error::InvalidArgument("right-hand side must be homogeneous".into()));
        }
    }
    graded_solve_unchecked(&weights, xi_nilpotent, f, b)
}

fn graded_solve_unchecked(
    weights: &[Rat],
    xi_nilpotent: &Derivation,
    f: &Series,
    b: &Rat,
) -> Result<(Series, Series)> {
    let mut h = Series::zero(f.nvars(), f.trunc());
    let mut residue = Series::zero(f.nvars(), f.trunc());
    let nilpotent_zero = xi_nilpotent.is_zero();
    for (c, part) in develop_by_weights(f, weights) {
        if &c == b {
            residue = -&part;
            continue;
        }
        let inv = (&c - b).recip();
        let neg_inv = -inv.clone();
        let mut term = part.scale(&inv);
        while !term.is_zero() {
            h = &h + &term;
            if nilpotent_zero {
                break;
            }
            term = xi_nilpotent.apply(&term)?.scale(&neg_inv);
        }
    }
    Ok((h, residue))
}

/// `xi = semisimple + nilpotent` with `Ad_conjugator(semisimple)` diagonal
/// with the listed eigenvalues.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JCDecomposition {
    pub semisimple: Derivation,
    pub nilpotent: Derivation,
    pub conjugator: Endomorphism,
    pub eigenvalues: Vec<Rat>,
}

/// Jordan-Chevalley decomposition of a derivation with rational linear
/// spectrum, modulo `m^(trunc+1)`.
///
/// A linear change of coordinates `L` puts the linear part into Jordan form
/// `J = D + N`. Then the homological equation `K o xi' = eta o K` is solved
/// one degree at a time for a unipotent `K` and a derivation `eta` that
/// commutes with the diagonal part `D`: in degree `d` only `K` and `eta` of
/// lower degree enter the right-hand side, and the unknown degree-`d` part
/// of `K` is found on each eigenspace by [`graded_solve`]. Finally
/// `xi'_N = Ad_K^-1 (eta - D)` is recovered by the same kind of recursion,
/// without inverting `K`.
pub fn jordan_chevalley(xi: &Derivation) -> Result<JCDecomposition> {
    let n = xi.nvars;
    let trunc = xi.trunc;
    let jd = rational_jordan_form(&xi.linear_part())?;
    let p = &jd.transform;
    let p_inv = p.inverse().ok_or(Error::NotAutomorphism)?;
    // L^-1 sends x_i to the i-th Jordan basis vector
    let lin = Endomorphism::linear(&p_inv, trunc)?;
    let lin_inv = Endomorphism::linear(p, trunc)?;
    let normal = adjoint_with_inverse(&lin, &lin_inv, xi)?;
    debug_assert_eq!(normal.linear_part(), jd.jordan_matrix());

    let weights = jd.diagonal();
    let starts = jd.block_starts();
    let shift = Derivation {
        nvars: n,
        trunc,
        images: (0..n)
            .map(|i| {
                if starts[i] {
                    Series::zero(n, trunc)
                } else {
                    Series::var(n, trunc, i - 1)
                }
            })
            .collect(),
    };
    let jordan = Derivation::diagonal(&weights, trunc).try_add(&shift)?;
    let nonlinear: Vec<Series> = normal.images.iter().map(|g| g.filter_degrees(|d| d >= 2)).collect();

    // K(x_i) = x_i + kappa_i, eta = J + eta_high
    let mut kappa = vec![Series::zero(n, trunc); n];
    let mut eta_high = vec![Series::zero(n, trunc); n];
    for d in 2..=trunc {
        let k_low = unipotent_at(&kappa, d)?;
        let eta_low = derivation_at(&eta_high, d);
        let mut fresh: Vec<Series> = Vec::with_capacity(n);
        let mut rhs: Vec<Series> = Vec::with_capacity(n);
        for i in 0..n {
            let r = k_low.substitute(&nonlinear[i].retrunc(d))?;
            let q = eta_low.apply(&kappa[i].retrunc(d))?;
            let b = (&r - &q).homogeneous_part(d).retrunc(trunc);
            let mut target = b.clone();
            if !starts[i] {
                target = &target + &fresh[i - 1];
            }
            let (h, _) = graded_solve_unchecked(&weights, &shift, &target, &weights[i])?;
            fresh.push(h);
            rhs.push(b);
        }
        for i in 0..n {
            let mut part = &rhs[i] + &fresh[i].scale(&weights[i]);
            if !starts[i] {
                part = &part + &fresh[i - 1];
            }
            part = &part - &jordan.apply(&fresh[i])?;
            if part.terms().any(|(w, _)| word_weight(*w, &weights) != weights[i]) {
                return Err(Error::VerificationFailed(
                    "normalised derivation does not respect the eigen-grading".into(),
                ));
            }
            kappa[i] = &kappa[i] + &fresh[i];
            eta_high[i] = &eta_high[i] + &part;
        }
    }

    // xi'_N = nu with nu_i(k) = eta_N(k_i), eta_N = N + eta_high
    let eta_nil = shift.try_add(&Derivation {
        nvars: n,
        trunc,
        images: eta_high,
    })?;
    let k_images: Vec<Series> = (0..n).map(|i| &Series::var(n, trunc, i) + &kappa[i]).collect();
    let mut nu: Vec<Series> = shift.images.clone();
    if !eta_nil.is_zero() {
        for d in 2..=trunc {
            // the linear part of nu reaches kappa of degree d itself
            let k_d = Endomorphism::new(k_images.iter().map(|k| k.retrunc(d)).collect())?;
            let eta_d = derivation_at(&eta_nil.images, d);
            for i in 0..n {
                let pushed = eta_d.apply(&k_images[i].retrunc(d))?;
                let carried = k_d.substitute(&nu[i].retrunc(d))?;
                let part = (&pushed - &carried).homogeneous_part(d).retrunc(trunc);
                nu[i] = &nu[i] + &part;
            }
        }
    }
    let nil_normal = Derivation {
        nvars: n,
        trunc,
        images: nu,
    };
    let nilpotent = adjoint_with_inverse(&lin_inv, &lin, &nil_normal)?;
    let semisimple = xi.try_sub(&nilpotent)?;
    let conjugator = Endomorphism::new(k_images)?.compose(&lin)?;
    Ok(JCDecomposition {
        semisimple,
        nilpotent,
        conjugator,
        eigenvalues: weights,
    })
}

/// `x_i -> x_i + kappa_i`, with `kappa` cut to degrees `< level`, as an
/// endomorphism modulo `m^(level+1)`.
fn unipotent_at(kappa: &[Series], level: usize) -> Result<Endomorphism> {
    let n = kappa.len();
    Endomorphism::new(
        kappa
            .iter()
            .enumerate()
            .map(|(i, k)| &Series::var(n, level, i) + &k.filter_degrees(|e| e < level).retrunc(level))
            .collect(),
    )
}

fn derivation_at(images: &[Series], level: usize) -> Derivation {
    Derivation {
        nvars: images.len(),
        trunc: level,
        images: images.iter().map(|s| s.retrunc(level)).collect(),
    }
}

/// Semisimple in the operational sense: its Jordan-Chevalley nilpotent part
/// vanishes modulo the truncation.
pub fn is_semisimple(xi: &Derivation) -> Result<bool> {
    Ok(jordan_chevalley(xi)?.nilpotent.is_zero())
}

/// One automorphism `H` with every `Ad_H zeta_j` diagonal on the generators.
///
/// The first derivation is diagonalised through its Jordan-Chevalley
/// conjugator. Each further one is handled by splitting its eigenvectors
/// into simultaneous weight components of the ones already diagonal, and
/// picking from those components a new set of coordinates.
pub fn simultaneous_diagonalize(zetas: &[Derivation]) -> Result<Endomorphism> {
    let first = zetas
        .first()
        .ok_or_else(|| Error::InvalidArgument("no derivations given".into()))?;
    for z in zetas {
        first.check_derivation(z)?;
    }
    for (a, za) in zetas.iter().enumerate() {
        for zb in &zetas[a + 1..] {
            if !bracket(za, zb)?.is_zero() {
                return Err(Error::NotCommuting);
            }
        }
    }
    let n = first.nvars;
    let trunc = first.trunc;
    let jc = jordan_chevalley(first)?;
    if !jc.nilpotent.is_zero() {
        return Err(Error::NotSemisimple);
    }
    let mut h = jc.conjugator;
    let mut h_inv = h.invert()?;
    // weights[j][i]: eigenvalue of x_i under the j-th processed derivation
    let mut weights: Vec<Vec<Rat>> = vec![jc.eigenvalues];

    for zeta in &zetas[1..] {
        let conj = adjoint_with_inverse(&h, &h_inv, zeta)?;
        if let Some(w) = conj.diagonal_weights() {
            weights.push(w);
            continue;
        }
        let jc = jordan_chevalley(&conj)?;
        if !jc.nilpotent.is_zero() {
            return Err(Error::NotSemisimple);
        }
        let eigvecs = jc.conjugator.invert()?;
        let tuple = |w: Word| -> Vec<Rat> { weights.iter().map(|r| word_weight(w, r)).collect() };
        let gen_tuple: Vec<Vec<Rat>> = (0..n).map(|i| tuple(Word::letter(i))).collect();

        let mut new_images: Vec<Option<Series>> = vec![None; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for i in 0..n {
            match classes.iter_mut().find(|c| gen_tuple[c[0]] == gen_tuple[i]) {
                Some(c) => c.push(i),
                None => classes.push(vec![i]),
            }
        }
        for class in &classes {
            let target = &gen_tuple[class[0]];
            let mut chosen: Vec<Series> = Vec::new();
            let mut lin_rows: Vec<Vec<Rat>> = Vec::new();
            for f in eigvecs.images() {
                if chosen.len() == class.len() {
                    break;
                }
                let comp = Series::from_terms(
                    n,
                    trunc,
                    f.terms()
                        .filter(|(w, _)| &tuple(**w) == target)
                        .map(|(w, c)| (*w, c.clone())),
                );
                let lin: Vec<Rat> = class.iter().map(|&i| comp.coeff(&Word::letter(i))).collect();
                lin_rows.push(lin);
                if RatMatrix::from_rows(lin_rows.clone())?.rank() == lin_rows.len() {
                    chosen.push(comp);
                } else {
                    lin_rows.pop();
                }
            }
            if chosen.len() != class.len() {
                return Err(Error::VerificationFailed("eigenvector components do not span".into()));
            }
            for (&i, s) in class.iter().zip(chosen) {
                new_images[i] = Some(s);
            }
        }
        let t = Endomorphism::new(new_images.into_iter().map(Option::unwrap).collect())?;
        let t_inv = t.invert()?;
        h = t_inv.compose(&h)?;
        h_inv = h_inv.compose(&t)?;
        let conj = adjoint_with_inverse(&h, &h_inv, zeta)?;
        weights.push(conj.diagonal_weights().ok_or_else(|| {
            Error::VerificationFailed("conjugate of semisimple derivation is not diagonal".into())
        })?);
    }
    for z in zetas {
        if adjoint_with_inverse(&h, &h_inv, z)?.diagonal_weights().is_none() {
            return Err(Error::VerificationFailed("simultaneous diagonalisation failed".into()));
        }
    }
    Ok(h)
}
