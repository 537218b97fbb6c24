//! Computer algebra on truncated complete free algebras `Q<<x_1, ..., x_n>>`.
//!
//! The crate is organised bottom-up:
//!
//! * [`exactlin`]: dense and sparse exact linear algebra over `BigRational`.
//! * [`ncseries`]: words, truncated noncommutative series, endomorphisms and
//!   their formal inverses.
//! * [`cyclic`]: necklaces, canonical superpotential representatives and
//!   cyclic derivatives.
//! * [`jacobi`]: truncated two-sided Jacobi ideals, finite-dimensionality
//!   certificates and classes in `HH_0`.
//! * [`derive`]: derivations, the adjoint action and the Jordan-Chevalley
//!   decomposition.
//! * [`saito`]: Euler fields, weights and weighted-homogeneous normal forms.

pub mod cyclic;
pub mod derive;
pub mod error;
pub mod exactlin;
pub mod jacobi;
pub mod ncseries;
pub mod saito;

pub use error::{Error, Result};

/// Exact rational coefficient type used everywhere in the crate.
pub type Rat = num_rational::BigRational;

/// Shorthand for building small rationals `num/den`.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(num.into(), den.into())
}
