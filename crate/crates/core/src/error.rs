use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("truncation or variable count mismatch: ({0} vars, trunc {1}) vs ({2} vars, trunc {3})")]
    TruncMismatch(usize, usize, usize, usize),
    #[error("matrix dimensions do not match: {0}")]
    DimensionMismatch(String),
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("characteristic polynomial has an irreducible non-linear rational factor")]
    NonRationalSpectrum,
    #[error("linear part is singular; map is not an automorphism")]
    NotAutomorphism,
    #[error("image of generator {0} has a nonzero constant term")]
    NotInMaximalIdeal(usize),
    #[error("superpotential is zero")]
    ZeroPotential,
    #[error("monomial basis of size {size} exceeds the guard {guard}")]
    LevelTooLarge { size: u128, guard: u128 },
    #[error("Jacobi algebra not certified finite-dimensional up to level {0}")]
    NotCertifiedFinite(usize),
    #[error("superpotential is not quasi-homogeneous")]
    NotQuasiHomogeneous,
    #[error("derivation is not diagonal on the generators")]
    NotDiagonal,
    #[error("derivation is not principle (images must be linear)")]
    NotPrinciple,
    #[error("derivations do not commute")]
    NotCommuting,
    #[error("derivation is not semisimple")]
    NotSemisimple,
    #[error("weight {0} of generator {1} lies outside (0, 1/2)")]
    WeightOutOfRange(String, usize),
    #[error("uniqueness violated: {0}")]
    UniquenessViolated(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            Error::TruncMismatch(..) => "TruncMismatch",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::Inconsistent => "Inconsistent",
            Error::NonRationalSpectrum => "NonRationalSpectrum",
            Error::NotAutomorphism => "NotAutomorphism",
            Error::NotInMaximalIdeal(_) => "NotInMaximalIdeal",
            Error::ZeroPotential => "ZeroPotential",
            Error::LevelTooLarge { .. } => "LevelTooLarge",
            Error::NotCertifiedFinite(_) => "NotCertifiedFinite",
            Error::NotQuasiHomogeneous => "NotQuasiHomogeneous",
            Error::NotDiagonal => "NotDiagonal",
            Error::NotPrinciple => "NotPrinciple",
            Error::NotCommuting => "NotCommuting",
            Error::NotSemisimple => "NotSemisimple",
            Error::WeightOutOfRange(..) => "WeightOutOfRange",
            Error::UniquenessViolated(_) => "UniquenessViolated",
            Error::VerificationFailed(_) => "VerificationFailed",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}
