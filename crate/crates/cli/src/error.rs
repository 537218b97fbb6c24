use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("parse error at byte {offset}: expected one of {expected:?}, found {found}")]
    Parse {
        offset: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("unknown variable `{name}` at byte {offset}")]
    UnknownVariable { name: String, offset: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] ncsaito_core::Error),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Parse { .. } => "ParseError",
            CliError::UnknownVariable { .. } => "UnknownVariable",
            CliError::Config(_) => "ConfigError",
            CliError::Usage(_) => "UsageError",
            CliError::Core(e) => e.code(),
        }
    }

    /// Process exit status: 2 for malformed input, 3 when a mathematical
    /// hypothesis fails, 4 when a resource guard trips, 1 for internal
    /// verification failures.
    pub fn exit_code(&self) -> i32 {
        use ncsaito_core::Error as E;
        match self {
            CliError::Parse { .. } | CliError::UnknownVariable { .. } | CliError::Config(_) | CliError::Usage(_) => 2,
            CliError::Core(e) => match e {
                E::LevelTooLarge { .. } => 4,
                E::VerificationFailed(_) => 1,
                E::TruncMismatch(..) | E::DimensionMismatch(_) | E::InvalidArgument(_) => 2,
                _ => 3,
            },
        }
    }
}
