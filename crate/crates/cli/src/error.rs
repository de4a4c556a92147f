use thiserror::Error;

/// Process exit codes.
pub mod exit {
    /// Success; all residuals within tolerance; no collision found.
    pub const OK: i32 = 0;
    /// Runtime failure (evaluation, I/O).
    pub const ERROR: i32 = 1;
    /// Bad command line or map spec.
    pub const USAGE: i32 = 2;
    /// `collide` found a witness.
    pub const WITNESS: i32 = 3;
    /// A verification residual exceeded its tolerance.
    pub const VERIFY_FAILED: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at position {pos} ({token:?}): {msg}")]
    Parse {
        pos: usize,
        token: String,
        msg: String,
    },
    #[error("{key} = {value} is out of range: {msg}")]
    Range {
        key: String,
        value: String,
        msg: String,
    },
    #[error("unknown verification suite {0:?}")]
    UnknownSuite(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] harmonic_koebe::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. }
            | CliError::Range { .. }
            | CliError::UnknownSuite(_)
            | CliError::Usage(_) => exit::USAGE,
            CliError::Core(_) | CliError::Io(_) => exit::ERROR,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
