use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("numeric invariant failed: {0}")]
    Numeric(String),
    /// The report has been written; the reconstruction disagreed with the
    /// ground-truth pattern.
    #[error("reconstruction mismatch: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Core(#[from] ifm_core::IfmError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub const EXIT_RUNTIME: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NUMERIC: u8 = 3;
pub const EXIT_MISMATCH: u8 = 4;

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Numeric(_) => EXIT_NUMERIC,
            CliError::Mismatch(_) => EXIT_MISMATCH,
            CliError::Core(_) | CliError::Io(_) => EXIT_RUNTIME,
        })
    }
}
