use thiserror::Error;

/// Failures that stop a command before it produces a report.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),

    /// Config parse failures and models the library rejects.
    #[error("{0}")]
    Model(#[from] coupled_modes::Error),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Every pre-report failure is a usage or configuration problem.
    pub fn exit_code(&self) -> i32 {
        2
    }
}
