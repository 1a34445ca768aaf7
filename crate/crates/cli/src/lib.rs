//! Command-line front end for `coupled-modes`.

pub mod commands;
pub mod error;
pub mod format;
pub mod request;
pub mod validate;

use coupled_modes::{load_config, ModelConfig64};

pub use commands::{run_with_config, Report};
pub use error::CliError;
pub use request::{Cli, Command, OutputFormat, RunRequest};

/// Loads the model named by the request and runs the command.
pub fn run(req: &RunRequest) -> Result<Report, CliError> {
    let config: ModelConfig64 = load_config(&req.config)?;
    run_with_config(req, &config)
}
