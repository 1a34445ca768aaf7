use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use coupled_modes_cli::{run, Cli, CliError, RunRequest};

fn execute() -> Result<bool, CliError> {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => return Err(CliError::Usage(e.to_string().trim_end().to_string())),
        Err(e) => {
            // --help and --version
            let _ = e.print();
            return Ok(true);
        }
    };
    let (command, args) = cli.command.split();
    let req = RunRequest::from_args(command, args)?;
    let report = run(&req)?;
    match &req.out {
        Some(path) => std::fs::write(path, &report.body)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(report.body.as_bytes()).and_then(|()| stdout.flush()) {
                // a closed pipe (e.g. `| head`) is not an error
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                other => other?,
            }
        }
    }
    Ok(report.passed)
}

fn main() -> ExitCode {
    match execute() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
