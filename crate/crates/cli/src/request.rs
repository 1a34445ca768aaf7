//! Command-line arguments and the validated [`RunRequest`] built from them.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use coupled_modes::{PhaseConvention, TimeGrid64};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Modes,
    Spectrum,
    Evolve,
    Probabilities,
    Validate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Modes => "modes",
            Command::Spectrum => "spectrum",
            Command::Evolve => "evolve",
            Command::Probabilities => "probabilities",
            Command::Validate => "validate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum PhaseArg {
    /// global vacuum phase exp(-i TrD t/2)
    #[default]
    Total,
    /// per-pair phase exp(-i TrD t/(2N))
    Paper,
}

impl From<PhaseArg> for PhaseConvention {
    fn from(p: PhaseArg) -> Self {
        match p {
            PhaseArg::Total => PhaseConvention::TotalVacuumPhase,
            PhaseArg::Paper => PhaseConvention::PaperPerPair,
        }
    }
}

/// Exact solution of an oscillator coupled to N field modes.
#[derive(Debug, Parser)]
#[command(name = "coupled-modes", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Normal-mode frequencies, stability margin and the orthogonal transform T
    Modes(CommonArgs),
    /// Energies of normal-mode occupation states
    Spectrum(CommonArgs),
    /// Multi-quanta dressed-state amplitudes over a time grid
    Evolve(CommonArgs),
    /// Transition probabilities |J_rs(t)|^2 out of one source component
    Probabilities(CommonArgs),
    /// Run the invariant and oracle suite; exit code 1 if any check fails
    Validate(CommonArgs),
}

impl CliCommand {
    pub fn split(self) -> (Command, CommonArgs) {
        match self {
            CliCommand::Modes(a) => (Command::Modes, a),
            CliCommand::Spectrum(a) => (Command::Spectrum, a),
            CliCommand::Evolve(a) => (Command::Evolve, a),
            CliCommand::Probabilities(a) => (Command::Probabilities, a),
            CliCommand::Validate(a) => (Command::Validate, a),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// TOML model file with a [model] or [preset] table
    #[arg(long)]
    pub config: PathBuf,

    /// Start of the closed time interval
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub t0: f64,

    /// End of the closed time interval
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    pub t1: f64,

    /// Number of intervals; the grid has steps+1 samples including both endpoints
    #[arg(long, default_value_t = 100)]
    pub steps: usize,

    /// Dressed-state pair r,s (repeatable)
    #[arg(long = "pair", value_parser = parse_pair)]
    pub pairs: Vec<(usize, usize)>,

    /// Number of quanta for `evolve`
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub n: i64,

    /// Source component s for `probabilities`
    #[arg(long)]
    pub source: Option<usize>,

    /// Occupation vector n0,n1,...,nN (repeatable)
    #[arg(long = "occ", value_parser = parse_occupation)]
    pub occupations: Vec<Vec<u32>>,

    /// Enumerate every occupation with total quanta up to this bound
    #[arg(long)]
    pub max_quanta: Option<u32>,

    /// Global phase convention for amplitudes
    #[arg(long, value_enum, default_value_t = PhaseArg::Total)]
    pub phase: PhaseArg,

    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,

    /// Write to this file instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Seed for the random models used by `validate`
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Sort spectrum rows by energy
    #[arg(long)]
    pub sorted: bool,
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (r, s) = s.split_once(',').ok_or_else(|| format!("expected r,s but got {s:?}"))?;
    let parse = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("bad index {x:?}: {e}"));
    Ok((parse(r)?, parse(s)?))
}

fn parse_occupation(s: &str) -> Result<Vec<u32>, String> {
    s.split(',')
        .map(|x| x.trim().parse::<u32>().map_err(|e| format!("bad occupation entry {x:?}: {e}")))
        .collect()
}

/// Everything one command needs, checked for internal consistency.
#[derive(Debug, Clone)]
pub struct RunRequest {
    pub command: Command,
    pub config: PathBuf,
    pub grid: TimeGrid64,
    pub pairs: Vec<(usize, usize)>,
    pub quanta: u32,
    pub source: Option<usize>,
    pub occupations: Vec<Vec<u32>>,
    pub max_quanta: Option<u32>,
    pub phase: PhaseConvention,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub sorted: bool,
}

impl RunRequest {
    pub fn from_args(command: Command, args: CommonArgs) -> Result<Self, CliError> {
        let grid = TimeGrid64::new(args.t0, args.t1, args.steps).map_err(|e| CliError::Usage(e.to_string()))?;
        let quanta = u32::try_from(args.n)
            .map_err(|_| CliError::Usage(format!("InvalidParameter: --n must be a nonnegative integer, got {}", args.n)))?;
        Ok(Self {
            command,
            config: args.config,
            grid,
            pairs: args.pairs,
            quanta,
            source: args.source,
            occupations: args.occupations,
            max_quanta: args.max_quanta,
            phase: args.phase.into(),
            format: args.format,
            out: args.out,
            seed: args.seed,
            sorted: args.sorted,
        })
    }
}
