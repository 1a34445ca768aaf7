//! The report-producing commands. Each one is a pure function of the request
//! and the model, returning the full output text.

use serde::Serialize;

use coupled_modes::{
    amplitude_sample, build_interaction_matrix, diagonalize, kernel, spectrum_energy, stability_margin,
    ModelConfig64, NormalModeBasis64, OccupationVector,
};

use crate::error::CliError;
use crate::format::{real, to_json, CsvWriter, JsonReport, ModelJson};
use crate::request::{Command, OutputFormat, RunRequest};

/// Largest number of occupations `spectrum` will enumerate.
pub const MAX_ENUMERATED_OCCUPATIONS: u128 = 1_000_000;

/// Header of the `evolve` CSV.
pub const EVOLVE_HEADER: &str = "t,r,s,n,re,im,prob";

/// Finished command output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub body: String,
    /// `false` when `validate` found a failing check.
    pub passed: bool,
}

impl Report {
    fn ok(body: String) -> Self {
        Self { body, passed: true }
    }
}

fn basis_of(config: &ModelConfig64) -> Result<NormalModeBasis64, CliError> {
    Ok(diagonalize(&build_interaction_matrix(config))?)
}

fn json<R: Serialize>(req: &RunRequest, config: &ModelConfig64, basis: &NormalModeBasis64, results: Vec<R>) -> String {
    to_json(&JsonReport {
        model: ModelJson::new(config, Some(basis.frequencies())),
        command: req.command.name(),
        seed: None,
        results,
    })
}

#[derive(Debug, Serialize)]
struct ModesJson {
    frequencies: Vec<f64>,
    stability_margin: f64,
    /// Row-major `T`.
    transform: Vec<Vec<f64>>,
}

/// Frequencies, stability margin and `T`.
///
/// CSV columns are `quantity,i,j,value`, with `quantity` one of `frequency`
/// (index in `i`), `stability_margin`, or `transform` (row `i`, column `j`).
pub fn cmd_modes(req: &RunRequest, config: &ModelConfig64) -> Result<Report, CliError> {
    let basis = basis_of(config)?;
    let margin = stability_margin(&basis);
    let t = basis.transform();
    let body = match req.format {
        OutputFormat::Csv => {
            let mut w = CsvWriter::with_header(&["quantity", "i", "j", "value"]);
            for (k, &f) in basis.frequencies().iter().enumerate() {
                w.row(&["frequency".into(), k.to_string(), String::new(), real(f)]);
            }
            w.row(&["stability_margin", "", "", &real(margin)]);
            for i in 0..t.rows() {
                for j in 0..t.cols() {
                    w.row(&["transform".into(), i.to_string(), j.to_string(), real(t[(i, j)])]);
                }
            }
            w.finish()
        }
        OutputFormat::Json => json(
            req,
            config,
            &basis,
            vec![ModesJson {
                frequencies: basis.frequencies().to_vec(),
                stability_margin: margin,
                transform: (0..t.rows()).map(|i| t.row(i).to_vec()).collect(),
            }],
        ),
    };
    Ok(Report::ok(body))
}

/// Number of occupation vectors of length `dim` with total at most `bound`:
/// `C(bound + dim, dim)`, saturating.
pub fn occupation_count(dim: usize, bound: u32) -> u128 {
    let mut count: u128 = 1;
    for i in 1..=dim as u128 {
        count = match count.checked_mul(u128::from(bound) + i) {
            Some(c) => c / i,
            None => return u128::MAX,
        };
    }
    count
}

/// Compositions of `total` into `dim` parts, earlier modes filled first.
fn compositions(total: u32, dim: usize, prefix: &mut Vec<u32>, out: &mut Vec<OccupationVector>) {
    if dim == 1 {
        prefix.push(total);
        out.push(OccupationVector::new(prefix.clone()));
        prefix.pop();
        return;
    }
    for first in (0..=total).rev() {
        prefix.push(first);
        compositions(total - first, dim - 1, prefix, out);
        prefix.pop();
    }
}

/// Every occupation with `Σ n_k ≤ bound`, grouped by total quanta.
pub fn enumerate_occupations(dim: usize, bound: u32) -> Result<Vec<OccupationVector>, CliError> {
    let count = occupation_count(dim, bound);
    if count > MAX_ENUMERATED_OCCUPATIONS {
        return Err(CliError::Usage(format!(
            "--max-quanta {bound} with {dim} modes gives {count} occupations, more than {MAX_ENUMERATED_OCCUPATIONS}"
        )));
    }
    let mut out = Vec::with_capacity(count as usize);
    for total in 0..=bound {
        compositions(total, dim, &mut Vec::with_capacity(dim), &mut out);
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
struct SpectrumRow {
    occupation: Vec<u32>,
    energy: f64,
}

/// Energies of the requested occupations.
///
/// Occupations come from `--occ`, else from `--max-quanta`, else the vacuum
/// alone. CSV columns are `n0,…,nN,energy`.
pub fn cmd_spectrum(req: &RunRequest, config: &ModelConfig64) -> Result<Report, CliError> {
    let basis = basis_of(config)?;
    let dim = basis.dim();
    let occupations = if !req.occupations.is_empty() {
        req.occupations.iter().cloned().map(OccupationVector::new).collect()
    } else if let Some(bound) = req.max_quanta {
        enumerate_occupations(dim, bound)?
    } else {
        vec![OccupationVector::vacuum(dim)]
    };
    let mut rows = occupations
        .into_iter()
        .map(|occ| {
            let energy = spectrum_energy(&basis, &occ, config.hbar())?;
            Ok(SpectrumRow { occupation: occ.quanta().to_vec(), energy })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    if req.sorted {
        rows.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    }
    let body = match req.format {
        OutputFormat::Csv => {
            let mut header: Vec<String> = (0..dim).map(|k| format!("n{k}")).collect();
            header.push("energy".into());
            let mut w = CsvWriter::with_header(&header);
            for row in &rows {
                let mut fields: Vec<String> = row.occupation.iter().map(u32::to_string).collect();
                fields.push(real(row.energy));
                w.row(&fields);
            }
            w.finish()
        }
        OutputFormat::Json => json(req, config, &basis, rows),
    };
    Ok(Report::ok(body))
}

#[derive(Debug, Serialize)]
struct EvolveRow {
    t: f64,
    r: usize,
    s: usize,
    n: u32,
    re: f64,
    im: f64,
    prob: f64,
}

/// `phase(t)·J_rs(t)ⁿ` for every grid time and pair, time-major.
pub fn cmd_evolve(req: &RunRequest, config: &ModelConfig64) -> Result<Report, CliError> {
    if req.pairs.is_empty() {
        return Err(CliError::Usage("evolve needs at least one --pair r,s".into()));
    }
    let basis = basis_of(config)?;
    let mut rows = Vec::with_capacity(req.grid.len() * req.pairs.len());
    for t in req.grid.times() {
        for &(r, s) in &req.pairs {
            let sample = amplitude_sample(&basis, r, s, req.quanta, t, req.phase)?;
            rows.push(EvolveRow {
                t,
                r,
                s,
                n: sample.n,
                re: sample.value.re,
                im: sample.value.im,
                prob: sample.probability,
            });
        }
    }
    let body = match req.format {
        OutputFormat::Csv => {
            let mut w = CsvWriter::with_header(&EVOLVE_HEADER.split(',').collect::<Vec<_>>());
            for row in &rows {
                w.row(&[
                    real(row.t),
                    row.r.to_string(),
                    row.s.to_string(),
                    row.n.to_string(),
                    real(row.re),
                    real(row.im),
                    real(row.prob),
                ]);
            }
            w.finish()
        }
        OutputFormat::Json => json(req, config, &basis, rows),
    };
    Ok(Report::ok(body))
}

#[derive(Debug, Serialize)]
struct ProbabilityRow {
    t: f64,
    /// `|J_rs(t)|²` for `r = 0..=N`.
    probabilities: Vec<f64>,
    sum: f64,
}

/// `|J_rs(t)|²` for all `r` out of source `s`, plus their sum.
///
/// CSV columns are `t,p0,…,pN,sum`. The sum is accumulated in index order.
pub fn cmd_probabilities(req: &RunRequest, config: &ModelConfig64) -> Result<Report, CliError> {
    let source = req.source.ok_or_else(|| CliError::Usage("probabilities needs --source s".into()))?;
    let basis = basis_of(config)?;
    basis.check_index(source)?;
    let dim = basis.dim();
    let rows: Vec<ProbabilityRow> = req
        .grid
        .times()
        .map(|t| {
            let j = kernel(&basis, t);
            let probabilities: Vec<f64> = (0..dim).map(|r| j.get(r, source).norm_sqr()).collect();
            let sum = probabilities.iter().fold(0.0, |acc, p| acc + p);
            ProbabilityRow { t, probabilities, sum }
        })
        .collect();
    let body = match req.format {
        OutputFormat::Csv => {
            let mut header = vec!["t".to_string()];
            header.extend((0..dim).map(|r| format!("p{r}")));
            header.push("sum".into());
            let mut w = CsvWriter::with_header(&header);
            for row in &rows {
                let mut fields = vec![real(row.t)];
                fields.extend(row.probabilities.iter().map(|&p| real(p)));
                fields.push(real(row.sum));
                w.row(&fields);
            }
            w.finish()
        }
        OutputFormat::Json => json(req, config, &basis, rows),
    };
    Ok(Report::ok(body))
}

/// Dispatches a request whose model has already been loaded.
pub fn run_with_config(req: &RunRequest, config: &ModelConfig64) -> Result<Report, CliError> {
    match req.command {
        Command::Modes => cmd_modes(req, config),
        Command::Spectrum => cmd_spectrum(req, config),
        Command::Evolve => cmd_evolve(req, config),
        Command::Probabilities => cmd_probabilities(req, config),
        Command::Validate => Ok(crate::validate::cmd_validate(req, config)),
    }
}
