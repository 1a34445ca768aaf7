//! Fixed, bit-stable text formatting for reports.

use serde::Serialize;

use coupled_modes::ModelConfig64;

/// Reals are printed with 17 significant digits in scientific notation, which
/// round-trips every `f64`.
pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

/// Accumulates CSV rows with `\n` line endings.
#[derive(Debug, Default)]
pub struct CsvWriter {
    buf: String,
}

impl CsvWriter {
    pub fn with_header<S: AsRef<str>>(columns: &[S]) -> Self {
        let mut w = Self::default();
        w.row(columns);
        w
    }

    pub fn row<S: AsRef<str>>(&mut self, fields: &[S]) {
        let line: Vec<&str> = fields.iter().map(AsRef::as_ref).collect();
        self.buf.push_str(&line.join(","));
        self.buf.push('\n');
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

#[derive(Debug, Serialize)]
pub struct ModeJson {
    pub omega: f64,
    pub c: f64,
}

/// The `model` object of every JSON report.
#[derive(Debug, Serialize)]
pub struct ModelJson {
    pub omega0: f64,
    pub hbar: f64,
    pub modes: Vec<ModeJson>,
    /// Normal-mode frequencies; `null` when the model could not be diagonalized.
    pub frequencies: Option<Vec<f64>>,
}

impl ModelJson {
    pub fn new(config: &ModelConfig64, frequencies: Option<&[f64]>) -> Self {
        Self {
            omega0: config.omega0(),
            hbar: config.hbar(),
            modes: config.modes().iter().map(|m| ModeJson { omega: m.omega, c: m.coupling }).collect(),
            frequencies: frequencies.map(<[f64]>::to_vec),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct JsonReport<'a, R: Serialize> {
    pub model: ModelJson,
    pub command: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub results: Vec<R>,
}

pub fn to_json<R: Serialize>(report: &JsonReport<'_, R>) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}
