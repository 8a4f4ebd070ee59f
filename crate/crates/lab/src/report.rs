//! Report types and their CSV / JSON encodings.
//!
//! Floating-point values are written with 17 significant digits in both
//! formats, so every value read back is bit-identical to the one written.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::LabResult;

/// Column order of [`ExperimentReport`] CSV output.
pub const CSV_COLUMNS: [&str; 9] = [
    "N",
    "trials",
    "mc_mean",
    "mc_var",
    "stderr",
    "quad_expectation",
    "ratio",
    "bracket_lower",
    "bracket_upper",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Monte Carlo and quadrature figures for one `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    #[serde(rename = "N")]
    pub n: u32,
    pub trials: usize,
    pub mc_mean: f64,
    /// Unbiased sample variance; `None` for a single trial.
    pub mc_var: Option<f64>,
    /// `sqrt(mc_var / trials)`; `None` for a single trial.
    pub stderr: Option<f64>,
    pub quad_expectation: f64,
    /// `mc_mean / quad_expectation`.
    pub ratio: f64,
    pub bracket_lower: f64,
    pub bracket_upper: f64,
}

impl ExperimentRow {
    /// Standard deviation of `S_N / E[S_N]` across trials.
    pub fn ratio_std(&self) -> Option<f64> {
        self.mc_var.map(|v| v.sqrt() / self.quad_expectation)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationPolicy {
    pub eps: f64,
    /// Hyperbolic radius about the origin on which every trial was sampled.
    pub sampled_depth: u32,
    pub degree: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub master_seed: u64,
    pub trials: usize,
    pub s: f64,
    pub z: [f64; 2],
    pub truncation: TruncationPolicy,
    /// Trials resampled after a root-finder failure.
    pub resampled_trials: usize,
    pub threads: usize,
    pub wall_time_secs: f64,
    /// Set when the run stopped early; rows hold the completed `N`.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub rows: Vec<ExperimentRow>,
    pub metadata: Metadata,
}

impl ExperimentReport {
    /// `Var(S_N) / E[S_N]²` per row, with the quadrature expectation.
    pub fn relative_variances(&self) -> Vec<Option<f64>> {
        self.rows.iter().map(|r| r.mc_var.map(|v| v / (r.quad_expectation * r.quad_expectation))).collect()
    }

    /// Partial sums of [`Self::relative_variances`].
    pub fn relative_variance_partial_sums(&self) -> Vec<f64> {
        self.relative_variances()
            .into_iter()
            .scan(0.0, |acc, v| {
                *acc += v.unwrap_or(f64::NAN);
                Some(*acc)
            })
            .collect()
    }
}

/// Per-trial growth of `‖Θ_N‖` across `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceReport {
    pub n_list: Vec<u32>,
    /// `‖Θ_N(X)‖` for each trial (outer) and `N` (inner).
    pub trajectories: Vec<Vec<f64>>,
    /// Least-squares slope of `log ‖Θ_N‖` against `N`; `None` when some
    /// `‖Θ_N‖` vanishes.
    pub slopes: Vec<Option<f64>>,
    pub slope_mean: f64,
    pub slope_std: f64,
    pub slope_stderr: f64,
    pub fitted_trials: usize,
    /// `(3 - 2s) / 2`.
    pub expected_center: f64,
    pub metadata: Metadata,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CheckReport {
    pub checks: Vec<CheckOutcome>,
}

impl CheckReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn all_passed(&self) -> bool {
        self.failures().next().is_none()
    }
}

/// Reports that can be written as a table.
pub trait Tabular {
    fn write_csv<W: Write>(&self, out: W) -> LabResult<()>;
}

pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "NaN".to_owned()
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "NaN".to_owned(), fmt_f64)
}

impl Tabular for ExperimentReport {
    fn write_csv<W: Write>(&self, out: W) -> LabResult<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_COLUMNS)?;
        for r in &self.rows {
            w.write_record([
                r.n.to_string(),
                r.trials.to_string(),
                fmt_f64(r.mc_mean),
                fmt_opt(r.mc_var),
                fmt_opt(r.stderr),
                fmt_f64(r.quad_expectation),
                fmt_f64(r.ratio),
                fmt_f64(r.bracket_lower),
                fmt_f64(r.bracket_upper),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

impl Tabular for DivergenceReport {
    fn write_csv<W: Write>(&self, out: W) -> LabResult<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["trial".to_owned(), "slope".to_owned()];
        header.extend(self.n_list.iter().map(|n| format!("norm_N{n}")));
        w.write_record(&header)?;
        for (i, (traj, slope)) in self.trajectories.iter().zip(&self.slopes).enumerate() {
            let mut rec = vec![i.to_string(), fmt_opt(*slope)];
            rec.extend(traj.iter().map(|v| fmt_f64(*v)));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

impl Tabular for CheckReport {
    fn write_csv<W: Write>(&self, out: W) -> LabResult<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["check", "passed", "detail"])?;
        for c in &self.checks {
            w.write_record([c.name.as_str(), if c.passed { "true" } else { "false" }, c.detail.as_str()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// JSON number formatting with 17 significant digits.
struct FullPrecision;

impl serde_json::ser::Formatter for FullPrecision {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

pub fn write_json<T: Serialize, W: Write>(report: &T, out: W) -> LabResult<()> {
    let mut ser = serde_json::Serializer::with_formatter(out, FullPrecision);
    report.serialize(&mut ser)?;
    Ok(())
}

pub fn to_json_string<T: Serialize>(report: &T) -> LabResult<String> {
    let mut buf = Vec::new();
    write_json(report, &mut buf)?;
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

pub fn write_report<T: Serialize + Tabular, W: Write>(report: &T, format: Format, mut out: W) -> LabResult<()> {
    match format {
        Format::Csv => report.write_csv(out),
        Format::Json => {
            write_json(report, &mut out)?;
            writeln!(out)?;
            Ok(())
        }
    }
}

/// Writes `report` to `path` in `format`.
pub fn emit<T: Serialize + Tabular>(report: &T, format: Format, path: impl AsRef<Path>) -> LabResult<()> {
    let file = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_report(report, format, file)
}
