//! Reports: JSON with stable field order, CSV tables and plot series.
//!
//! Files carry 0-based vertex and frequency indices; `labels` fields carry
//! the human-facing names next to them.

use std::io::Write;

use graphnyquist::bandwidth::ExtReal;
use graphnyquist::sampling::{Grid, GridRole};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigenvalues: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uniformity: Option<UniformitySummary>,
    #[serde(default, rename = "finitized_B", skip_serializing_if = "Option::is_none")]
    pub finitized_b: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tightness: Option<TightnessSummary>,
    #[serde(default, rename = "tightened_B", skip_serializing_if = "Option::is_none")]
    pub tightened_b: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filtration: Option<FiltrationSummary>,
    /// Quotient bandwidths `b_1, …, b_k`, lowest level first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_sequence: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub admissible_sequence: Option<SequenceSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plan: Option<PlanSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_set: Option<SampleSetSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulation: Option<SimulationSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub redistribution: Option<RedistributionSummary>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniformitySummary {
    pub is_uniform: bool,
    pub v_infinity: Vec<usize>,
    pub witness_freqs: Option<Vec<usize>>,
    pub bound: ExtReal<f64>,
    pub used_fallback: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TightnessSummary {
    pub tight: bool,
    pub violations: Vec<ViolationSummary>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ViolationSummary {
    pub vertex: usize,
    pub support: Vec<usize>,
    pub max_bw: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiltrationSummary {
    /// `λ*` of each step, in the order the steps were taken.
    pub selection_order: Vec<usize>,
    pub levels: Vec<LevelSummary>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelSummary {
    pub level: usize,
    #[serde(rename = "C")]
    pub c: Vec<ExtReal<f64>>,
    pub lambda_zero: Vec<usize>,
    /// `λ*` zeroed to reach the level below; absent on level 0.
    pub lambda_star: Option<usize>,
    pub b: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceSummary {
    pub sets: Vec<Vec<usize>>,
    pub added: Vec<usize>,
    pub labels: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanSummary {
    pub vertex_rates: Vec<f64>,
    pub base_rate: f64,
    pub quotient_rates: Vec<f64>,
    pub total_rate: f64,
    pub natural_period: f64,
    pub grids: Vec<Grid<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleSetSummary {
    pub mode: String,
    pub period: Option<f64>,
    pub window: Option<(f64, f64)>,
    /// Points per period in periodic mode, points in the window otherwise.
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationSummary {
    pub mode: String,
    pub period: Option<f64>,
    pub window: Option<(f64, f64)>,
    pub seed: u64,
    pub samples: usize,
    /// Relative L² error per vertex; scaled by the largest channel where `absolute`.
    pub per_vertex_error: Vec<f64>,
    pub absolute: Vec<bool>,
    pub max_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RedistributionSummary {
    pub v0: Vec<usize>,
    pub v_star: Vec<usize>,
    pub choices: Vec<String>,
    pub period: f64,
    pub rates_before: Vec<f64>,
    pub rates_after: Vec<f64>,
    pub total_rate: f64,
    pub eccentricity_before: f64,
    pub eccentricity_after: f64,
    pub bound: f64,
    pub grids: Vec<Grid<f64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Plotdata,
}

/// One row of a sample table; `value` is present for observations.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleRow {
    pub vertex: usize,
    pub time: f64,
    pub value: Option<f64>,
    pub role: GridRole,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlotRow {
    pub vertex: usize,
    pub time: f64,
    pub truth: f64,
    pub recovered: f64,
}

/// A report plus the tables a command can export.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Artifacts {
    pub report: Report,
    pub samples: Option<Vec<SampleRow>>,
    pub plot: Option<Vec<PlotRow>>,
}

pub fn role_name(role: GridRole) -> String {
    match role {
        GridRole::Base => "base".into(),
        GridRole::Quotient { level } => format!("quotient:{level}"),
        GridRole::Donated { level } => format!("donated:{level}"),
        GridRole::Redistributed => "redistributed".into(),
    }
}

fn csv_error(e: impl std::fmt::Display) -> CliError {
    CliError::Output {
        path: "<csv>".into(),
        message: e.to_string(),
    }
}

pub fn to_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

fn samples_csv(rows: &[SampleRow]) -> Result<String, CliError> {
    let with_values = rows.iter().any(|r| r.value.is_some());
    let mut w = csv::Writer::from_writer(Vec::new());
    if with_values {
        w.write_record(["vertex", "time", "value", "role"]).map_err(csv_error)?;
    } else {
        w.write_record(["vertex", "time", "role"]).map_err(csv_error)?;
    }
    for r in rows {
        let mut rec = vec![r.vertex.to_string(), r.time.to_string()];
        if with_values {
            rec.push(r.value.map_or_else(String::new, |v| v.to_string()));
        }
        rec.push(role_name(r.role));
        w.write_record(&rec).map_err(csv_error)?;
    }
    String::from_utf8(w.into_inner().map_err(csv_error)?).map_err(csv_error)
}

fn profile_csv(report: &Report) -> Result<String, CliError> {
    let n = report.n.unwrap_or(0);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["vertex", "label", "finitized_B", "tightened_B"]).map_err(csv_error)?;
    let cell = |v: &Option<Vec<f64>>, i: usize| v.as_ref().map_or_else(String::new, |x| x[i].to_string());
    for i in 0..n {
        let label = report.labels.as_ref().map_or_else(String::new, |l| l[i].clone());
        w.write_record([i.to_string(), label, cell(&report.finitized_b, i), cell(&report.tightened_b, i)])
            .map_err(csv_error)?;
    }
    String::from_utf8(w.into_inner().map_err(csv_error)?).map_err(csv_error)
}

fn plot_csv(rows: &[PlotRow]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["vertex", "time", "truth", "recovered"]).map_err(csv_error)?;
    for r in rows {
        w.write_record([r.vertex.to_string(), r.time.to_string(), r.truth.to_string(), r.recovered.to_string()])
            .map_err(csv_error)?;
    }
    String::from_utf8(w.into_inner().map_err(csv_error)?).map_err(csv_error)
}

/// File name and contents for `format`.
pub fn render(artifacts: &Artifacts, format: Format) -> Result<(&'static str, String), CliError> {
    match format {
        Format::Json => Ok(("report.json", to_json(&artifacts.report))),
        Format::Csv => match &artifacts.samples {
            Some(rows) => Ok(("samples.csv", samples_csv(rows)?)),
            None => Ok(("profile.csv", profile_csv(&artifacts.report)?)),
        },
        Format::Plotdata => match &artifacts.plot {
            Some(rows) => Ok(("plotdata.csv", plot_csv(rows)?)),
            None => Err(CliError::Usage("plotdata is produced by the simulate command only".into())),
        },
    }
}

pub fn emit_report(artifacts: &Artifacts, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
    let (_, text) = render(artifacts, format)?;
    out.write_all(text.as_bytes()).map_err(|e| CliError::Output {
        path: "<stdout>".into(),
        message: e.to_string(),
    })
}
