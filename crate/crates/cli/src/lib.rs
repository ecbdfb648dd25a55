//! Command-line front end for `fitmetrics`: reads a confusion matrix or
//! label pairs from a file, evaluates the requested metrics and renders a
//! text or JSON report.

pub mod input;
pub mod report;

use std::path::PathBuf;
use std::str::FromStr;

use fitmetrics::{AveragingSpec, ConfusionMatrix, Exponent, Metric, MetricError, SmoothingSpec};
use thiserror::Error;

pub use input::{parse_json, parse_matrix_csv, parse_pairs_csv};
pub use report::Report;

#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable or invalid input data. Exit status 2.
    #[error("{0}")]
    Input(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    /// Invalid metric request or parameter. Exit status 3.
    #[error("{0}")]
    Parameter(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Io { .. } => 2,
            CliError::Parameter(_) => 3,
        }
    }

    pub(crate) fn from_matrix(e: MetricError) -> Self {
        CliError::Input(e.to_string())
    }

    fn parameter(e: MetricError) -> Self {
        CliError::Parameter(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum InputFormat {
    #[value(name = "matrix_csv")]
    MatrixCsv,
    #[value(name = "pairs_csv")]
    PairsCsv,
    #[value(name = "json")]
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricRequest {
    pub metric: Metric,
    pub smoothing: Option<SmoothingSpec>,
}

/// Parses `name[:outer=<avg>][:p=<float>]`. A power outer average is
/// written `outer=power:<p>`.
impl FromStr for MetricRequest {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let mut tokens = s.split(':').map(str::trim);
        let name = tokens.next().unwrap_or_default();
        let mut outer = None;
        let mut p = None;
        while let Some(token) = tokens.next() {
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| CliError::Parameter(format!("malformed metric parameter {token:?} in {s:?}")))?;
            match key {
                "outer" => {
                    let spec = if value.eq_ignore_ascii_case("power") {
                        let exp = tokens.next().ok_or_else(|| {
                            CliError::Parameter(format!("outer=power needs an exponent, e.g. power:0.5, in {s:?}"))
                        })?;
                        format!("power:{exp}")
                    } else {
                        value.to_string()
                    };
                    outer = Some(spec.parse::<AveragingSpec>().map_err(CliError::parameter)?);
                }
                "p" => p = Some(value.parse::<Exponent>().map_err(CliError::parameter)?),
                other => {
                    return Err(CliError::Parameter(format!("unknown metric parameter {other:?} in {s:?}")))
                }
            }
        }
        let metric = Metric::from_parts(name, outer, p).map_err(CliError::parameter)?;
        metric.validate().map_err(CliError::parameter)?;
        Ok(MetricRequest { metric, smoothing: None })
    }
}

/// Metrics reported when none are requested.
pub fn default_metrics() -> Vec<MetricRequest> {
    ["generalized_mcc", "generalized_f1", "cramers_phi"]
        .iter()
        .map(|m| m.parse().expect("default metric ids are valid"))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input_path: PathBuf,
    pub input_format: InputFormat,
    pub metrics: Vec<MetricRequest>,
    pub output_format: OutputFormat,
}

impl RunConfig {
    /// Applies one smoothing pseudo-count to every metric request.
    pub fn with_smoothing(mut self, alpha: Option<f64>) -> Result<Self, CliError> {
        if let Some(alpha) = alpha {
            let spec = SmoothingSpec::new(alpha).map_err(CliError::parameter)?;
            for request in &mut self.metrics {
                request.smoothing = Some(spec);
            }
        }
        Ok(self)
    }
}

pub fn load(path: &std::path::Path, format: InputFormat) -> Result<ConfusionMatrix, CliError> {
    match format {
        InputFormat::MatrixCsv => parse_matrix_csv(path),
        InputFormat::PairsCsv => parse_pairs_csv(path),
        InputFormat::Json => parse_json(path),
    }
}

/// Reads the input once and evaluates every requested metric on it.
pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    if config.metrics.is_empty() {
        return Err(CliError::Parameter("no metrics requested".into()));
    }
    let cm = load(&config.input_path, config.input_format)?;
    let scores = config
        .metrics
        .iter()
        .map(|r| r.metric.evaluate_smoothed(&cm, r.smoothing))
        .collect::<Result<Vec<_>, _>>()
        .map_err(CliError::parameter)?;
    let smoothing = config.metrics.iter().find_map(|r| r.smoothing).map(SmoothingSpec::alpha);
    Ok(Report::new(config.input_path.display().to_string(), &cm, smoothing, &scores))
}

pub fn render(report: &Report, format: OutputFormat) -> String {
    match format {
        OutputFormat::Text => report.to_text(),
        OutputFormat::Json => report.to_json(),
    }
}
