use std::collections::BTreeMap;
use std::fmt::Write as _;

use fitmetrics::{ConfusionMatrix, MetricScore};
use serde::Serialize;

use crate::input::MatrixBlock;

/// Significant digits kept for every reported value.
pub const SIGNIFICANT_DIGITS: usize = 12;

pub fn round_significant(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v + 0.0;
    }
    let s = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v);
    s.parse::<f64>().expect("formatted float parses") + 0.0
}

/// Integers stay integers in JSON; everything else is a float.
pub fn json_number(v: f64) -> serde_json::Number {
    if v.fract() == 0.0 && (0.0..9.007_199_254_740_992e15).contains(&v) {
        serde_json::Number::from(v as u64)
    } else {
        serde_json::Number::from_f64(round_significant(v)).expect("finite value")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreEntry {
    pub metric: String,
    pub params: BTreeMap<String, String>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub input: String,
    pub n_classes: usize,
    pub total: serde_json::Number,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub smoothing: Option<f64>,
    pub matrix: MatrixBlock,
    pub scores: Vec<ScoreEntry>,
}

impl Report {
    pub fn new(input: String, cm: &ConfusionMatrix, smoothing: Option<f64>, scores: &[MetricScore]) -> Self {
        Self {
            input,
            n_classes: cm.n_classes(),
            total: json_number(cm.total()),
            smoothing,
            matrix: MatrixBlock::from_matrix(cm),
            scores: scores
                .iter()
                .map(|s| ScoreEntry {
                    metric: s.metric_id.clone(),
                    params: s.parameters.clone(),
                    value: round_significant(s.value),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let labels = self.matrix.labels.as_deref().unwrap_or_default().join(", ");
        let _ = writeln!(out, "input:   {}", self.input);
        let _ = writeln!(out, "classes: {} ({labels})", self.n_classes);
        let _ = writeln!(out, "total:   {}", self.total);
        if let Some(alpha) = self.smoothing {
            let _ = writeln!(out, "smoothing: additive, alpha = {alpha}");
        }
        let names: Vec<String> = self
            .scores
            .iter()
            .map(|s| {
                let params: Vec<String> = s.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                if params.is_empty() {
                    s.metric.clone()
                } else {
                    format!("{} [{}]", s.metric, params.join(", "))
                }
            })
            .collect();
        let width = names.iter().map(|n| n.chars().count()).max().unwrap_or(0);
        for (name, score) in names.iter().zip(&self.scores) {
            let _ = writeln!(out, "{name:<width$}  {}", score.value);
        }
        out
    }
}
