//! A single enum naming every metric the crate exposes, so callers can
//! select and evaluate metrics by id.

use std::collections::BTreeMap;
use std::fmt;

use crate::binary::{self, BinaryMetric, BinaryView};
use crate::confusion::{ConfusionMatrix, SmoothingSpec};
use crate::error::{MetricError, Result};
use crate::means::{AveragingSpec, Exponent};
use crate::multiclass::{self, MetricScore};
use crate::parallel;

/// A rate of a 2×2 matrix, taking the first class as positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rate {
    Precision,
    Sensitivity,
    Specificity,
    Npv,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Metric {
    GeneralizedMcc,
    GeneralizedF1 { outer: AveragingSpec },
    GeneralizedFm { outer: AveragingSpec },
    CramersPhi,
    LpMulticlass { p: Exponent },
    OneVsOne { metric: BinaryMetric, outer: AveragingSpec },
    Accuracy,
    /// 2-class only.
    Binary(BinaryMetric),
    /// 2-class only.
    Rate(Rate),
}

impl Metric {
    pub fn id(&self) -> String {
        match self {
            Metric::GeneralizedMcc => "generalized_mcc".into(),
            Metric::GeneralizedF1 { .. } => "generalized_f1".into(),
            Metric::GeneralizedFm { .. } => "generalized_fm".into(),
            Metric::CramersPhi => "cramers_phi".into(),
            Metric::LpMulticlass { .. } => "lp_multiclass".into(),
            Metric::OneVsOne { metric, .. } => format!("ovo_{}", metric.id()),
            Metric::Accuracy => "accuracy".into(),
            Metric::Binary(BinaryMetric::Mcc) => "mcc_binary".into(),
            Metric::Binary(BinaryMetric::F1) => "f1_binary".into(),
            Metric::Binary(BinaryMetric::F1Zero) => "f1_zero_binary".into(),
            Metric::Binary(BinaryMetric::FowlkesMallows) => "fm_binary".into(),
            Metric::Binary(BinaryMetric::LpFourRate(_)) => "lp_four_rate".into(),
            Metric::Rate(Rate::Precision) => "precision".into(),
            Metric::Rate(Rate::Sensitivity) => "sensitivity".into(),
            Metric::Rate(Rate::Specificity) => "specificity".into(),
            Metric::Rate(Rate::Npv) => "npv".into(),
        }
    }

    pub fn parameters(&self) -> BTreeMap<String, String> {
        let mut params = BTreeMap::new();
        match self {
            Metric::GeneralizedF1 { outer } | Metric::GeneralizedFm { outer } => {
                params.insert("outer".into(), outer.to_string());
            }
            Metric::LpMulticlass { p } | Metric::Binary(BinaryMetric::LpFourRate(p)) => {
                params.insert("p".into(), p.to_string());
            }
            Metric::OneVsOne { metric, outer } => {
                params.insert("outer".into(), outer.to_string());
                if let BinaryMetric::LpFourRate(p) = metric {
                    params.insert("p".into(), p.to_string());
                }
            }
            _ => {}
        }
        params
    }

    /// Declared range of the metric's value.
    pub fn bounds(&self) -> (f64, f64) {
        match self {
            Metric::GeneralizedMcc
            | Metric::Binary(BinaryMetric::Mcc)
            | Metric::OneVsOne { metric: BinaryMetric::Mcc, .. } => (-1.0, 1.0),
            _ => (0.0, 1.0),
        }
    }

    /// Checks parameters without evaluating anything.
    pub fn validate(&self) -> Result<()> {
        let probe = ConfusionMatrix::from_unlabeled_counts(&[vec![1, 0], vec![0, 1]])?;
        self.evaluate(&probe).map(|_| ())
    }

    pub fn evaluate(&self, cm: &ConfusionMatrix) -> Result<MetricScore> {
        let value = match *self {
            Metric::GeneralizedMcc => multiclass::generalized_mcc(cm),
            Metric::GeneralizedF1 { outer } => multiclass::generalized_f1(cm, outer)?,
            Metric::GeneralizedFm { outer } => multiclass::generalized_fm(cm, outer)?,
            Metric::CramersPhi => multiclass::cramers_phi(cm),
            Metric::LpMulticlass { p } => multiclass::lp_multiclass(cm, p)?,
            Metric::OneVsOne { metric, outer } => {
                return multiclass::one_vs_one_average(cm, metric, outer);
            }
            Metric::Accuracy => cm.accuracy(),
            Metric::Binary(metric) => metric.evaluate(BinaryView::new(cm, 0)?)?,
            Metric::Rate(rate) => {
                let view = BinaryView::new(cm, 0)?;
                match rate {
                    Rate::Precision => binary::precision(view),
                    Rate::Sensitivity => binary::sensitivity(view),
                    Rate::Specificity => binary::specificity(view),
                    Rate::Npv => binary::npv(view),
                }
            }
        };
        Ok(MetricScore {
            metric_id: self.id(),
            value,
            parameters: self.parameters(),
            n_classes: cm.n_classes(),
        })
    }

    /// Applies the smoothing first, when given, and records it in the
    /// score's parameters.
    pub fn evaluate_smoothed(
        &self,
        cm: &ConfusionMatrix,
        smoothing: Option<SmoothingSpec>,
    ) -> Result<MetricScore> {
        match smoothing {
            None => self.evaluate(cm),
            Some(spec) => {
                let mut score = self.evaluate(&cm.smooth(spec))?;
                score.parameters.insert("smooth".into(), spec.alpha().to_string());
                Ok(score)
            }
        }
    }

    /// Parses a metric id with optional `outer` and `p` parameters.
    pub fn from_parts(name: &str, outer: Option<AveragingSpec>, p: Option<Exponent>) -> Result<Self> {
        let outer_or = |default| outer.unwrap_or(default);
        let p_or = |default| p.unwrap_or(Exponent::Finite(default));
        let reject_outer = || match outer {
            Some(o) => Err(MetricError::InvalidOuterAverage(format!("{o} (not accepted by {name})"))),
            None => Ok(()),
        };
        let reject_p = || match p {
            Some(p) => Err(MetricError::InvalidExponent(format!("{p} (not accepted by {name})"))),
            None => Ok(()),
        };
        let needs_p = !matches!(name, "lp_multiclass" | "lp_four_rate" | "ovo_lp");
        if needs_p {
            reject_p()?;
        }
        let metric = match name {
            "generalized_mcc" => Metric::GeneralizedMcc,
            "generalized_f1" => Metric::GeneralizedF1 { outer: outer_or(AveragingSpec::Harmonic) },
            "generalized_fm" => Metric::GeneralizedFm { outer: outer_or(AveragingSpec::Arithmetic) },
            "cramers_phi" => Metric::CramersPhi,
            "lp_multiclass" => Metric::LpMulticlass { p: p_or(-1.0) },
            "accuracy" => Metric::Accuracy,
            "ovo_mcc" => Metric::OneVsOne { metric: BinaryMetric::Mcc, outer: outer_or(AveragingSpec::Arithmetic) },
            "ovo_f1" => Metric::OneVsOne { metric: BinaryMetric::F1, outer: outer_or(AveragingSpec::Arithmetic) },
            "ovo_f1_zero" => Metric::OneVsOne { metric: BinaryMetric::F1Zero, outer: outer_or(AveragingSpec::Arithmetic) },
            "ovo_fm" => Metric::OneVsOne { metric: BinaryMetric::FowlkesMallows, outer: outer_or(AveragingSpec::Arithmetic) },
            "ovo_lp" => Metric::OneVsOne {
                metric: BinaryMetric::LpFourRate(p_or(-1.0)),
                outer: outer_or(AveragingSpec::Arithmetic),
            },
            "mcc_binary" => Metric::Binary(BinaryMetric::Mcc),
            "f1_binary" => Metric::Binary(BinaryMetric::F1),
            "f1_zero_binary" => Metric::Binary(BinaryMetric::F1Zero),
            "fm_binary" => Metric::Binary(BinaryMetric::FowlkesMallows),
            "lp_four_rate" => Metric::Binary(BinaryMetric::LpFourRate(p_or(-1.0))),
            "precision" => Metric::Rate(Rate::Precision),
            "sensitivity" | "recall" => Metric::Rate(Rate::Sensitivity),
            "specificity" => Metric::Rate(Rate::Specificity),
            "npv" => Metric::Rate(Rate::Npv),
            other => return Err(MetricError::UnknownMetric(other.to_string())),
        };
        let takes_outer = matches!(
            metric,
            Metric::GeneralizedF1 { .. } | Metric::GeneralizedFm { .. } | Metric::OneVsOne { .. }
        );
        if !takes_outer {
            reject_outer()?;
        }
        Ok(metric)
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())?;
        for (k, v) in self.parameters() {
            write!(f, ":{k}={v}")?;
        }
        Ok(())
    }
}

/// Evaluates one metric over many matrices, on the rayon pool when the
/// `parallel` feature is enabled. Results keep the input order.
pub fn evaluate_batch(metric: &Metric, matrices: &[ConfusionMatrix]) -> Vec<Result<MetricScore>> {
    parallel::map_ordered(matrices, |cm| metric.evaluate(cm))
}

/// Single-threaded counterpart of [`evaluate_batch`].
pub fn evaluate_batch_sequential(metric: &Metric, matrices: &[ConfusionMatrix]) -> Vec<Result<MetricScore>> {
    parallel::map_sequential(matrices, |cm| metric.evaluate(cm))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip_through_from_parts() {
        let names = [
            "generalized_mcc", "generalized_f1", "generalized_fm", "cramers_phi", "lp_multiclass",
            "accuracy", "ovo_mcc", "ovo_f1", "ovo_f1_zero", "ovo_fm", "ovo_lp", "mcc_binary",
            "f1_binary", "f1_zero_binary", "fm_binary", "lp_four_rate", "precision", "sensitivity",
            "specificity", "npv",
        ];
        for name in names {
            let m = Metric::from_parts(name, None, None).unwrap();
            assert_eq!(m.id(), name);
            m.validate().unwrap();
        }
    }

    #[test]
    fn parameter_checks() {
        assert!(matches!(Metric::from_parts("nope", None, None), Err(MetricError::UnknownMetric(_))));
        assert!(Metric::from_parts("cramers_phi", Some(AveragingSpec::Harmonic), None).is_err());
        assert!(Metric::from_parts("generalized_f1", None, Some(Exponent::Finite(0.5))).is_err());
        let m = Metric::from_parts("lp_multiclass", None, Some(Exponent::Finite(2.0))).unwrap();
        assert!(m.validate().is_err());
        let m = Metric::from_parts("ovo_mcc", Some(AveragingSpec::Harmonic), None).unwrap();
        assert!(matches!(m.validate(), Err(MetricError::SignedAverage(_))));
        let m = Metric::from_parts("generalized_fm", Some(AveragingSpec::Max), None).unwrap();
        assert!(m.validate().is_err());
    }

    #[test]
    fn binary_metrics_reject_multiclass() {
        let cm = ConfusionMatrix::from_unlabeled_counts(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        let m = Metric::from_parts("mcc_binary", None, None).unwrap();
        assert_eq!(m.evaluate(&cm), Err(MetricError::NotBinary(3)));
    }

    #[test]
    fn smoothing_is_recorded() {
        let cm = ConfusionMatrix::from_unlabeled_counts(&[vec![3, 1], vec![0, 0]]).unwrap();
        let s = Metric::GeneralizedMcc
            .evaluate_smoothed(&cm, Some(SmoothingSpec::new(0.5).unwrap()))
            .unwrap();
        assert_eq!(s.parameters.get("smooth").map(String::as_str), Some("0.5"));
        assert_ne!(s.value, Metric::GeneralizedMcc.evaluate(&cm).unwrap().value);
    }

    #[test]
    fn display_includes_parameters() {
        let m = Metric::from_parts("ovo_lp", Some(AveragingSpec::Min), Some(Exponent::NegInfinity)).unwrap();
        assert_eq!(m.to_string(), "ovo_lp:outer=min:p=-inf");
    }

    #[test]
    fn batch_matches_sequential() {
        let cms: Vec<ConfusionMatrix> = (1..40)
            .map(|k| ConfusionMatrix::from_unlabeled_counts(&[vec![k, 3, 1], vec![2, 40 - k, 0], vec![k % 5, 1, 7]]).unwrap())
            .collect();
        let m = Metric::OneVsOne { metric: BinaryMetric::F1, outer: AveragingSpec::Harmonic };
        assert_eq!(evaluate_batch(&m, &cms), evaluate_batch_sequential(&m, &cms));
    }
}
