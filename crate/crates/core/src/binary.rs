//! Two-class metrics over a [`BinaryView`] of a 2×2 confusion matrix.
//!
//! All rates use the convention that a zero denominator yields 0.

use std::fmt;

use crate::confusion::ConfusionMatrix;
use crate::error::{MetricError, Result};
use crate::means::{geometric_mean, harmonic_mean, power_mean, Exponent};

/// The four cells of a 2×2 confusion matrix, seen from one positive class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinaryView {
    pub tp: f64,
    pub fn_: f64,
    pub fp: f64,
    pub tn: f64,
}

fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

impl BinaryView {
    /// `positive_index` selects which of the two classes counts as positive.
    pub fn new(cm: &ConfusionMatrix, positive_index: usize) -> Result<Self> {
        if cm.n_classes() != 2 {
            return Err(MetricError::NotBinary(cm.n_classes()));
        }
        if positive_index > 1 {
            return Err(MetricError::IndexOutOfRange { index: positive_index, n: 2 });
        }
        let (pos, neg) = (positive_index, 1 - positive_index);
        Ok(Self {
            tp: cm.count(pos, pos),
            fn_: cm.count(pos, neg),
            fp: cm.count(neg, pos),
            tn: cm.count(neg, neg),
        })
    }

    pub fn from_cells(tp: f64, fn_: f64, fp: f64, tn: f64) -> Self {
        Self { tp, fn_, fp, tn }
    }

    /// Same matrix with the positive and negative classes exchanged.
    pub fn swapped(self) -> Self {
        Self { tp: self.tn, fn_: self.fp, fp: self.fn_, tn: self.tp }
    }

    /// Truth and prediction exchanged.
    pub fn transposed(self) -> Self {
        Self { tp: self.tp, fn_: self.fp, fp: self.fn_, tn: self.tn }
    }

    pub fn total(self) -> f64 {
        self.tp + self.fn_ + self.fp + self.tn
    }
}

pub fn precision(v: BinaryView) -> f64 {
    ratio(v.tp, v.tp + v.fp)
}

/// Also called recall.
pub fn sensitivity(v: BinaryView) -> f64 {
    ratio(v.tp, v.tp + v.fn_)
}

pub fn specificity(v: BinaryView) -> f64 {
    ratio(v.tn, v.tn + v.fp)
}

/// Negative predictive value.
pub fn npv(v: BinaryView) -> f64 {
    ratio(v.tn, v.tn + v.fn_)
}

pub fn accuracy(v: BinaryView) -> f64 {
    ratio(v.tp + v.tn, v.total())
}

/// Harmonic mean of precision and sensitivity.
pub fn f1_binary(v: BinaryView) -> f64 {
    harmonic_mean(&[precision(v), sensitivity(v)]).expect("rates are valid probabilities")
}

/// F1 of the negative class: harmonic mean of specificity and NPV.
pub fn f1_zero_binary(v: BinaryView) -> f64 {
    harmonic_mean(&[specificity(v), npv(v)]).expect("rates are valid probabilities")
}

/// Geometric mean of precision and sensitivity.
pub fn fowlkes_mallows_binary(v: BinaryView) -> f64 {
    geometric_mean(&[precision(v), sensitivity(v)]).expect("rates are valid probabilities")
}

/// `(TP·TN − FP·FN) / √((TP+FP)(TP+FN)(TN+FN)(TN+FP))`, or 0 when any
/// marginal is empty.
pub fn mcc_binary(v: BinaryView) -> f64 {
    let mut factors = [v.tp + v.fp, v.tp + v.fn_, v.tn + v.fn_, v.tn + v.fp];
    if factors.iter().any(|&f| f <= 0.0) {
        return 0.0;
    }
    // sorted so that swapping or transposing the view gives the same bits
    factors.sort_by(f64::total_cmp);
    let den = (factors[0] * factors[1] * factors[2] * factors[3]).sqrt();
    ((v.tp * v.tn - v.fp * v.fn_) / den).clamp(-1.0, 1.0)
}

/// Power mean of sensitivity, precision, specificity and NPV with `p ≤ 1`.
pub fn lp_four_rate_score(v: BinaryView, p: Exponent) -> Result<f64> {
    let p = p.check_at_most_one()?;
    power_mean(&[sensitivity(v), precision(v), specificity(v), npv(v)], p)
}

/// Binary metric selector used by one-vs-one averaging.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BinaryMetric {
    Mcc,
    F1,
    F1Zero,
    FowlkesMallows,
    LpFourRate(Exponent),
}

impl BinaryMetric {
    pub fn evaluate(self, v: BinaryView) -> Result<f64> {
        Ok(match self {
            BinaryMetric::Mcc => mcc_binary(v),
            BinaryMetric::F1 => f1_binary(v),
            BinaryMetric::F1Zero => f1_zero_binary(v),
            BinaryMetric::FowlkesMallows => fowlkes_mallows_binary(v),
            BinaryMetric::LpFourRate(p) => lp_four_rate_score(v, p)?,
        })
    }

    /// Ranges over `[−1, 1]` rather than `[0, 1]`.
    pub fn is_signed(self) -> bool {
        matches!(self, BinaryMetric::Mcc)
    }

    /// Unchanged when the positive and negative classes are exchanged.
    pub fn is_swap_invariant(self) -> bool {
        matches!(self, BinaryMetric::Mcc | BinaryMetric::LpFourRate(_))
    }

    pub fn id(self) -> &'static str {
        match self {
            BinaryMetric::Mcc => "mcc",
            BinaryMetric::F1 => "f1",
            BinaryMetric::F1Zero => "f1_zero",
            BinaryMetric::FowlkesMallows => "fm",
            BinaryMetric::LpFourRate(_) => "lp",
        }
    }
}

impl fmt::Display for BinaryMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}
