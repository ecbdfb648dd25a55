//! Means over non-negative real tuples.
//!
//! Every metric in this crate aggregates probabilities through one of these
//! functions. All of them sort their input before accumulating, so the result
//! is bit-for-bit independent of the order of the tuple.

use std::fmt;
use std::str::FromStr;

use crate::error::{MetricError, Result};

/// Exponent of a power mean, extended with the two infinite limits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    /// The `p → −∞` limit, i.e. the minimum.
    NegInfinity,
    Finite(f64),
    /// The `p → +∞` limit, i.e. the maximum.
    PosInfinity,
}

impl Exponent {
    /// Whether the exponent is at most one, the range in which a power mean
    /// is bounded above by the arithmetic mean.
    pub fn is_at_most_one(self) -> bool {
        match self {
            Exponent::NegInfinity => true,
            Exponent::Finite(p) => p <= 1.0,
            Exponent::PosInfinity => false,
        }
    }

    pub(crate) fn check_at_most_one(self) -> Result<Self> {
        if let Exponent::Finite(p) = self {
            if p.is_nan() {
                return Err(MetricError::InvalidExponent(self.to_string()));
            }
        }
        if self.is_at_most_one() {
            Ok(self)
        } else {
            Err(MetricError::ExponentAboveOne(self.to_string()))
        }
    }
}

impl From<f64> for Exponent {
    fn from(p: f64) -> Self {
        if p == f64::INFINITY {
            Exponent::PosInfinity
        } else if p == f64::NEG_INFINITY {
            Exponent::NegInfinity
        } else {
            Exponent::Finite(p)
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::NegInfinity => f.write_str("-inf"),
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::PosInfinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = MetricError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "-inf" | "-infinity" => Ok(Exponent::NegInfinity),
            "inf" | "+inf" | "infinity" | "+infinity" => Ok(Exponent::PosInfinity),
            other => match other.parse::<f64>() {
                Ok(p) if p.is_finite() => Ok(Exponent::Finite(p)),
                _ => Err(MetricError::InvalidExponent(s.to_string())),
            },
        }
    }
}

/// Choice of aggregator for a tuple of non-negative values.
///
/// Serialized as `harmonic`, `geometric`, `arithmetic`, `power:<p>`, `min`
/// or `max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AveragingSpec {
    Harmonic,
    Geometric,
    Arithmetic,
    /// Power mean with a finite exponent. The infinite limits are `Min` and `Max`.
    Power(f64),
    Min,
    Max,
}

impl AveragingSpec {
    /// The power-mean exponent this average corresponds to.
    pub fn exponent(self) -> Exponent {
        match self {
            AveragingSpec::Harmonic => Exponent::Finite(-1.0),
            AveragingSpec::Geometric => Exponent::Finite(0.0),
            AveragingSpec::Arithmetic => Exponent::Finite(1.0),
            AveragingSpec::Power(p) => Exponent::Finite(p),
            AveragingSpec::Min => Exponent::NegInfinity,
            AveragingSpec::Max => Exponent::PosInfinity,
        }
    }

    /// Whether this average is accepted as the outer aggregator of a
    /// probability-valued metric: a power mean with exponent at most one.
    pub fn is_bounded_outer(self) -> bool {
        match self {
            AveragingSpec::Power(p) if !p.is_finite() => false,
            other => other.exponent().is_at_most_one(),
        }
    }
}

impl fmt::Display for AveragingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AveragingSpec::Harmonic => f.write_str("harmonic"),
            AveragingSpec::Geometric => f.write_str("geometric"),
            AveragingSpec::Arithmetic => f.write_str("arithmetic"),
            AveragingSpec::Power(p) => write!(f, "power:{p}"),
            AveragingSpec::Min => f.write_str("min"),
            AveragingSpec::Max => f.write_str("max"),
        }
    }
}

impl FromStr for AveragingSpec {
    type Err = MetricError;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "harmonic" => Ok(AveragingSpec::Harmonic),
            "geometric" => Ok(AveragingSpec::Geometric),
            "arithmetic" => Ok(AveragingSpec::Arithmetic),
            "min" => Ok(AveragingSpec::Min),
            "max" => Ok(AveragingSpec::Max),
            _ => {
                let p = lower
                    .strip_prefix("power:")
                    .ok_or_else(|| MetricError::UnknownAverage(s.to_string()))?;
                match p.parse::<f64>() {
                    Ok(p) if p.is_finite() => Ok(AveragingSpec::Power(p)),
                    _ => Err(MetricError::UnknownAverage(s.to_string())),
                }
            }
        }
    }
}

/// Sum in ascending order, so the result does not depend on input order.
pub(crate) fn ordered_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut v: Vec<f64> = values.into_iter().collect();
    v.sort_by(f64::total_cmp);
    v.iter().sum()
}

/// Validated, ascending copy of the tuple.
fn sorted_tuple(values: &[f64]) -> Result<Vec<f64>> {
    if values.is_empty() {
        return Err(MetricError::EmptyTuple);
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(MetricError::NonFiniteInput);
    }
    if values.iter().any(|&v| v < 0.0) {
        return Err(MetricError::NegativeInput);
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

fn constant(sorted: &[f64]) -> Option<f64> {
    let first = sorted[0];
    (first == sorted[sorted.len() - 1]).then_some(first)
}

pub fn arithmetic_mean(values: &[f64]) -> Result<f64> {
    let v = sorted_tuple(values)?;
    Ok(constant(&v).unwrap_or_else(|| v.iter().sum::<f64>() / v.len() as f64))
}

/// `k / Σ 1/aᵢ`, or 0 as soon as any entry is 0.
pub fn harmonic_mean(values: &[f64]) -> Result<f64> {
    let v = sorted_tuple(values)?;
    if v[0] == 0.0 {
        return Ok(0.0);
    }
    if let Some(c) = constant(&v) {
        return Ok(c);
    }
    Ok(v.len() as f64 / ordered_sum(v.iter().map(|a| 1.0 / a)))
}

/// k-th root of the product. Tuples of four or more are averaged in log space.
pub fn geometric_mean(values: &[f64]) -> Result<f64> {
    let v = sorted_tuple(values)?;
    if v[0] == 0.0 {
        return Ok(0.0);
    }
    if let Some(c) = constant(&v) {
        return Ok(c);
    }
    let k = v.len();
    Ok(match k {
        2 => (v[0] * v[1]).sqrt(),
        3 => (v[0] * v[1] * v[2]).cbrt(),
        _ => (ordered_sum(v.iter().map(|a| a.ln())) / k as f64).exp(),
    })
}

pub fn min_value(values: &[f64]) -> Result<f64> {
    Ok(sorted_tuple(values)?[0])
}

pub fn max_value(values: &[f64]) -> Result<f64> {
    let v = sorted_tuple(values)?;
    Ok(v[v.len() - 1])
}

/// Power mean `(Σ aᵢᵖ / k)^(1/p)`.
///
/// `p = 0` is the geometric mean and the infinite exponents are the min and
/// max. For `p ≤ 0` a zero entry forces the result to 0.
pub fn power_mean(values: &[f64], p: Exponent) -> Result<f64> {
    let p = match p {
        Exponent::NegInfinity => return min_value(values),
        Exponent::PosInfinity => return max_value(values),
        Exponent::Finite(p) if p.is_nan() => {
            return Err(MetricError::InvalidExponent("NaN".into()))
        }
        Exponent::Finite(p) => p,
    };
    if p == 0.0 {
        return geometric_mean(values);
    } else if p == 1.0 {
        return arithmetic_mean(values);
    } else if p == -1.0 {
        return harmonic_mean(values);
    }

    let v = sorted_tuple(values)?;
    if let Some(c) = constant(&v) {
        return Ok(c);
    }
    if p < 0.0 && v[0] == 0.0 {
        return Ok(0.0);
    }
    // Scale so every powered term is at most one.
    let reference = if p > 0.0 { v[v.len() - 1] } else { v[0] };
    let mean = ordered_sum(v.iter().map(|a| (a / reference).powf(p))) / v.len() as f64;
    Ok(reference * mean.powf(1.0 / p))
}

pub fn apply_average(spec: AveragingSpec, values: &[f64]) -> Result<f64> {
    match spec {
        AveragingSpec::Harmonic => harmonic_mean(values),
        AveragingSpec::Geometric => geometric_mean(values),
        AveragingSpec::Arithmetic => arithmetic_mean(values),
        AveragingSpec::Power(p) if !p.is_finite() => {
            Err(MetricError::InvalidExponent(p.to_string()))
        }
        AveragingSpec::Power(p) => power_mean(values, Exponent::Finite(p)),
        AveragingSpec::Min => min_value(values),
        AveragingSpec::Max => max_value(values),
    }
}
