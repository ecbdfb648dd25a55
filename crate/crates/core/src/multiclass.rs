//! Multi-class goodness-of-fit metrics.
//!
//! The central one is [`generalized_mcc`]: the determinant of the matrix
//! `M[i][j] = √(P(i | predict j) · P(predict j | i))`. Its magnitude is the
//! volume of the parallelepiped spanned by the rows of `M`; it is bounded by
//! one, reaches one only on permutation matrices, and collapses to zero as
//! soon as some class is never predicted.

use std::collections::BTreeMap;

use crate::binary::{BinaryMetric, BinaryView};
use crate::confusion::ConfusionMatrix;
use crate::error::{MetricError, Result};
use crate::means::{
    apply_average, geometric_mean, harmonic_mean, ordered_sum, power_mean, AveragingSpec, Exponent,
};
use crate::parallel;

/// Slack allowed on `|det M| ≤ 1` before the value is clamped.
pub const DETERMINANT_TOLERANCE: f64 = 1e-10;

/// A named metric value together with the parameters that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricScore {
    pub metric_id: String,
    pub value: f64,
    pub parameters: BTreeMap<String, String>,
    pub n_classes: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

/// Class renaming that turns a permutation-shaped confusion matrix into a
/// diagonal one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationWitness {
    /// `mapping[j] = i`: predictions of class `j` should be renamed to `i`.
    pub mapping: Vec<usize>,
    pub parity: Parity,
}

fn parity_of(mapping: &[usize]) -> Parity {
    let mut visited = vec![false; mapping.len()];
    let mut transpositions = 0;
    for start in 0..mapping.len() {
        let mut len = 0;
        let mut k = start;
        while !visited[k] {
            visited[k] = true;
            k = mapping[k];
            len += 1;
        }
        if len > 0 {
            transpositions += len - 1;
        }
    }
    if transpositions % 2 == 0 {
        Parity::Even
    } else {
        Parity::Odd
    }
}

/// Determinant of the geometric normalized confusion matrix, in `[−1, 1]`.
pub fn generalized_mcc(cm: &ConfusionMatrix) -> f64 {
    let det = cm
        .normalized_matrix(AveragingSpec::Geometric)
        .expect("geometric averaging of probabilities cannot fail")
        .determinant();
    debug_assert!(
        det.abs() <= 1.0 + DETERMINANT_TOLERANCE,
        "determinant {det} escapes the unit bound"
    );
    // normalizes -0.0 as well
    det.clamp(-1.0, 1.0) + 0.0
}

fn check_outer(outer: AveragingSpec) -> Result<AveragingSpec> {
    if outer.is_bounded_outer() {
        Ok(outer)
    } else {
        Err(MetricError::InvalidOuterAverage(outer.to_string()))
    }
}

/// Outer average of the per-class harmonic means of recall and precision.
pub fn generalized_f1(cm: &ConfusionMatrix, outer: AveragingSpec) -> Result<f64> {
    let outer = check_outer(outer)?;
    let per_class: Vec<f64> = (0..cm.n_classes())
        .map(|i| harmonic_mean(&[cm.row_cond(i, i), cm.col_cond(i, i)]))
        .collect::<Result<_>>()?;
    apply_average(outer, &per_class)
}

/// Outer average of the diagonal of the geometric normalized matrix.
pub fn generalized_fm(cm: &ConfusionMatrix, outer: AveragingSpec) -> Result<f64> {
    let outer = check_outer(outer)?;
    let per_class: Vec<f64> = (0..cm.n_classes())
        .map(|i| geometric_mean(&[cm.col_cond(i, i), cm.row_cond(i, i)]))
        .collect::<Result<_>>()?;
    apply_average(outer, &per_class)
}

/// Cramér's φ: `√((χ²/N) / (n − 1))`.
///
/// Uses `χ²/N = Σ n_ij² / (row_i · col_j) − 1`, summed over cells with a
/// positive expected count.
pub fn cramers_phi(cm: &ConfusionMatrix) -> f64 {
    let n = cm.n_classes();
    let (rows, cols) = (cm.row_sums(), cm.col_sums());
    let mut terms = Vec::with_capacity(n * n);
    for (i, &r) in rows.iter().enumerate() {
        for (j, &c) in cols.iter().enumerate() {
            let e = r * c;
            if e > 0.0 {
                let x = cm.count(i, j);
                terms.push(x * x / e);
            }
        }
    }
    let phi_sq = (ordered_sum(terms) - 1.0) / (n - 1) as f64;
    phi_sq.max(0.0).sqrt().min(1.0)
}

/// Power mean with exponent `p ≤ 1` over the `2n` diagonal conditionals
/// `P(i | predict i)` and `P(predict i | i)`.
pub fn lp_multiclass(cm: &ConfusionMatrix, p: Exponent) -> Result<f64> {
    let p = p.check_at_most_one()?;
    let n = cm.n_classes();
    let tuple: Vec<f64> = (0..n)
        .map(|i| cm.col_cond(i, i))
        .chain((0..n).map(|i| cm.row_cond(i, i)))
        .collect();
    power_mean(&tuple, p)
}

fn signed_average(outer: AveragingSpec, values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(MetricError::EmptyTuple);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    match outer {
        AveragingSpec::Arithmetic | AveragingSpec::Power(1.0) => {
            Ok(sorted.iter().sum::<f64>() / sorted.len() as f64)
        }
        AveragingSpec::Min => Ok(sorted[0]),
        AveragingSpec::Max => Ok(sorted[sorted.len() - 1]),
        other => Err(MetricError::SignedAverage(other.to_string())),
    }
}

/// Averages a binary metric over the 2×2 restrictions of every unordered
/// class pair.
///
/// Metrics that depend on which class is positive are evaluated in both
/// orientations and those two values are combined with `outer` first.
/// A signed metric (MCC) only admits the arithmetic mean, min or max.
pub fn one_vs_one_average(
    cm: &ConfusionMatrix,
    metric: BinaryMetric,
    outer: AveragingSpec,
) -> Result<MetricScore> {
    if metric.is_signed() {
        signed_average(outer, &[0.0])?;
    } else {
        check_outer(outer)?;
    }
    if let BinaryMetric::LpFourRate(p) = metric {
        p.check_at_most_one()?;
    }

    let n = cm.n_classes();
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let per_pair = parallel::map_ordered(&pairs, |&(i, j)| -> Result<f64> {
        let view = BinaryView::new(&cm.restrict_to_pair(i, j)?, 0)?;
        if metric.is_swap_invariant() {
            metric.evaluate(view)
        } else {
            apply_average(outer, &[metric.evaluate(view)?, metric.evaluate(view.swapped())?])
        }
    })
    .into_iter()
    .collect::<Result<Vec<f64>>>()?;

    let value = if metric.is_signed() {
        signed_average(outer, &per_pair)?
    } else {
        apply_average(outer, &per_pair)?
    };
    let mut parameters = BTreeMap::from([("outer".to_string(), outer.to_string())]);
    if let BinaryMetric::LpFourRate(p) = metric {
        parameters.insert("p".into(), p.to_string());
    }
    Ok(MetricScore {
        metric_id: format!("ovo_{}", metric.id()),
        value,
        parameters,
        n_classes: n,
    })
}

/// Returns the class renaming that makes the fit perfect, if the matrix has
/// exactly one non-empty cell in every row and every column.
pub fn perfect_fit_permutation(cm: &ConfusionMatrix) -> Option<PermutationWitness> {
    let n = cm.n_classes();
    let mut mapping = vec![usize::MAX; n];
    for i in 0..n {
        let mut positive = (0..n).filter(|&j| cm.count(i, j) > 0.0);
        let j = positive.next()?;
        if positive.next().is_some() || mapping[j] != usize::MAX {
            return None;
        }
        mapping[j] = i;
    }
    let parity = parity_of(&mapping);
    Some(PermutationWitness { mapping, parity })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binary::mcc_binary;

    fn cm(grid: &[&[i64]]) -> ConfusionMatrix {
        let grid: Vec<Vec<i64>> = grid.iter().map(|r| r.to_vec()).collect();
        ConfusionMatrix::from_unlabeled_counts(&grid).unwrap()
    }

    fn worked_matrix() -> ConfusionMatrix {
        cm(&[&[20, 6, 0], &[2, 20, 0], &[12, 12, 8]])
    }

    fn cyclic() -> ConfusionMatrix {
        cm(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]])
    }

    /// Laplace expansion along the first row.
    fn cofactor_det(m: &[Vec<f64>]) -> f64 {
        if m.len() == 1 {
            return m[0][0];
        }
        (0..m.len())
            .map(|c| {
                let minor: Vec<Vec<f64>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(k, _)| k != c).map(|(_, &v)| v).collect())
                    .collect();
                let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
                sign * m[0][c] * cofactor_det(&minor)
            })
            .sum()
    }

    #[test]
    fn mcc_perfect_and_permutations() {
        assert_eq!(generalized_mcc(&cm(&[&[5, 0, 0], &[0, 9, 0], &[0, 0, 2]])), 1.0);
        assert_eq!(generalized_mcc(&cyclic()), 1.0);
        assert_eq!(cyclic().accuracy(), 0.0);
        assert_eq!(generalized_mcc(&cm(&[&[0, 3], &[8, 0]])), -1.0);
    }

    #[test]
    fn mcc_worked_example_matches_cofactor_oracle() {
        let c = worked_matrix();
        let rows: Vec<Vec<f64>> = (0..3)
            .map(|i| (0..3).map(|j| c.count(i, j) / (c.row_sums()[i] * c.col_sums()[j]).sqrt()).collect())
            .collect();
        let oracle = cofactor_det(&rows);
        assert!((generalized_mcc(&c) - oracle).abs() < 1e-12);
        assert!((oracle - 0.225_669_288_012_38).abs() < 1e-12);
    }

    #[test]
    fn f1_examples() {
        for outer in [AveragingSpec::Harmonic, AveragingSpec::Geometric, AveragingSpec::Arithmetic] {
            assert_eq!(generalized_f1(&cm(&[&[4, 0], &[0, 6]]), outer).unwrap(), 1.0);
        }
        let never_predicted = cm(&[&[4, 1, 0], &[2, 6, 0], &[1, 1, 0]]);
        assert_eq!(generalized_f1(&never_predicted, AveragingSpec::Harmonic).unwrap(), 0.0);
        // H = (2/3, 2/3, 0.4)
        let v = generalized_f1(&worked_matrix(), AveragingSpec::Arithmetic).unwrap();
        assert!((v - (2.0 / 3.0 + 2.0 / 3.0 + 0.4) / 3.0).abs() < 1e-15);
        assert!(matches!(
            generalized_f1(&worked_matrix(), AveragingSpec::Max),
            Err(MetricError::InvalidOuterAverage(_))
        ));
        assert!(generalized_f1(&worked_matrix(), AveragingSpec::Power(2.0)).is_err());
    }

    #[test]
    fn fm_examples() {
        assert_eq!(generalized_fm(&cm(&[&[4, 0], &[0, 6]]), AveragingSpec::Arithmetic).unwrap(), 1.0);
        let c = worked_matrix();
        let diag = [20.0 / (26.0f64 * 34.0).sqrt(), 20.0 / (22.0f64 * 38.0).sqrt(), 0.5];
        let v = generalized_fm(&c, AveragingSpec::Arithmetic).unwrap();
        assert!((v - diag.iter().sum::<f64>() / 3.0).abs() < 1e-15);
        let m = c.normalized_matrix(AveragingSpec::Geometric).unwrap();
        assert_eq!(generalized_fm(&c, AveragingSpec::Arithmetic).unwrap(),
            apply_average(AveragingSpec::Arithmetic, &m.diagonal()).unwrap());
    }

    #[test]
    fn cramer_examples() {
        assert_eq!(cramers_phi(&cm(&[&[3, 0, 0], &[0, 3, 0], &[0, 0, 3]])), 1.0);
        assert_eq!(cramers_phi(&cm(&[&[4, 4], &[4, 4]])), 0.0);
        let c = cm(&[&[7, 2], &[3, 11]]);
        let mcc = mcc_binary(BinaryView::new(&c, 0).unwrap());
        assert!((cramers_phi(&c) - mcc.abs()).abs() < 1e-12);
        // chi-square from scipy.stats.chi2_contingency(correction=False)
        assert!((cramers_phi(&worked_matrix()) - 0.486_578_062_421_044_84).abs() < 1e-12);
    }

    #[test]
    fn ovo_examples() {
        let diag = cm(&[&[5, 0, 0], &[0, 9, 0], &[0, 0, 2]]);
        let s = one_vs_one_average(&diag, BinaryMetric::Mcc, AveragingSpec::Arithmetic).unwrap();
        assert_eq!(s.value, 1.0);
        assert_eq!(s.metric_id, "ovo_mcc");

        let two = cm(&[&[7, 2], &[3, 11]]);
        let s = one_vs_one_average(&two, BinaryMetric::Mcc, AveragingSpec::Arithmetic).unwrap();
        assert_eq!(s.value, mcc_binary(BinaryView::new(&two, 0).unwrap()));

        // pairs: mcc([[20,6],[2,20]]) = 0.678321..., mcc([[20,0],[12,8]]) = 0.5, mcc([[20,0],[12,8]]) = 0.5
        let s = one_vs_one_average(&worked_matrix(), BinaryMetric::Mcc, AveragingSpec::Arithmetic).unwrap();
        assert!((s.value - 0.559_440_559_440_559_5).abs() < 1e-12, "{}", s.value);

        assert!(matches!(
            one_vs_one_average(&worked_matrix(), BinaryMetric::Mcc, AveragingSpec::Geometric),
            Err(MetricError::SignedAverage(_))
        ));
        assert!(one_vs_one_average(&worked_matrix(), BinaryMetric::Mcc, AveragingSpec::Min).is_ok());
        assert!(one_vs_one_average(
            &worked_matrix(),
            BinaryMetric::LpFourRate(Exponent::Finite(3.0)),
            AveragingSpec::Arithmetic
        )
        .is_err());
    }

    #[test]
    fn lp_examples() {
        let diag = cm(&[&[5, 0, 0], &[0, 9, 0], &[0, 0, 2]]);
        for p in [Exponent::NegInfinity, Exponent::Finite(-3.0), Exponent::Finite(0.0), Exponent::Finite(1.0)] {
            assert_eq!(lp_multiclass(&diag, p).unwrap(), 1.0);
        }
        let c = worked_matrix();
        // worst diagonal conditional is 8/32
        assert_eq!(lp_multiclass(&c, Exponent::NegInfinity).unwrap(), 0.25);
        assert!(matches!(
            lp_multiclass(&c, Exponent::Finite(1.01)),
            Err(MetricError::ExponentAboveOne(_))
        ));
    }

    #[test]
    fn witnesses() {
        let w = perfect_fit_permutation(&cyclic()).unwrap();
        assert_eq!(w.mapping, vec![1, 2, 0]);
        assert_eq!(w.parity, Parity::Even);
        let w = perfect_fit_permutation(&cm(&[&[2, 0, 0], &[0, 1, 0], &[0, 0, 7]])).unwrap();
        assert_eq!(w.mapping, vec![0, 1, 2]);
        assert_eq!(w.parity, Parity::Even);
        let w = perfect_fit_permutation(&cm(&[&[0, 3], &[8, 0]])).unwrap();
        assert_eq!(w.parity, Parity::Odd);
        assert!(perfect_fit_permutation(&worked_matrix()).is_none());
        // a column used twice
        assert!(perfect_fit_permutation(&cm(&[&[1, 0], &[1, 0]])).is_none());
        // renaming predictions through the witness diagonalizes the matrix
        let c = cm(&[&[0, 0, 4, 0], &[3, 0, 0, 0], &[0, 0, 0, 9], &[0, 2, 0, 0]]);
        let w = perfect_fit_permutation(&c).unwrap();
        for j in 0..4 {
            assert!(c.count(w.mapping[j], j) > 0.0);
        }
        assert_eq!(w.parity.sign(), generalized_mcc(&c));
    }
}
