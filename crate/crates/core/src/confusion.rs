//! Confusion matrices, their conditional probabilities and the normalized
//! matrix whose determinant is the generalized MCC.
//!
//! Rows index the true class and columns the predicted class. Counts are
//! stored as `f64` so that additively smoothed matrices share the same type;
//! integer counts are exact up to 2^53.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::error::{MetricError, Result};
use crate::linalg;
use crate::means::{apply_average, ordered_sum, AveragingSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct ConfusionMatrix {
    labels: Vec<String>,
    counts: Vec<f64>,
    n: usize,
    row_sums: Vec<f64>,
    col_sums: Vec<f64>,
    total: f64,
}

/// Additive (Laplace) pseudo-count added to every cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothingSpec {
    alpha: f64,
}

impl SmoothingSpec {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha >= 0.0 {
            Ok(Self { alpha })
        } else {
            Err(MetricError::NegativeAlpha(alpha))
        }
    }

    pub fn alpha(self) -> f64 {
        self.alpha
    }
}

fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("class_{i}")).collect()
}

impl ConfusionMatrix {
    /// Builds a validated matrix from integer counts.
    pub fn from_counts<S: AsRef<str>>(grid: &[Vec<i64>], labels: &[S]) -> Result<Self> {
        for (i, row) in grid.iter().enumerate() {
            if let Some(j) = row.iter().position(|&c| c < 0) {
                return Err(MetricError::NegativeCell { row: i, col: j });
            }
        }
        let real: Vec<Vec<f64>> = grid
            .iter()
            .map(|row| row.iter().map(|&c| c as f64).collect())
            .collect();
        Self::from_real_counts(&real, labels)
    }

    /// Integer counts with labels `class_0 … class_{n−1}`.
    pub fn from_unlabeled_counts(grid: &[Vec<i64>]) -> Result<Self> {
        Self::from_counts(grid, &default_labels(grid.len()))
    }

    /// Builds a validated matrix from non-negative real counts.
    pub fn from_real_counts<S: AsRef<str>>(grid: &[Vec<f64>], labels: &[S]) -> Result<Self> {
        let n = grid.len();
        if n < 2 {
            return Err(MetricError::TooFewClasses(n));
        }
        for (i, row) in grid.iter().enumerate() {
            if row.len() != n {
                return Err(MetricError::NonSquare { row: i, len: row.len(), expected: n });
            }
            for (j, &c) in row.iter().enumerate() {
                if !c.is_finite() {
                    return Err(MetricError::NonFiniteCell { row: i, col: j });
                }
                if c < 0.0 {
                    return Err(MetricError::NegativeCell { row: i, col: j });
                }
            }
        }
        if labels.len() != n {
            return Err(MetricError::LabelCount { expected: n, got: labels.len() });
        }
        let mut seen = HashSet::with_capacity(n);
        for label in labels {
            if !seen.insert(label.as_ref()) {
                return Err(MetricError::DuplicateLabel(label.as_ref().to_string()));
            }
        }
        let cm = Self::from_parts(
            labels.iter().map(|l| l.as_ref().to_string()).collect(),
            grid.iter().flatten().map(|&c| c + 0.0).collect(),
        );
        if cm.total <= 0.0 {
            return Err(MetricError::EmptyMatrix);
        }
        Ok(cm)
    }

    /// Tallies paired true/predicted labels. Classes are the sorted union of
    /// both sequences.
    pub fn from_label_pairs<S: AsRef<str>>(truth: &[S], predicted: &[S]) -> Result<Self> {
        if truth.len() != predicted.len() {
            return Err(MetricError::LengthMismatch {
                truth: truth.len(),
                predicted: predicted.len(),
            });
        }
        if truth.is_empty() {
            return Err(MetricError::EmptySequence);
        }
        let labels: Vec<&str> = truth
            .iter()
            .chain(predicted)
            .map(AsRef::as_ref)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let n = labels.len();
        if n < 2 {
            return Err(MetricError::TooFewClasses(n));
        }
        let index: HashMap<&str, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let mut counts = vec![0.0; n * n];
        for (t, p) in truth.iter().zip(predicted) {
            counts[index[t.as_ref()] * n + index[p.as_ref()]] += 1.0;
        }
        Ok(Self::from_parts(labels.into_iter().map(str::to_string).collect(), counts))
    }

    /// Unvalidated constructor; callers guarantee a square, non-negative grid.
    fn from_parts(labels: Vec<String>, counts: Vec<f64>) -> Self {
        let n = labels.len();
        debug_assert_eq!(counts.len(), n * n);
        let row_sums: Vec<f64> = (0..n)
            .map(|i| ordered_sum(counts[i * n..(i + 1) * n].iter().copied()))
            .collect();
        let col_sums: Vec<f64> = (0..n)
            .map(|j| ordered_sum((0..n).map(|i| counts[i * n + j])))
            .collect();
        let total = ordered_sum(row_sums.iter().copied());
        Self { labels, counts, n, row_sums, col_sums, total }
    }

    pub fn n_classes(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Number of samples of true class `i` predicted as `j`.
    pub fn count(&self, i: usize, j: usize) -> f64 {
        self.counts[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.counts.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    pub fn row_sums(&self) -> &[f64] {
        &self.row_sums
    }

    pub fn col_sums(&self) -> &[f64] {
        &self.col_sums
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    /// True when every cell holds a whole number.
    pub fn is_integral(&self) -> bool {
        self.counts.iter().all(|c| c.fract() == 0.0)
    }

    /// Fraction of samples on the diagonal.
    pub fn accuracy(&self) -> f64 {
        if self.total == 0.0 {
            return 0.0;
        }
        ordered_sum((0..self.n).map(|i| self.count(i, i))) / self.total
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index < self.n {
            Ok(())
        } else {
            Err(MetricError::IndexOutOfRange { index, n: self.n })
        }
    }

    /// `P(predict j | true i)`; 0 for an empty row.
    pub fn row_conditional(&self, i: usize, j: usize) -> Result<f64> {
        self.check_index(i)?;
        self.check_index(j)?;
        Ok(self.row_cond(i, j))
    }

    /// `P(true i | predict j)`; 0 for an empty column.
    pub fn col_conditional(&self, i: usize, j: usize) -> Result<f64> {
        self.check_index(i)?;
        self.check_index(j)?;
        Ok(self.col_cond(i, j))
    }

    pub(crate) fn row_cond(&self, i: usize, j: usize) -> f64 {
        let r = self.row_sums[i];
        if r > 0.0 {
            self.count(i, j) / r
        } else {
            0.0
        }
    }

    pub(crate) fn col_cond(&self, i: usize, j: usize) -> f64 {
        let c = self.col_sums[j];
        if c > 0.0 {
            self.count(i, j) / c
        } else {
            0.0
        }
    }

    /// Adds `alpha` to every cell.
    pub fn smooth(&self, spec: SmoothingSpec) -> ConfusionMatrix {
        if spec.alpha == 0.0 {
            return self.clone();
        }
        Self::from_parts(
            self.labels.clone(),
            self.counts.iter().map(|c| c + spec.alpha).collect(),
        )
    }

    /// Entry `(i, j)` is the chosen average of `P(i | predict j)` and
    /// `P(predict j | i)`. With [`AveragingSpec::Geometric`] this is
    /// `n_ij / √(row_i · col_j)`.
    pub fn normalized_matrix(&self, averaging: AveragingSpec) -> Result<NormalizedConfusionMatrix> {
        let n = self.n;
        let mut values = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                values.push(apply_average(averaging, &[self.col_cond(i, j), self.row_cond(i, j)])?);
            }
        }
        Ok(NormalizedConfusionMatrix { values, n, averaging })
    }

    /// Swaps the roles of truth and prediction.
    pub fn transpose(&self) -> ConfusionMatrix {
        let n = self.n;
        let counts = (0..n * n).map(|k| self.counts[(k % n) * n + k / n]).collect();
        Self::from_parts(self.labels.clone(), counts)
    }

    /// Renames classes: new class `i` is old class `permutation[i]`, applied
    /// to rows and columns simultaneously.
    pub fn relabel(&self, permutation: &[usize]) -> Result<ConfusionMatrix> {
        let n = self.n;
        let mut seen = vec![false; n];
        if permutation.len() != n {
            return Err(MetricError::NotBijection(n));
        }
        for &p in permutation {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(MetricError::NotBijection(n));
            }
        }
        let labels = permutation.iter().map(|&p| self.labels[p].clone()).collect();
        let mut counts = Vec::with_capacity(n * n);
        for &pi in permutation {
            for &pj in permutation {
                counts.push(self.count(pi, pj));
            }
        }
        Ok(Self::from_parts(labels, counts))
    }

    /// The 2×2 matrix obtained by dropping every sample whose true or
    /// predicted class is outside `{i, j}`. It may be empty.
    pub fn restrict_to_pair(&self, i: usize, j: usize) -> Result<ConfusionMatrix> {
        self.check_index(i)?;
        self.check_index(j)?;
        if i == j {
            return Err(MetricError::SamePair(i));
        }
        Ok(Self::from_parts(
            vec![self.labels[i].clone(), self.labels[j].clone()],
            vec![self.count(i, i), self.count(i, j), self.count(j, i), self.count(j, j)],
        ))
    }

    /// Every cell multiplied by `k`.
    pub fn scaled(&self, k: f64) -> ConfusionMatrix {
        Self::from_parts(self.labels.clone(), self.counts.iter().map(|c| c * k).collect())
    }
}

/// Matrix of paired conditional-probability averages.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedConfusionMatrix {
    values: Vec<f64>,
    n: usize,
    averaging: AveragingSpec,
}

impl NormalizedConfusionMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn averaging(&self) -> AveragingSpec {
        self.averaging
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.values.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn transpose(&self) -> NormalizedConfusionMatrix {
        let n = self.n;
        let values = (0..n * n).map(|k| self.values[(k % n) * n + k / n]).collect();
        NormalizedConfusionMatrix { values, n, averaging: self.averaging }
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.values.chunks(self.n).map(|r| ordered_sum(r.iter().copied())).collect()
    }

    pub fn entry_sum(&self) -> f64 {
        ordered_sum(self.values.iter().copied())
    }

    /// Raw determinant, without clamping.
    pub fn determinant(&self) -> f64 {
        linalg::determinant(&self.values, self.n)
    }
}
