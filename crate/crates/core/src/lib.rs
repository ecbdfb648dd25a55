//! Goodness-of-fit metrics for multi-class classifiers.
//!
//! Builds confusion matrices from counts or label pairs and scores them with
//! the generalized Matthews correlation coefficient (the determinant of the
//! geometric normalized confusion matrix), generalized F1 and
//! Fowlkes–Mallows indices, Cramér's φ, one-vs-one averages of binary
//! metrics, and power means of the per-class conditionals.
//!
//! ```
//! use fitmetrics::{generalized_mcc, ConfusionMatrix};
//!
//! let cm = ConfusionMatrix::from_counts(
//!     &[vec![20, 6, 0], vec![2, 20, 0], vec![12, 12, 8]],
//!     &["a", "b", "c"],
//! )
//! .unwrap();
//! let score = generalized_mcc(&cm);
//! assert!((score - 0.225_669_288).abs() < 1e-9);
//! ```

pub mod binary;
pub mod confusion;
pub mod error;
pub mod linalg;
pub mod means;
pub mod metric;
pub mod multiclass;
pub mod parallel;

pub use binary::{BinaryMetric, BinaryView};
pub use confusion::{ConfusionMatrix, NormalizedConfusionMatrix, SmoothingSpec};
pub use error::{MetricError, Result};
pub use means::{AveragingSpec, Exponent};
pub use metric::{evaluate_batch, evaluate_batch_sequential, Metric, Rate};
pub use multiclass::{
    cramers_phi, generalized_f1, generalized_fm, generalized_mcc, lp_multiclass,
    one_vs_one_average, perfect_fit_permutation, MetricScore, Parity, PermutationWitness,
};
