use thiserror::Error;

/// Errors raised while building confusion matrices or evaluating metrics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("empty tuple")]
    EmptyTuple,
    #[error("negative input")]
    NegativeInput,
    #[error("non-finite input")]
    NonFiniteInput,

    #[error("grid is not square: row {row} has {len} cells, expected {expected}")]
    NonSquare { row: usize, len: usize, expected: usize },
    #[error("negative cell at ({row}, {col})")]
    NegativeCell { row: usize, col: usize },
    #[error("non-finite cell at ({row}, {col})")]
    NonFiniteCell { row: usize, col: usize },
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("n < 2: at least two classes are required, got {0}")]
    TooFewClasses(usize),
    #[error("confusion matrix has no samples")]
    EmptyMatrix,
    #[error("label sequences differ in length: {truth} true vs {predicted} predicted")]
    LengthMismatch { truth: usize, predicted: usize },
    #[error("label sequences are empty")]
    EmptySequence,

    #[error("smoothing pseudo-count must be a finite value >= 0, got {0}")]
    NegativeAlpha(f64),
    #[error("class index {index} out of range for {n} classes")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("pair restriction needs two distinct classes, got ({0}, {0})")]
    SamePair(usize),
    #[error("permutation is not a bijection on 0..{0}")]
    NotBijection(usize),
    #[error("metric needs a 2-class matrix, got {0} classes")]
    NotBinary(usize),

    #[error("p must be ≤ 1, got {0}")]
    ExponentAboveOne(String),
    #[error("invalid exponent: {0}")]
    InvalidExponent(String),
    #[error("invalid outer average {0}: expected harmonic, geometric, arithmetic, power:p with p ≤ 1, or min")]
    InvalidOuterAverage(String),
    #[error("average undefined on negative values: {0} cannot aggregate a signed metric")]
    SignedAverage(String),
    #[error("unknown metric {0:?}")]
    UnknownMetric(String),
    #[error("unknown averaging spec {0:?}")]
    UnknownAverage(String),
}

pub type Result<T> = std::result::Result<T, MetricError>;
