use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("negative weight {value} at index {index}")]
    NegativeWeight { index: usize, value: f64 },
    #[error("total mass is zero")]
    ZeroTotalMass,
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("negative cell value {value} at ({row}, {col})")]
    NegativeCell { row: usize, col: usize, value: f64 },
    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },
    #[error("cell index ({row}, {col}) out of range for {height}x{width} grid")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        height: usize,
        width: usize,
    },
    #[error("point ({valence}, {arousal}) lies outside [-1, 1]^2")]
    PointOutOfDomain { valence: f64, arousal: f64 },
    #[error("invalid grid geometry {height}x{width}: both dimensions must be at least 2")]
    InvalidGeometry { height: usize, width: usize },
    #[error("emotion set is empty")]
    EmptySet,
    #[error("duplicate emotion label {0:?}")]
    DuplicateLabel(String),
    #[error("emotion sets differ: {left:?} vs {right:?}")]
    SetMismatch { left: String, right: String },
    #[error("non-finite value {0}")]
    NonFinite(f64),

    #[error("sigma must be positive, got {0}")]
    SigmaNonPositive(f64),
    #[error("invalid conversion parameter {name}: {value}")]
    InvalidParam { name: &'static str, value: f64 },
    #[error("no converter registered for {from} -> {to}")]
    UnknownConversion { from: String, to: String },

    #[error("label {0:?} cannot be resolved to a valence-arousal anchor")]
    UnresolvableLabel(String),
    #[error("empty input")]
    EmptyInput,
    #[error("point cloud is empty")]
    EmptyCloud,
    #[error("bandwidth covariance is not invertible")]
    SingularBandwidth,
    #[error("bandwidth covariance must be symmetric positive definite")]
    InvalidBandwidth,
    #[error("source range [{lo}, {hi}] is empty")]
    SourceRangeEmpty { lo: f64, hi: f64 },
    #[error("{value} lies outside [{lo}, {hi}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },

    #[error("file not found: {0}")]
    FileNotFound(PathBuf),
    #[error("line {line}: {reason}")]
    MalformedRow { line: usize, reason: String },
    #[error("line {line}: duplicate word {word:?}")]
    DuplicateWord { line: usize, word: String },
    #[error("line {line}: value {value} outside [0, 1]")]
    ValueOutOfRange { line: usize, value: f64 },
    #[error("word not found: {0:?}")]
    WordNotFound(String),

    #[error("all values tied; rank correlation undefined")]
    DegenerateInput,
    #[error("zero variance")]
    ZeroVariance,
    #[error("empty batch")]
    EmptyBatch,
    #[error("k = {k} outside 1..={len}")]
    KOutOfRange { k: usize, len: usize },
    #[error("unknown metric {0:?}")]
    UnknownMetric(String),
    #[error("metric {metric} needs {needed} ground truth, got {got}")]
    IncompatibleKinds {
        metric: String,
        needed: &'static str,
        got: &'static str,
    },

    #[error("format error: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
