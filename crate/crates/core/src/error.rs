use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("cannot represent non-finite float {0}")]
    NonFiniteFloat(f64),

    #[error("cannot parse scalar from {0:?}")]
    ScalarParse(String),

    #[error("decimal value {0:?} rejected; pass the float-ingestion flag to accept it")]
    DecimalRejected(String),

    #[error("matrix is not square: {rows} rows but {cols} labels")]
    NotSquare { rows: usize, cols: usize },

    #[error("empty input: at least one point is required")]
    EmptyInput,

    #[error("point dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("index {index} out of range for {n} points")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("duplicate index {0} in subset")]
    DuplicateIndex(usize),

    #[error("unknown label {0:?}")]
    UnknownLabel(String),

    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),

    #[error("scale factor must be positive, got {0}")]
    NonPositiveScale(String),

    #[error("merge_pair requires two distinct indices, got {0} twice")]
    MergeSameIndex(usize),

    #[error("expected exactly 3 points, got {0}")]
    NotATriangle(usize),

    #[error("zero distance between distinct points {i} and {j}; quotient duplicates first")]
    ZeroDistance { i: usize, j: usize },

    #[error("set size {n} exceeds the configured bound {bound}")]
    OverBound { n: usize, bound: usize },

    #[error("tree is not connected")]
    TreeDisconnected,

    #[error("tree contains a cycle")]
    TreeCyclic,

    #[error("negative edge weight on edge {u:?} -- {v:?}")]
    NegativeWeight { u: String, v: String },

    #[error("measure {0:?} requires a weighted tree input")]
    TreeRequired(String),

    #[error("measure {0:?} requires a distance-matrix input")]
    MatrixRequired(String),

    #[error("invalid pseudometric: {0}")]
    InvalidMetric(String),

    #[error("partial graph: pair ({i},{j}) must appear in exactly one of weighted/labeled")]
    PartialGraphCoverage { i: usize, j: usize },

    #[error("partial graph: label {0:?} is not distinct")]
    DuplicateEdgeLabel(String),

    #[error("partial graph weights disagree with source matrix at ({i},{j})")]
    WeightMismatch { i: usize, j: usize },

    #[error("edges {0:?} and {1:?} are not symmetric in the partial graph")]
    NotSymmetric(String, String),

    #[error("pair move is not strictly toward the mean")]
    MoveNotStrict,

    #[error("pair move weights do not sum to the recorded lambda")]
    MoveSumMismatch,

    #[error("unknown measure {0:?}")]
    UnknownMeasure(String),

    #[error("unknown axiom id {0:?}")]
    UnknownAxiom(String),

    #[error("{context}: {message}")]
    Format { context: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn format(context: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Format {
            context: context.into(),
            message: message.into(),
        }
    }
}
