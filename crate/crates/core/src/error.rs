use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A constructor argument violates its documented range.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid field: {0}")]
    InvalidField(String),

    /// Evaluation requested outside the set where a formula is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("no nodes left to evaluate after exclusions")]
    EmptyEvaluation,

    #[error("slice {index} (y = {y}) is not strictly convex in x")]
    NonConvexSlice { index: usize, y: f64 },

    #[error("degenerate slope range: {0}")]
    DegenerateSlope(String),

    #[error("range mismatch: {0}")]
    RangeMismatch(String),

    #[error("point coincides with the inversion center")]
    AtCenter,

    #[error("sample {index} lies inside the open ball |y - x| < lambda")]
    InsideBall { index: usize },

    #[error("singular Newton system at iteration {iteration} (pivot row {row})")]
    SingularJacobian { iteration: usize, row: usize },

    #[error("solver did not converge: {0}")]
    NotConverged(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
