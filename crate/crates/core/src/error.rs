use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("indeterminate at working precision: {0}")]
    Indeterminate(String),

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("value out of range: {0}")]
    Range(String),

    #[error("not a double pole: {0}")]
    NotDoublePole(String),

    #[error("leading Laurent coefficient is not certified negative real: {0}")]
    NotStrebelLike(String),

    #[error("trajectory entered a pole neighbourhood: {0}")]
    Diverged(String),

    #[error("trajectory exceeded the maximum length {0}")]
    MaxLength(f64),

    #[error("orientations disagree: {0}")]
    Mismatch(String),

    #[error("segment passes through a pole: {0}")]
    PoleOnPath(String),

    #[error("half-edge left unmatched: {0}")]
    UnmatchedHalfEdge(String),

    #[error("edge lengths disagree: {0}")]
    LengthMismatch(String),

    #[error("inconsistent topology: {0}")]
    InconsistentTopology(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Failures that more working precision may resolve.
    pub fn is_precision_related(&self) -> bool {
        matches!(self, Error::Indeterminate(_) | Error::PrecisionExhausted(_))
    }
}
