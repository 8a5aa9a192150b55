use thiserror::Error;

/// Every fallible operation in the crate returns this error.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("degree overflow: need moments up to degree {needed}, have {available}")]
    DegreeOverflow { needed: usize, available: usize },

    #[error("normalization needs a ball radius")]
    MissingRadius,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("SDP solver failed: {0}")]
    Solver(String),

    #[error("solver finished with status {status:?}{}", level.map(|d| format!(" at level {d}")).unwrap_or_default())]
    NotOptimal {
        status: crate::sdp::SolveStatus,
        level: Option<usize>,
    },

    #[error("flatness precondition violated: {0}")]
    FlatnessViolated(String),

    #[error("ill-conditioned Vandermonde system (condition {0:.3e}); flatness is borderline")]
    IllConditionedVandermonde(f64),

    #[error("matrix is not positive definite: {0}")]
    NotPositiveDefinite(String),

    #[error("density is not normalized: integral {0}")]
    Unnormalized(f64),

    #[error("objective is not sos-convex")]
    NotConvex,

    #[error("invalid pseudo-moment input: L(q^{power}) = {value}")]
    InvalidPseudoMoment { power: u32, value: f64 },

    #[error("no feasible grid point; raise the resolution")]
    EmptyFeasibleGrid,

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
