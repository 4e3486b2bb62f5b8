use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("simplex vertices are affinely dependent")]
    DegenerateSimplex,

    #[error("point lies outside the simplex (barycentric coordinate {coordinate} = {value:e})")]
    PointOutsideSimplex { coordinate: usize, value: f64 },

    #[error("equilibrium set is empty: A x + a never lies in Im(B)")]
    EmptyO,

    #[error("equilibrium set does not meet the simplex")]
    EmptyIntersection,

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("classification ambiguous under current tolerances: {0}")]
    AmbiguousClassification(String),

    #[error("linear program failed numerically: {0}")]
    LpNumericalFailure(String),

    #[error("assumption violated: {0}")]
    AssumptionViolated(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("internal invariant broken: {0}")]
    InternalInvariantBroken(String),

    #[error("input recovery residual {residual:e} exceeds bound {bound:e}")]
    ResidualTooLarge { residual: f64, bound: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
