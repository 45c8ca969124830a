use thiserror::Error;

use crate::forms::BinaryForm;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("element is not a square")]
    NotASquare,
    #[error("target field has no recorded embedding of the source field")]
    NoEmbeddingRecorded,
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("characteristic 2 is not supported")]
    CharTwo,

    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("operation undefined on the zero form")]
    ZeroForm,
    #[error("all coordinates are zero")]
    ZeroVector,
    #[error("form is not a square up to a unit (odd exponent present)")]
    NotASquareUpToUnit,
    #[error("elimination degenerate: a form has degree 0 in the eliminated variable")]
    EliminationDegenerate,

    #[error("leading unit must be nonzero")]
    ZeroUnit,
    #[error("elimination failed after {0} coordinate changes")]
    EliminationFailedAfterRetries(usize),
    #[error("point is not on the surface")]
    PointNotOnSurface,
    #[error("enumeration too large: {0} exceeds the limit")]
    EnumerationTooLarge(u128),

    #[error("point is not on the curve")]
    PointNotOnCurve,
    #[error("invalid marked curve: {0}")]
    InvalidMarkedCurve(String),

    #[error("curve is contained in the branch locus")]
    CurveInsideBranch,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("double cover is split (no odd contact points)")]
    SplitCover,
    #[error("double cover is not split: {0} odd contact points")]
    NotSplit(usize),
    #[error("not the conic case: {0} odd contact points")]
    NotConicCase(usize),
    #[error("no point found on the auxiliary conic")]
    ConicPointNotFound,
    #[error("surface equation fails; residual has degree {}", .0.degree())]
    EquationFails(Box<BinaryForm>),
    #[error("map is constant")]
    ConstantMap,

    #[error("search space too large: {0} candidates exceeds cap {1}")]
    SearchSpaceTooLarge(u128, u128),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
