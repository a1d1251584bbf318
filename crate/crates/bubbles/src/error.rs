use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate arc: start and end coincide")]
    DegenerateChord,
    #[error("half-angle {0} is outside the open interval (-pi, pi)")]
    HalfAngleOutOfRange(f64),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("point is not an endpoint of both arcs")]
    NotAnEndpoint,
    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("move precondition failed: {0}")]
    Precondition(String),
    #[error("pressure is ill-defined (cocycle residual {0:e})")]
    PressureUndefined(f64),
    #[error("minimization failed: {0}")]
    Minimize(String),
}

pub type Result<T> = std::result::Result<T, Error>;
