use crate::linalg::LinalgError;

/// Faults raised by the control pipeline. All variants are `Copy` so that
/// error paths never allocate inside the loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("body pitch too close to ±90°: attitude Jacobian is singular")]
    GimbalSingularity,
    #[error("leg {leg} Jacobian is singular: foot command unreachable")]
    LegSingularity { leg: usize },
    #[error("leg {leg} cannot reach its foot target")]
    FootUnreachable { leg: usize },
    #[error("inertial wrench has no vertical component: ZMP undefined")]
    DegenerateWrench,
    #[error("support polygon is empty (no grounded feet)")]
    EmptyPolygon,
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Malformed robot or scenario file.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}
