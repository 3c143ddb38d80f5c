use thiserror::Error;

use crate::numerics::SolveError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// Phased-array formulas are only defined for `D / lambda >= 0.5`.
    #[error("D/lambda = {0} is below the phased-array minimum of 0.5")]
    ArrayPrecondition(f64),
    /// The boundary is identically zero at this angle (sin or cos vanishes).
    #[error("boundary is degenerate at theta = {theta} rad")]
    Degenerate { theta: f64 },
    /// A branch solver was asked for a root that lies on the other branch.
    #[error("internal branch error: {0}")]
    InternalBranch(String),
    #[error("exact residual never reaches pi/8 at theta = {theta} rad")]
    NoBoundary { theta: f64 },
    #[error(transparent)]
    Solve(#[from] SolveError),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
