use alloc::string::String;

use crate::dsl::{EvalError, ParseError};

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("metric degenerate at point")]
    Degenerate,
    #[error("stencil outside domain")]
    StencilOutsideDomain,
    #[error("finite-difference step must be positive and finite, got {0}")]
    InvalidStep(f64),
    #[error("point outside the {0} domain")]
    OutOfDomain(&'static str),
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("analytic derivatives unavailable for {0}")]
    AnalyticUnavailable(String),
    #[error("{0} is a line-bundle weight, not a tangent-bundle metric")]
    NotATangentMetric(String),
    #[error("missing jet: {0}")]
    MissingJet(&'static str),
    #[error("invalid metric spec: {0}")]
    InvalidSpec(String),
    #[error("non-positive line-bundle weight {0}")]
    NonPositiveWeight(f64),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}
