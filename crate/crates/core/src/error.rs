use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{op}: dimension mismatch {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("{what} index {index} out of range (bound {bound})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        bound: usize,
    },
    #[error("invalid structure: {0}")]
    Invalid(String),
    #[error("dimension {requested} exceeds the enumeration cap {cap}")]
    CapExceeded { requested: usize, cap: usize },
    #[error("simplex {simplex} does not map to a simplex of the target")]
    NonSimplicial { simplex: String },
    #[error(
        "vertex map is not order-preserving on simplex {simplex}; \
         barycentric subdivision of the source restores monotonicity"
    )]
    NonMonotone { simplex: String },
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("polynomial has degree {degree} > 2")]
    DegreeTooHigh { degree: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("provider bundle is missing {0}")]
    Missing(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
