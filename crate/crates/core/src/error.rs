use thiserror::Error;

/// Errors raised by the geometric and algebraic routines of this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("variable count mismatch: expected {expected}, found {found}")]
    VariableCountMismatch { expected: usize, found: usize },

    #[error("interpolation grid is missing the sample at {0:?}")]
    MissingGridPoint(Vec<u32>),

    #[error("inconsistent duplicate sample at {0:?}")]
    InconsistentSample(Vec<u32>),

    #[error("empty input")]
    EmptyInput,

    #[error("polytope is not full-dimensional (affine dimension {affine_dim} in ambient dimension {ambient_dim})")]
    NotFullDimensional { affine_dim: usize, ambient_dim: usize },

    #[error("the given vertex set is not a face of the polytope")]
    NotAFace,

    #[error("cone is not pointed")]
    NonPointedCone,

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("hyperplane does not meet the polytope")]
    EmptyIntersection,

    #[error("valuation is not translation invariant: {0}")]
    NotTranslationInvariant(String),

    #[error("slice family is degenerate: the body is lower-dimensional over the fibre space")]
    DegenerateSliceFamily,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
