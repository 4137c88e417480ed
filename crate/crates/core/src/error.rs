use thiserror::Error;

/// Errors raised by the library. Validation problems that are reported
/// rather than raised live in [`crate::report::ValidationReport`].
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("index {index} out of range 1..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid cube morphism: {0}")]
    InvalidMorphism(String),

    #[error("unknown generator or cube `{0}`")]
    UnknownCube(String),

    #[error("truncation {available} too small, need at least {required}")]
    Truncation { available: usize, required: usize },

    #[error("matrix shape {rows}x{cols} does not match expected {expected_rows}x{expected_cols} ({context})")]
    Shape {
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
        context: String,
    },

    #[error("matrix is not invertible over the integers ({0})")]
    NotInvertible(String),

    #[error("not a chain complex: d_{degree} * d_{} != 0", degree + 1)]
    InvalidComplex { degree: usize },

    #[error("cokernel of degeneracies has torsion {torsion:?} in degree {degree}")]
    NonFreeCokernel { degree: usize, torsion: Vec<String> },

    #[error("wrong variance: expected {0}")]
    Variance(&'static str),

    #[error("system is not local")]
    NotLocal,

    #[error("validation failed: {0}")]
    Invalid(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
