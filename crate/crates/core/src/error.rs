use thiserror::Error;

/// Errors raised across the crate.
///
/// Numeric payloads are reported as `f64` regardless of the scalar type the
/// failing computation ran in.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("entry count {found} does not match shape {rows}x{cols}")]
    BadShape { rows: usize, cols: usize, found: usize },

    #[error("matrix is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPositive(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("Kraus list is empty")]
    EmptyKraus,

    #[error("Kraus operators are not trace preserving (|sum K^dag K - 1| = {0:.3e})")]
    NotTracePreserving(f64),

    #[error("remixing matrix is not an isometry (|u^dag u - 1| = {0:.3e})")]
    NotIsometry(f64),

    #[error("Choi matrix invalid: {0}")]
    InvalidChoi(String),

    #[error("environment vector has norm^2 {0} > 1")]
    EnvironmentNorm(f64),

    #[error(
        "transformation matrix is not admissible (range residual {range_residual:.3e}, \
         quadratic form {quadratic_form})"
    )]
    Inadmissible {
        range_residual: f64,
        quadratic_form: f64,
    },

    #[error("parameter `{name}` out of range: {value}")]
    OutOfRange { name: &'static str, value: f64 },

    #[error("control state is not normalized (|a|^2 + |b|^2 = {0})")]
    ControlNotNormalized(f64),

    #[error("weights must be nonnegative and sum to 1")]
    InvalidWeights,

    #[error("ensemble is invalid: {0}")]
    InvalidEnsemble(String),

    #[error("operator difference is zero")]
    ZeroDifference,

    #[error("eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("schema error at `{field}`: {message}")]
    Schema { field: String, message: String },

    #[error("json: {0}")]
    Json(String),
}

impl Error {
    pub(crate) fn dims(expected: impl ToString, found: impl ToString) -> Self {
        Error::DimensionMismatch {
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
