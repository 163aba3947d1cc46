use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the solvers, kernel builders and matrix models.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The requested regime needs a different backend (e.g. ν ≥ 2 on the real axis).
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    #[error("root not bracketed: f({a}) and f({b}) have the same sign")]
    Bracket { a: f64, b: f64 },

    #[error("numerical failure: {message}")]
    NumericalFailure {
        message: String,
        last_iterate: Option<Complex64>,
    },

    /// φ*(−x)/φ(x) is not a unit-modulus constant.
    #[error("not a PT eigenfunction: |lambda| = {modulus}")]
    NotPtEigenfunction { modulus: f64 },

    #[error("inconsistent spectrum: {0}")]
    Inconsistency(String),

    /// The C operator only exists when PT symmetry is unbroken.
    #[error("C operator undefined: {0}")]
    CUndefined(String),

    #[error("degenerate eigensystem near eigenvalue {eigenvalue}")]
    Degenerate { eigenvalue: Complex64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
