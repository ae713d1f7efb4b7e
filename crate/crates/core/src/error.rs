use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series centers differ: {0} vs {1}")]
    CenterMismatch(Complex64, Complex64),

    #[error("division by a series whose leading coefficient has modulus {0:e}")]
    DivisionSingularity(f64),

    #[error("cannot differentiate a series of order 0")]
    DegenerateOrder,

    #[error("a truncated series needs at least one coefficient")]
    EmptySeries,

    #[error("pole parameter p = {0} is outside (0, 1)")]
    PoleOutOfRange(f64),

    #[error("point {0} is not inside the open unit disk")]
    OutsideDisk(Complex64),

    #[error("invalid Schur generator: {0}")]
    InvalidGenerator(String),

    #[error("omitted point w0 must be nonzero")]
    ZeroCenter,

    #[error("w0 = {w0} is not admissible: |w0 + p(1+p^2)/(1-p^2)^2| = {distance} exceeds {radius}")]
    InadmissibleCenter {
        w0: Complex64,
        distance: f64,
        radius: f64,
    },

    #[error("requested order {requested} exceeds the available order {available}")]
    OrderExceeded { requested: usize, available: usize },

    #[error("{what} requires n >= {min}, got {n}")]
    IndexTooSmall {
        what: &'static str,
        n: usize,
        min: usize,
    },

    #[error("expected {expected} coefficients, got {found}")]
    WrongCoefficientKind {
        expected: &'static str,
        found: &'static str,
    },

    #[error("operation requires a {expected} member")]
    WrongFamily { expected: &'static str },
}
