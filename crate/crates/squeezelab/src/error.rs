use thiserror::Error;

/// Library-wide error type. Variants carry enough context to print a usable
/// diagnostic without the caller re-deriving anything.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite parameter {name} = {value}")]
    NonFiniteParameter { name: &'static str, value: f64 },

    #[error(
        "canonical constraint violated: |c1 + c5 + c1*c5 - c2*c4| = {defect:.3e} exceeds {tolerance:.0e}; \
         the pair no longer satisfies [b, b+] = 1"
    )]
    ConstraintViolated { defect: f64, tolerance: f64 },

    #[error("{family}: lambda = {lambda} outside admissible range {range} ({inequality})")]
    LambdaOutOfRange {
        family: &'static str,
        lambda: f64,
        range: &'static str,
        inequality: &'static str,
    },

    #[error("inadmissible coefficients: {0}")]
    Inadmissible(String),

    #[error("level n = {n} exceeds the supported cap {cap}")]
    LevelTooLarge { n: u32, cap: u32 },

    #[error("second-derivative coefficient A = 0 is singular: no bound-state length scale exists")]
    SingularSecondOrder,

    #[error("state is not normalized: integral of psi^2 = {norm_sq:.6e}")]
    NotNormalized { norm_sq: f64 },

    #[error("no closed-form moment formula for {family} at n = {n}; use quadrature")]
    NoClosedForm { family: &'static str, n: u32 },

    #[error("invalid quadrature spec: {0}")]
    BadQuadratureSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
