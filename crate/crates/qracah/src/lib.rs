//! Multivariable q-Racah polynomials and their limit families.
//!
//! The crate evaluates the single- and multivariable systems (q-Racah, the
//! second q-Racah family, dual q-Hahn and its two relatives, q-Hahn,
//! q-Krawtchouk, q-Meixner, q-Charlier and Tratnik's classical Racah system)
//! together with their weights and norms, and certifies the orthogonality
//! relations by summing full Gram matrices over the lattice.
//!
//! Arithmetic is generic over [`scalar::Num`]: `rug::Rational` gives exact
//! results on finite lattices, `rug::Float` handles infinite support and the
//! Gamma-function weights of the classical family.

pub mod families;
pub mod multivar;
pub mod qseries;
pub mod scalar;
pub mod verify;

pub use rug::{Float, Rational};

/// Everything that can go wrong while evaluating or verifying.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands use different backends")]
    BackendMismatch,
    #[error("zero raised to negative power {0}")]
    ZeroToNegativePower(i64),
    #[error("{0} is only available in the float backend")]
    FloatOnly(&'static str),
    #[error("Gamma has a pole at {0}")]
    GammaPole(f64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("vanishing denominator: {0}")]
    ZeroDenominator(String),
    #[error("series does not terminate: {0}")]
    NotTerminating(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("a degree cap is required for infinite-support families")]
    MissingCap,
    #[error("tail does not contract: {0}")]
    NonContracting(String),
    #[error("{context}: {source}")]
    Context { context: String, source: Box<Error> },
}

impl Error {
    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context { context: context.into(), source: Box::new(self) }
    }

    /// The innermost error, with context layers removed.
    pub fn root_cause(&self) -> &Error {
        match self {
            Error::Context { source, .. } => source.root_cause(),
            e => e,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
