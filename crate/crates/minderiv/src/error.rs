use thiserror::Error;

/// Errors surfaced by fallible library entry points.
///
/// Structural misuse (mixing rings, out-of-range variable indices, length
/// mismatches) panics instead; those are programmer errors, not input errors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown variable `{name}` at byte {position}")]
    UnknownVariable { name: String, position: usize },
    #[error("invalid ring: {detail}")]
    InvalidRing { detail: String },
    #[error("derivation family must not be empty")]
    EmptyFamily,
    #[error("degree bound must be at least {min}, got {got}")]
    DegreeBoundTooSmall { min: u32, got: u32 },
    #[error("exponent m must be at least 1, got {got}")]
    ExponentTooSmall { got: u32 },
    #[error("ring must have at least {needed} variables, got {got}")]
    TooFewVariables { needed: usize, got: usize },
    #[error("truncation order must be at least {min}, got {got}")]
    OrderTooSmall { min: u32, got: u32 },
    #[error("precondition failed: {detail}")]
    Precondition { detail: String },
    #[error("no m <= {m_max} certifies kernel equality at degree bound {degree_bound}")]
    NoMinimalM { m_max: u32, degree_bound: u32 },
    #[error("family folding failed at step {step}: {detail}")]
    FoldFailed { step: usize, detail: String },
    #[error("family member {index} is the zero derivation")]
    ZeroDerivation { index: usize },
    #[error("substitution image for variable {index} has a nonzero constant term")]
    NonzeroConstantTerm { index: usize },
    #[error("parameter system has a singular linear part")]
    SingularLinearPart,
    #[error("coefficient of d/d{variable} is not divisible by {divisor}")]
    NotDivisible { variable: String, divisor: String },
    #[error("cannot classify the zero combination (0, 0)")]
    ZeroCombination,
}

impl Error {
    /// Stable machine-readable code, used by CLI reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "syntax",
            Error::UnknownVariable { .. } => "unknown-variable",
            Error::InvalidRing { .. } => "invalid-ring",
            Error::EmptyFamily => "empty-family",
            Error::DegreeBoundTooSmall { .. } => "degree-bound-too-small",
            Error::ExponentTooSmall { .. } => "exponent-too-small",
            Error::TooFewVariables { .. } => "too-few-variables",
            Error::OrderTooSmall { .. } => "order-too-small",
            Error::Precondition { .. } => "precondition",
            Error::NoMinimalM { .. } => "no-minimal-m",
            Error::FoldFailed { .. } => "fold-failed",
            Error::ZeroDerivation { .. } => "zero-derivation",
            Error::NonzeroConstantTerm { .. } => "nonzero-constant-term",
            Error::SingularLinearPart => "singular-linear-part",
            Error::NotDivisible { .. } => "not-divisible",
            Error::ZeroCombination => "zero-combination",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
