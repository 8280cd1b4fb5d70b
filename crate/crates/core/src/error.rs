//! Error types shared across the crate.

use thiserror::Error;

/// Reason a Rosinski measure fails the Levy-measure conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// The stability index is out of range (`alpha >= 2`).
    AlphaRange,
    /// `int_{|x|<=1} |x|^2 R(dx)` diverges on the given ray.
    OriginSquareIntegral { ray: usize },
    /// `int_{|x|>1} |x|^alpha R(dx)` diverges on the given ray (`alpha` in (0,2)).
    TailAlphaIntegral { ray: usize },
    /// `int_{|x|>1} (1 + log|x|) R(dx)` diverges on the given ray (`alpha = 0`).
    TailLogIntegral { ray: usize },
    /// `R(|x|>1)` diverges on the given ray (`alpha < 0`).
    TailMassIntegral { ray: usize },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::AlphaRange => write!(f, "alpha-range"),
            Violation::OriginSquareIntegral { ray } => {
                write!(f, "origin-square-integral (ray {ray})")
            }
            Violation::TailAlphaIntegral { ray } => write!(f, "tail-alpha-integral (ray {ray})"),
            Violation::TailLogIntegral { ray } => write!(f, "tail-log-integral (ray {ray})"),
            Violation::TailMassIntegral { ray } => write!(f, "tail-mass-integral (ray {ray})"),
        }
    }
}

#[derive(Debug, Error)]
pub enum TsError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid Rosinski measure: {}", format_violations(.0))]
    InvalidMeasure(Vec<Violation>),
    #[error("measure is not proper: int |x|^alpha R(dx) diverges")]
    NotProper,
    #[error("moment of order {order} is infinite for this measure")]
    MomentInfinite { order: f64 },
    #[error("unsupported parameter combination: {0}")]
    UnsupportedParameter(String),
    #[error("parameter mismatch: {0}")]
    ParameterMismatch(String),
    #[error("unknown direction: {0}")]
    UnknownDirection(String),
    #[error("truncated jump intensity is zero at epsilon = {epsilon}")]
    ZeroTail { epsilon: f64 },
    #[error("insufficient samples: need more than {needed}, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
    #[error("degenerate sample: {0}")]
    DegenerateSample(String),
    #[error("input function is not monotone near t = {at}")]
    NonMonotone { at: f64 },
    #[error("regular-variation index {index} outside the admissible range {range}")]
    IndexOutOfRange { index: f64, range: String },
    #[error("measure construction error: {0}")]
    Construction(String),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

pub type Result<T> = std::result::Result<T, TsError>;
