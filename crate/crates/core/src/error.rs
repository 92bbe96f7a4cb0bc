use thiserror::Error;

use crate::torus::TrigVector;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A weight evaluated to something that is not a finite positive number.
    #[error("invalid {variant} function: value at t = {t} is not finite and positive")]
    InvalidFunction { variant: &'static str, t: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    /// A precondition expressed through Matuszewska indices does not hold.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("operator has non-constant coefficients")]
    NonConstantCoefficients,

    #[error("operator is not elliptic: min |det A0| = {min_abs_det:e}")]
    NotElliptic { min_abs_det: f64 },

    /// The right-hand side is not orthogonal to the cokernel.
    #[error("incompatible data: |(f, v)| = {violation:e} for a cokernel vector v")]
    IncompatibleData {
        violation: f64,
        cokernel_vector: Box<TrigVector>,
    },

    /// Index estimation did not settle; `raw` holds `(ln λ, ln M(λ), ln m(λ))`.
    #[error("index estimation failed: {reason}")]
    EstimationFailed {
        reason: String,
        raw: Vec<(f64, f64, f64)>,
    },

    #[error("Galerkin matrix with {rows} rows exceeds the cap of {cap}")]
    MatrixTooLarge { rows: usize, cap: usize },

    #[error("hypothesis not met: {0}")]
    HypothesisUnmet(String),

    #[error("consistency check failed: {0}")]
    Consistency(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
}
