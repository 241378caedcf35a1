use thiserror::Error;

/// Errors raised by the solvers and kernels.
///
/// Complex payloads are rendered as `(re, im)` in `f64` so the type stays
/// independent of the scalar parameter.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OrfError {
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    #[error("leading principal minor {0} is singular")]
    StronglySingular(usize),
    #[error("matrix is not positive definite (pivot {0})")]
    NotPositiveDefinite(usize),
    #[error("matrix is singular within pivot tolerance")]
    Singular,
    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeError { expected: String, found: String },
    #[error("pole {pole:?} coincides with node {node:?}")]
    PoleCollidesWithNode { pole: (f64, f64), node: (f64, f64) },
    #[error("breakdown at step {step}")]
    Breakdown { step: usize },
    #[error("node {0} duplicates an existing node")]
    DuplicateNode(usize),
    #[error("weight {0} is zero or not finite")]
    InvalidWeight(usize),
    #[error("pole could not be installed: trailing pivot vanishes")]
    PoleInstallFailure,
    #[error("evaluation system singular at z = {0:?}")]
    EvaluationSingular((f64, f64)),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Result alias used across the crate.
pub type Result<T> = std::result::Result<T, OrfError>;

pub(crate) fn pair<T: crate::Real>(z: num_complex::Complex<T>) -> (f64, f64) {
    (
        z.re.to_f64().unwrap_or(f64::NAN),
        z.im.to_f64().unwrap_or(f64::NAN),
    )
}
