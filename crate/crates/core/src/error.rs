use alloc::string::String;

/// Errors raised by the numerical routines and domain-type validators.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("trace {found} differs from expected {expected}")]
    TraceMismatch { expected: f64, found: f64 },
    #[error("effect {index} is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    EffectNotPsd { index: usize, min_eigenvalue: f64 },
    #[error("effect {index} exceeds the identity (max eigenvalue {max_eigenvalue})")]
    EffectExceedsIdentity { index: usize, max_eigenvalue: f64 },
    #[error("POVM effects do not sum to the identity (completeness residual {residual:e})")]
    PovmIncomplete { residual: f64 },
    #[error("map is not trace preserving (residual {residual:e})")]
    NotTracePreserving { residual: f64 },
    #[error(
        "second marginal of the process state differs from the identity (residual {residual:e})"
    )]
    MarginalMismatch { residual: f64 },
    #[error("matrix is not unitary (residual {residual:e})")]
    NotUnitary { residual: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("weights sum to {sum}, expected 1")]
    WeightSum { sum: f64 },
    #[error("couple {index} has zero weight")]
    ZeroWeight { index: usize },
    #[error("effect sum is not of the form sigma (x) I (residual {residual:e})")]
    NotProductNormalization { residual: f64 },
    #[error("normalization state is not a density operator: {reason}")]
    NormStateInvalid { reason: String },
    #[error("support of effect {index} leaves the support of the normalization state (residual {residual:e})")]
    SupportViolation { index: usize, residual: f64 },
    #[error("zero is not in the convex hull of the phases")]
    NoHull,
    #[error("channels are not perfectly discriminable with a single use")]
    NotPerfectlyDiscriminable,
    #[error("channels are identical; no number of copies discriminates them")]
    AlwaysIndistinguishable,
    #[error("number of shots must be positive")]
    ZeroShots,
    #[error("outcome probabilities sum to {sum}, expected 1")]
    ProbabilitySum { sum: f64 },
    #[error("eigensolver failed to converge")]
    NoConvergence,
}

pub type Result<T> = core::result::Result<T, Error>;
