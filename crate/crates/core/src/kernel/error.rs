use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NormError {
    #[error("input vector is zero (Euclidean length <= 1e-14)")]
    ZeroVector,
    #[error("invalid norm parameter `{field}`: {reason}")]
    InvalidParams { field: &'static str, reason: String },
    #[error("fundamental tensor is not positive definite")]
    NotPositiveDefinite,
    #[error("Legendre inversion did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("dimension mismatch: norm has dim {expected}, input has {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

impl NormError {
    pub(crate) fn invalid(field: &'static str, reason: &str) -> Self {
        Self::InvalidParams { field, reason: reason.to_string() }
    }
}
