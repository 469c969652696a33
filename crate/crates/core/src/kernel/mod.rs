//! Pointwise Minkowski norm machinery: norms, fundamental and Cartan
//! tensors, the Legendre map and sampled validation.

pub mod error;
pub mod jet;
pub mod linalg;
pub mod norm;
pub mod sampling;
pub mod validate;

pub use error::NormError;
pub use linalg::{Covector, Matrix, Tensor3, Tensor4, Vector, MAX_DIM};
pub use norm::{
    DerivativeMode, FamilyKind, FundamentalTensor, MinkowskiNorm, NormFamily, NormSpec, ZERO_VECTOR_THRESHOLD,
};
pub use validate::{validate_norm, validate_spec, CheckKind, IdentityCheck, ValidationReport};
