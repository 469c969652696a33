//! Time integration of the flow: radial graph, parametric curve and level
//! set schemes with adaptive explicit Euler steps.

pub mod config;
pub mod levelset;
pub mod run;
pub mod step;

use thiserror::Error;

use crate::kernel::NormError;
use crate::surface::SurfaceError;

pub use config::{ConfigIssue, FlowConfig, LevelSetConfig, Scheme};
pub use levelset::{step_levelset, LevelSetGrid};
pub use run::{run, DiagnosticsRow, RunRecord, StopReason};
pub use step::{adaptive_dt, step_parametric, step_radial};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SchemeError {
    #[error("radial value {r_min} fell to the collapse threshold")]
    Collapse { r_min: f64 },
    #[error("mesh degenerate: min edge {min_edge:e}, edge ratio {ratio}")]
    MeshDegenerate { min_edge: f64, ratio: f64 },
    #[error("level-set gradient degenerate: min |grad u| = {min_gradient} in the band")]
    GradientDegenerate { min_gradient: f64 },
    #[error("invalid level-set grid: {0}")]
    InvalidGrid(String),
    #[error("zero-set extraction failed: {0}")]
    ExtractionFailed(String),
    #[error("state representation does not match the scheme")]
    WrongRepresentation,
    #[error("invalid flow configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

impl From<NormError> for SchemeError {
    fn from(e: NormError) -> Self {
        SchemeError::Surface(SurfaceError::Norm(e))
    }
}
