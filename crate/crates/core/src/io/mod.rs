//! Run configuration files, output emission and the simulate/verify pipelines.

mod config;
mod emit;
mod pipeline;

use std::path::PathBuf;

use thiserror::Error;

use crate::schemes::SchemeError;
use crate::surface::SurfaceError;

pub use config::{
    build_initial, parse_config, parse_config_str, ComparisonSpec, InitialKind, InitialSpec, RunConfigFile,
    VolumeNormalization,
};
pub use emit::{emit_outputs, OutputFiles, RunMeta, CSV_HEADER};
pub use pipeline::{run_suite, simulate, sphere_radii, Suite, SuiteOutcome};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config file not found: {}", .0.display())]
    FileNotFound(PathBuf),
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: std::io::Error },
    #[error("`{key}`: {reason}")]
    SchemaViolation { key: String, reason: String },
}

impl ConfigError {
    pub(crate) fn schema(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Self::SchemaViolation { key: key.into(), reason: reason.into() }
    }
}

#[derive(Debug, Error)]
#[error("{}: {source}", path.display())]
pub struct IoError {
    pub path: PathBuf,
    pub source: std::io::Error,
}

/// Failure of a configured run.
#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("initial data: {0}")]
    Initial(#[from] SurfaceError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Io(#[from] IoError),
}
