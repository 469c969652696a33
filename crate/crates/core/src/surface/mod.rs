//! Discrete closed hypersurfaces and their anisotropic extrinsic geometry.

pub mod geometry;
pub mod grid;
pub mod polyline;
pub mod snapshot;
pub mod state;
pub mod stencil;

use thiserror::Error;

use crate::kernel::NormError;

pub use geometry::{compute_geometry, Convexity, GeometryCache, PointGeometry};
pub use grid::{build_inverse_sphere_grid, DirectionGrid, Frame};
pub use snapshot::Snapshot;
pub use state::{parametric_state, radial_state, RepKind, Shape, StateData, SurfaceState};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SurfaceError {
    #[error("induced metric is numerically singular at vertex {index}")]
    DegenerateMetric { index: usize },
    #[error(transparent)]
    Norm(#[from] NormError),
    #[error("invalid surface state: {0}")]
    InvalidState(String),
}
