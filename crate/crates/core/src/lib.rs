//! Anisotropic mean curvature flow of closed hypersurfaces in Minkowski
//! spaces.

pub mod io;
pub mod kernel;
pub mod schemes;
pub mod surface;
pub mod verify;
