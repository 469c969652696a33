//! Explicit Euler steps for the radial-graph and parametric schemes.

use crate::kernel::Vector;
use crate::surface::polyline::{edge_lengths, resample_uniform};
use crate::surface::{GeometryCache, StateData, SurfaceState};

use super::SchemeError;

/// Largest edge-length ratio tolerated on a parametric curve.
pub const MAX_EDGE_RATIO: f64 = 100.0;

/// Lower clamp of the adaptive step.
pub const MIN_DT: f64 = 1e-10;

/// `r <- r - dt F*(nu_bar) H / r` at every direction.
pub fn step_radial(
    state: &SurfaceState,
    cache: &GeometryCache,
    dt: f64,
    r_stop: f64,
) -> Result<SurfaceState, SchemeError> {
    let StateData::Radial { grid, r } = state.data() else {
        return Err(SchemeError::WrongRepresentation);
    };
    let next: Vec<f64> =
        r.iter().zip(&cache.points).map(|(r, p)| r - dt * p.conormal_scale * p.mean_curvature / r).collect();
    let r_min = next.iter().copied().fold(f64::INFINITY, f64::min);
    if !(r_min > r_stop) {
        return Err(SchemeError::Collapse { r_min });
    }
    Ok(state.advanced(state.time() + dt, StateData::Radial { grid: grid.clone(), r: next }))
}

/// `phi <- phi + dt H n`, followed by uniform-arclength resampling when
/// `redistribute` is set.
pub fn step_parametric(
    state: &SurfaceState,
    cache: &GeometryCache,
    dt: f64,
    redistribute: bool,
) -> Result<SurfaceState, SchemeError> {
    let StateData::Parametric { points } = state.data() else {
        return Err(SchemeError::WrongRepresentation);
    };
    let moved: Vec<Vector> =
        points.iter().zip(&cache.points).map(|(x, p)| *x + p.normal.scale(dt * p.mean_curvature)).collect();
    check_mesh(&moved)?;
    let next = if redistribute { resample_uniform(&moved, moved.len()) } else { moved };
    if redistribute {
        check_mesh(&next)?;
    }
    Ok(state.advanced(state.time() + dt, StateData::Parametric { points: next }))
}

fn check_mesh(points: &[Vector]) -> Result<(), SchemeError> {
    let e = edge_lengths(points);
    let min = e.iter().copied().fold(f64::INFINITY, f64::min);
    let max = e.iter().copied().fold(0.0, f64::max);
    if !(min >= crate::surface::state::MIN_EDGE) || max / min > MAX_EDGE_RATIO {
        return Err(SchemeError::MeshDegenerate { min_edge: min, ratio: max / min });
    }
    Ok(())
}

/// Smallest edge length measured in the induced metric,
/// `min sqrt(g_ii) dtheta_i`. The linearized flow diffuses with coefficient
/// `g^{ii}`, so this is the scale that limits explicit steps; for the
/// Euclidean norm it is the Euclidean edge length.
pub fn min_spatial_scale(state: &SurfaceState, cache: &GeometryCache) -> f64 {
    let steps = match state.data() {
        StateData::Radial { grid, .. } => [grid.theta_step(), grid.phi_step()],
        StateData::Parametric { points } => [std::f64::consts::TAU / points.len() as f64; 2],
    };
    let n = cache.surface_dim();
    cache
        .points
        .iter()
        .flat_map(|p| (0..n).map(move |i| p.induced.get(i, i).sqrt() * steps[i]))
        .fold(f64::INFINITY, f64::min)
}

/// `cfl s^2 / (1 + max|H| s)` clamped to `[MIN_DT, remaining]`.
pub fn adaptive_dt(state: &SurfaceState, cache: &GeometryCache, cfl: f64, remaining: f64) -> f64 {
    let s = min_spatial_scale(state, cache);
    let dt = cfl * s * s / (1.0 + cache.h_abs_max() * s);
    dt.max(MIN_DT).min(remaining)
}
