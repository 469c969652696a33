//! Discrete closed hypersurfaces: radial graphs over a direction grid and
//! parametric closed curves.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::kernel::{MinkowskiNorm, Vector};

use super::grid::{build_inverse_sphere_grid, DirectionGrid};
use super::polyline::{edge_lengths, ray_hit, signed_area};
use super::SurfaceError;

/// Smallest admissible edge length of a parametric curve.
pub const MIN_EDGE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RepKind {
    RadialGraph,
    ParametricCurve,
    LevelSet,
}

#[derive(Clone, Debug)]
pub enum StateData {
    /// `X_k = x0 + r_k z_k`.
    Radial { grid: Arc<DirectionGrid>, r: Vec<f64> },
    /// Counter-clockwise closed polyline in the plane.
    Parametric { points: Vec<Vector> },
}

#[derive(Clone, Debug)]
pub struct SurfaceState {
    norm: MinkowskiNorm,
    center: Vector,
    t: f64,
    generation: u64,
    sigma: f64,
    data: StateData,
}

impl SurfaceState {
    pub fn radial(
        norm: MinkowskiNorm,
        center: Vector,
        grid: Arc<DirectionGrid>,
        r: Vec<f64>,
    ) -> Result<Self, SurfaceError> {
        if center.dim() != norm.dim() {
            return Err(SurfaceError::InvalidState("center dimension differs from the norm".into()));
        }
        if r.len() != grid.len() {
            return Err(SurfaceError::InvalidState(format!(
                "{} radial values for a grid of {} directions",
                r.len(),
                grid.len()
            )));
        }
        if let Some(k) = r.iter().position(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(SurfaceError::InvalidState(format!("radial value {k} is not positive")));
        }
        Ok(Self { norm, center, t: 0.0, generation: 0, sigma: 1.0, data: StateData::Radial { grid, r } })
    }

    /// Builds a planar curve; clockwise input is reversed.
    pub fn parametric(norm: MinkowskiNorm, center: Vector, mut points: Vec<Vector>) -> Result<Self, SurfaceError> {
        if norm.dim() != 2 || center.dim() != 2 {
            return Err(SurfaceError::InvalidState("parametric states are planar curves".into()));
        }
        if points.len() < 8 {
            return Err(SurfaceError::InvalidState("a closed curve needs at least 8 points".into()));
        }
        if points.iter().any(|p| p.dim() != 2 || !p[0].is_finite() || !p[1].is_finite()) {
            return Err(SurfaceError::InvalidState("points must be finite planar coordinates".into()));
        }
        let min_edge = edge_lengths(&points).into_iter().fold(f64::INFINITY, f64::min);
        if min_edge < MIN_EDGE {
            return Err(SurfaceError::InvalidState(format!("edge of length {min_edge:e} below {MIN_EDGE:e}")));
        }
        if signed_area(&points) < 0.0 {
            points.reverse();
        }
        Ok(Self { norm, center, t: 0.0, generation: 0, sigma: 1.0, data: StateData::Parametric { points } })
    }

    pub fn norm(&self) -> &MinkowskiNorm {
        &self.norm
    }

    pub fn center(&self) -> &Vector {
        &self.center
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    /// Volume normalization factor of the area density.
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn with_time(mut self, t: f64) -> Self {
        self.t = t;
        self
    }

    pub fn data(&self) -> &StateData {
        &self.data
    }

    pub fn kind(&self) -> RepKind {
        match self.data {
            StateData::Radial { .. } => RepKind::RadialGraph,
            StateData::Parametric { .. } => RepKind::ParametricCurve,
        }
    }

    /// Hypersurface dimension `n`.
    pub fn surface_dim(&self) -> usize {
        self.norm.dim() - 1
    }

    pub fn len(&self) -> usize {
        match &self.data {
            StateData::Radial { r, .. } => r.len(),
            StateData::Parametric { points } => points.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn radii(&self) -> Option<&[f64]> {
        match &self.data {
            StateData::Radial { r, .. } => Some(r),
            StateData::Parametric { .. } => None,
        }
    }

    pub fn grid(&self) -> Option<&Arc<DirectionGrid>> {
        match &self.data {
            StateData::Radial { grid, .. } => Some(grid),
            StateData::Parametric { .. } => None,
        }
    }

    /// Embedded positions of the vertices.
    pub fn positions(&self) -> Vec<Vector> {
        match &self.data {
            StateData::Radial { grid, r } => {
                grid.frames.iter().zip(r).map(|(f, r)| self.center + f.x.scale(*r)).collect()
            }
            StateData::Parametric { points } => points.clone(),
        }
    }

    /// Successor state with new values at time `t`.
    pub fn advanced(&self, t: f64, data: StateData) -> Self {
        Self { norm: self.norm, center: self.center, t, generation: self.generation + 1, sigma: self.sigma, data }
    }

    /// `(min, max)` of `F(-(X_k - x0))` over the vertices.
    pub fn radial_extremes(&self) -> (f64, f64) {
        match &self.data {
            StateData::Radial { r, .. } => min_max(r.iter().copied()),
            StateData::Parametric { points } => min_max(points.iter().map(|p| {
                let d = self.center - *p;
                self.norm.eval(&d).unwrap_or(0.0)
            })),
        }
    }
}

pub(crate) fn min_max(it: impl Iterator<Item = f64>) -> (f64, f64) {
    it.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)))
}

/// Closed-form initial shapes.
#[derive(Clone, Debug, PartialEq)]
pub enum Shape {
    /// Euclidean circle or sphere.
    Circle { radius: f64 },
    /// Axis-aligned ellipse or ellipsoid.
    Ellipse { semi_axes: Vec<f64> },
    /// Wulff shape `{F(-(x - x0)) = radius}`.
    Wulff { radius: f64 },
    /// Radial-graph values on the direction grid.
    RadialValues { values: Vec<f64> },
    /// Closed planar polygon.
    Points { points: Vec<Vector> },
}

impl Shape {
    /// Euclidean distance from the center to the shape along unit `u`.
    fn reach(&self, norm: &MinkowskiNorm, center: &Vector, u: &Vector) -> Result<f64, SurfaceError> {
        match self {
            Shape::Circle { radius } => Ok(*radius),
            Shape::Ellipse { semi_axes } => {
                if semi_axes.len() != u.dim() {
                    return Err(SurfaceError::InvalidState("semi_axes length must equal the dimension".into()));
                }
                let s: f64 = semi_axes.iter().zip(u.as_slice()).map(|(a, c)| (c / a).powi(2)).sum();
                Ok(1.0 / s.sqrt())
            }
            Shape::Wulff { radius } => Ok(radius / norm.eval(&(-*u))?),
            Shape::Points { points } => ray_hit(center, u, points)
                .ok_or_else(|| SurfaceError::InvalidState("polygon is not star-shaped about the center".into())),
            Shape::RadialValues { .. } => unreachable!("handled by the caller"),
        }
    }

    fn validate(&self) -> Result<(), SurfaceError> {
        let bad = |what: &str| Err(SurfaceError::InvalidState(format!("{what} must be positive")));
        match self {
            Shape::Circle { radius } | Shape::Wulff { radius } if !(*radius > 0.0) => bad("radius"),
            Shape::Ellipse { semi_axes } if semi_axes.iter().any(|a| !(*a > 0.0)) => bad("semi_axes"),
            _ => Ok(()),
        }
    }
}

/// Radial graph of `shape` over an `n_theta` (by `n_phi`) direction grid.
pub fn radial_state(
    norm: MinkowskiNorm,
    center: Vector,
    shape: &Shape,
    n_theta: usize,
    n_phi: usize,
) -> Result<SurfaceState, SurfaceError> {
    shape.validate()?;
    let grid = Arc::new(build_inverse_sphere_grid(&norm, n_theta, n_phi)?);
    let r = match shape {
        Shape::RadialValues { values } => values.clone(),
        _ => (0..grid.len())
            .map(|k| {
                let u = grid.unit(k);
                // X = x0 + r rho u, so r = reach / rho
                Ok(shape.reach(&norm, &center, &u)? / grid.rho[k])
            })
            .collect::<Result<_, SurfaceError>>()?,
    };
    SurfaceState::radial(norm, center, grid, r)
}

/// Parametric curve sampling `shape` at `n` uniform angles.
pub fn parametric_state(
    norm: MinkowskiNorm,
    center: Vector,
    shape: &Shape,
    n: usize,
) -> Result<SurfaceState, SurfaceError> {
    shape.validate()?;
    if norm.dim() != 2 {
        return Err(SurfaceError::InvalidState("parametric states are planar curves".into()));
    }
    let points = match shape {
        Shape::Points { points } => points.clone(),
        Shape::Ellipse { semi_axes } if semi_axes.len() == 2 => (0..n)
            .map(|k| {
                let t = std::f64::consts::TAU * k as f64 / n as f64;
                center + Vector::new2(semi_axes[0] * t.cos(), semi_axes[1] * t.sin())
            })
            .collect(),
        Shape::RadialValues { values } => {
            let grid = build_inverse_sphere_grid(&norm, values.len(), 1)?;
            grid.frames.iter().zip(values).map(|(f, r)| center + f.x.scale(*r)).collect()
        }
        _ => {
            let grid = build_inverse_sphere_grid(&norm, n, 1)?;
            (0..n)
                .map(|k| {
                    let u = grid.unit(k);
                    Ok(center + u.scale(shape.reach(&norm, &center, &u)?))
                })
                .collect::<Result<_, SurfaceError>>()?
        }
    };
    SurfaceState::parametric(norm, center, points)
}
