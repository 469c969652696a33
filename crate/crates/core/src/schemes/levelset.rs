//! Level-set scheme on a Cartesian grid.
//!
//! The field `u` is positive inside the curve, so `V = L^{-1}(du)` is the
//! inner normal direction and the zero set moves by the inner-normal flow.
//! With `J = dV` by central differences the update is
//! `u_t = tr J - g_V(J V, V) / F(V)^2`, and `g_V(J V, V) = <du, J V>`,
//! `F(V)^2 = <du, V>` because `L(V) = du`.

use crate::kernel::{Covector, MinkowskiNorm, NormFamily, Vector};
use crate::surface::polyline::{ray_segment, signed_distance};

use super::SchemeError;

/// Band half-width, in cells, used for the gradient health checks.
const BAND_CELLS: f64 = 3.0;
/// Rim width, in cells, that must stay outside the curve.
pub const MARGIN_CELLS: usize = 5;
/// Rays used to read the zero set.
pub const EXTRACTION_RAYS: usize = 360;

#[derive(Clone, Debug)]
pub struct LevelSetGrid {
    norm: MinkowskiNorm,
    nx: usize,
    ny: usize,
    dx: f64,
    origin: [f64; 2],
    /// Nodal values, row-major `u[j * nx + i]`.
    pub u: Vec<f64>,
    grad: Vec<[f64; 2]>,
    flux: Vec<[f64; 2]>,
    scratch: Vec<f64>,
    t: f64,
}

impl LevelSetGrid {
    /// Euclidean signed distance to a closed polygon over `bounds`.
    pub fn from_polygon(norm: MinkowskiNorm, poly: &[Vector], bounds: [f64; 4], dx: f64) -> Result<Self, SchemeError> {
        if norm.dim() != 2 {
            return Err(SchemeError::InvalidGrid("level sets are planar".into()));
        }
        let nx = ((bounds[1] - bounds[0]) / dx).round() as usize + 1;
        let ny = ((bounds[3] - bounds[2]) / dx).round() as usize + 1;
        if nx < 2 * MARGIN_CELLS + 3 || ny < 2 * MARGIN_CELLS + 3 {
            return Err(SchemeError::InvalidGrid("box is too small for the grid spacing".into()));
        }
        let origin = [bounds[0], bounds[2]];
        let mut u = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                let p = Vector::new2(origin[0] + i as f64 * dx, origin[1] + j as f64 * dx);
                u.push(signed_distance(&p, poly));
            }
        }
        let grid = Self {
            norm,
            nx,
            ny,
            dx,
            origin,
            u,
            grad: vec![[0.0; 2]; nx * ny],
            flux: vec![[0.0; 2]; nx * ny],
            scratch: Vec::new(),
            t: 0.0,
        };
        grid.check_margin()?;
        Ok(grid)
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn node(&self, i: usize, j: usize) -> Vector {
        Vector::new2(self.origin[0] + i as f64 * self.dx, self.origin[1] + j as f64 * self.dx)
    }

    fn check_margin(&self) -> Result<(), SchemeError> {
        let (nx, ny, m) = (self.nx, self.ny, MARGIN_CELLS);
        let outside = |i: usize, j: usize| self.u[j * nx + i] < 0.0;
        for j in 0..ny {
            let full_row = j < m || j + m >= ny;
            let ok =
                if full_row { (0..nx).all(|i| outside(i, j)) } else { (0..m).chain(nx - m..nx).all(|i| outside(i, j)) };
            if !ok {
                return Err(SchemeError::InvalidGrid(format!("zero set within {m} cells of the box boundary")));
            }
        }
        Ok(())
    }

    /// Smallest Euclidean `|du|` (central differences) among interior nodes
    /// with `|u| < 3 dx`.
    pub fn band_min_gradient(&self) -> f64 {
        let (nx, ny) = (self.nx, self.ny);
        let band = BAND_CELLS * self.dx;
        let inv2h = 0.5 / self.dx;
        let mut m = f64::INFINITY;
        for j in 1..ny - 1 {
            for i in 1..nx - 1 {
                let k = j * nx + i;
                if self.u[k].abs() < band {
                    let gx = (self.u[k + 1] - self.u[k - 1]) * inv2h;
                    let gy = (self.u[k + nx] - self.u[k - nx]) * inv2h;
                    m = m.min((gx * gx + gy * gy).sqrt());
                }
            }
        }
        m
    }

    /// One explicit Euler step of length `dt`. Nodes within two cells of the
    /// box boundary are held fixed; the margin check keeps them far outside
    /// the zero set.
    pub fn step(&mut self, dt: f64) -> Result<(), SchemeError> {
        let euclid = matches!(self.norm.family(), NormFamily::Euclidean);
        let (nx, ny) = (self.nx, self.ny);
        let inv2h = 0.5 / self.dx;
        for j in 1..ny - 1 {
            for i in 1..nx - 1 {
                let k = j * nx + i;
                let du = [(self.u[k + 1] - self.u[k - 1]) * inv2h, (self.u[k + nx] - self.u[k - nx]) * inv2h];
                self.grad[k] = du;
                let len = (du[0] * du[0] + du[1] * du[1]).sqrt();
                self.flux[k] = if len <= 1e-12 {
                    [0.0; 2]
                } else if euclid {
                    du
                } else {
                    let prev = Vector::new2(self.flux[k][0], self.flux[k][1]);
                    let guess = (prev.euclidean_norm() > 0.0).then_some(&prev);
                    let v = self.norm.legendre_inv_from(&Covector::new2(du[0], du[1]), guess)?;
                    [v[0], v[1]]
                };
            }
        }
        let mut next = std::mem::take(&mut self.scratch);
        next.clone_from(&self.u);
        for j in 2..ny - 2 {
            for i in 2..nx - 2 {
                let k = j * nx + i;
                let v = self.flux[k];
                let du = self.grad[k];
                let fv2 = du[0] * v[0] + du[1] * v[1];
                if fv2 <= 1e-24 {
                    continue;
                }
                let (e, w, n, s) = (self.flux[k + 1], self.flux[k - 1], self.flux[k + nx], self.flux[k - nx]);
                // jac[a][b] = d V^a / d x^b
                let jac =
                    [[(e[0] - w[0]) * inv2h, (n[0] - s[0]) * inv2h], [(e[1] - w[1]) * inv2h, (n[1] - s[1]) * inv2h]];
                let jv = [jac[0][0] * v[0] + jac[0][1] * v[1], jac[1][0] * v[0] + jac[1][1] * v[1]];
                let rate = jac[0][0] + jac[1][1] - (du[0] * jv[0] + du[1] * jv[1]) / fv2;
                next[k] += dt * rate;
            }
        }
        self.scratch = std::mem::replace(&mut self.u, next);
        self.t += dt;
        Ok(())
    }

    /// `iters` sweeps of `u_tau = S(u0) (1 - |grad u|)` with Godunov upwinding.
    pub fn reinitialize(&mut self, iters: usize) {
        let u0 = self.u.clone();
        let h = self.dx;
        let tau = 0.5 * h;
        for _ in 0..iters {
            let cur = self.u.clone();
            let at = |i: isize, j: isize| {
                let i = i.clamp(0, self.nx as isize - 1) as usize;
                let j = j.clamp(0, self.ny as isize - 1) as usize;
                cur[j * self.nx + i]
            };
            for j in 0..self.ny as isize {
                for i in 0..self.nx as isize {
                    let k = j as usize * self.nx + i as usize;
                    let c = cur[k];
                    let a = (c - at(i - 1, j)) / h;
                    let b = (at(i + 1, j) - c) / h;
                    let cm = (c - at(i, j - 1)) / h;
                    let dp = (at(i, j + 1) - c) / h;
                    let s0 = u0[k];
                    let grad = if s0 > 0.0 {
                        (a.max(0.0).powi(2).max(b.min(0.0).powi(2)) + cm.max(0.0).powi(2).max(dp.min(0.0).powi(2)))
                            .sqrt()
                    } else {
                        (a.min(0.0).powi(2).max(b.max(0.0).powi(2)) + cm.min(0.0).powi(2).max(dp.max(0.0).powi(2)))
                            .sqrt()
                    };
                    let sign = s0 / (s0 * s0 + h * h).sqrt();
                    self.u[k] = c - tau * sign * (grad - 1.0);
                }
            }
        }
    }

    /// Marching-squares segments of the zero set.
    pub fn zero_segments(&self) -> Vec<[Vector; 2]> {
        let mut segs = Vec::new();
        let lerp = |p: Vector, q: Vector, a: f64, b: f64| p + (q - p).scale(a / (a - b));
        for j in 0..self.ny - 1 {
            for i in 0..self.nx - 1 {
                let vals = [
                    self.u[j * self.nx + i],
                    self.u[j * self.nx + i + 1],
                    self.u[(j + 1) * self.nx + i + 1],
                    self.u[(j + 1) * self.nx + i],
                ];
                let inside = vals.iter().filter(|v| **v >= 0.0).count();
                if inside == 0 || inside == 4 {
                    continue;
                }
                let c = [
                    (self.node(i, j), self.u[j * self.nx + i]),
                    (self.node(i + 1, j), self.u[j * self.nx + i + 1]),
                    (self.node(i + 1, j + 1), self.u[(j + 1) * self.nx + i + 1]),
                    (self.node(i, j + 1), self.u[(j + 1) * self.nx + i]),
                ];
                let mut cuts = [(0usize, Vector::zeros(2)); 4];
                let mut m = 0;
                for e in 0..4 {
                    let (p, a) = c[e];
                    let (q, b) = c[(e + 1) % 4];
                    if (a >= 0.0) != (b >= 0.0) {
                        cuts[m] = (e, lerp(p, q, a, b));
                        m += 1;
                    }
                }
                match m {
                    2 => segs.push([cuts[0].1, cuts[1].1]),
                    4 => {
                        // saddle: pair edges according to the sign of the cell mean
                        let mean = c.iter().map(|x| x.1).sum::<f64>() / 4.0;
                        let corner0_inside = c[0].1 >= 0.0;
                        if (mean >= 0.0) == corner0_inside {
                            segs.push([cuts[0].1, cuts[1].1]);
                            segs.push([cuts[2].1, cuts[3].1]);
                        } else {
                            segs.push([cuts[3].1, cuts[0].1]);
                            segs.push([cuts[1].1, cuts[2].1]);
                        }
                    }
                    _ => {}
                }
            }
        }
        segs
    }

    /// Zero set read along equally spaced rays from the segment centroid,
    /// returned counter-clockwise.
    pub fn extract(&self) -> Result<Vec<Vector>, SchemeError> {
        let segs = self.zero_segments();
        if segs.is_empty() {
            return Err(SchemeError::ExtractionFailed("empty zero set".into()));
        }
        let mut c = Vector::zeros(2);
        let mut total = 0.0;
        for [a, b] in &segs {
            let len = (*b - *a).euclidean_norm();
            c += (*a + *b).scale(0.5 * len);
            total += len;
        }
        let c = c.scale(1.0 / total);
        let n = EXTRACTION_RAYS;
        let step = std::f64::consts::TAU / n as f64;
        let mut hits = vec![f64::NEG_INFINITY; n];
        for [a, b] in &segs {
            let ta = (a[1] - c[1]).atan2(a[0] - c[0]);
            let tb = (b[1] - c[1]).atan2(b[0] - c[0]);
            let span = (tb - ta + std::f64::consts::PI).rem_euclid(std::f64::consts::TAU) - std::f64::consts::PI;
            let (lo, hi) = if span >= 0.0 { (ta, ta + span) } else { (ta + span, ta) };
            // one extra ray per side absorbs rounding in the angle bounds
            let first = (lo / step).ceil() as i64 - 1;
            let last = (hi / step).floor() as i64 + 1;
            for m in first..=last {
                let k = m.rem_euclid(n as i64) as usize;
                let th = k as f64 * step;
                let dir = Vector::new2(th.cos(), th.sin());
                if let Some(s) = ray_segment(&c, &dir, a, b) {
                    hits[k] = hits[k].max(s);
                }
            }
        }
        hits.iter()
            .enumerate()
            .map(|(k, s)| {
                if s.is_finite() {
                    let th = k as f64 * step;
                    Ok(c + Vector::new2(th.cos(), th.sin()).scale(*s))
                } else {
                    Err(SchemeError::ExtractionFailed(format!("ray {k} misses the zero set")))
                }
            })
            .collect()
    }
}

/// Step with the configured reinitialization policy: every `every` steps,
/// or whenever the band gradient drops below 0.5.
pub fn step_levelset(
    grid: &mut LevelSetGrid,
    dt: f64,
    step_index: u64,
    every: u64,
    iters: usize,
) -> Result<(), SchemeError> {
    grid.step(dt)?;
    let due = (step_index + 1) % every == 0;
    if due || grid.band_min_gradient() < 0.5 {
        grid.reinitialize(iters);
        let g = grid.band_min_gradient();
        if g < 0.1 {
            return Err(SchemeError::GradientDegenerate { min_gradient: g });
        }
    }
    grid.check_margin()
}
