//! Pointwise extrinsic geometry: conormal, inner normal, induced metric,
//! second fundamental form, shape operator, mean curvature, area density.

use crate::kernel::{Covector, Matrix, MinkowskiNorm, Vector};

use super::grid::Frame;
use super::state::{StateData, SurfaceState};
use super::stencil::{periodic_derivatives, sphere_derivatives};
use super::SurfaceError;

#[derive(Clone, Copy, Debug)]
pub struct PointGeometry {
    /// Position, tangents `X_i` and second derivatives `X_ij`.
    pub frame: Frame,
    /// Unnormalized inward conormal.
    pub conormal_raw: Covector,
    /// `F*(conormal_raw)`.
    pub conormal_scale: f64,
    /// Unit conormal with `F*(nu) = 1`.
    pub conormal: Covector,
    /// Inner unit normal `L^{-1}(nu)`.
    pub normal: Vector,
    /// `g(n)` at the normal.
    pub normal_metric: Matrix,
    /// Induced metric `g(n)(X_i, X_j)`.
    pub induced: Matrix,
    pub induced_inv: Matrix,
    /// Second fundamental form `nu(X_ij)`.
    pub second: Matrix,
    /// Shape operator `induced^{-1} second`.
    pub shape: Matrix,
    /// Principal curvatures, ascending; the first `n` entries are used.
    pub curvatures: [f64; 2],
    pub mean_curvature: f64,
    /// `sigma |det[n, X_1, .., X_n]|`.
    pub area_density: f64,
}

#[derive(Clone, Debug)]
pub struct GeometryCache {
    surface_dim: usize,
    /// Quadrature weight per vertex.
    pub cell: f64,
    pub points: Vec<PointGeometry>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Convexity {
    pub k_min: f64,
    pub k_max: f64,
    /// Minimum of `h(v, v) / g(v, v)` over vertices and tangent directions.
    pub theta_min: f64,
}

impl GeometryCache {
    pub fn surface_dim(&self) -> usize {
        self.surface_dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn mean_curvatures(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.mean_curvature).collect()
    }

    pub fn h_min(&self) -> f64 {
        self.points.iter().map(|p| p.mean_curvature).fold(f64::INFINITY, f64::min)
    }

    pub fn h_max(&self) -> f64 {
        self.points.iter().map(|p| p.mean_curvature).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn h_abs_max(&self) -> f64 {
        self.points.iter().map(|p| p.mean_curvature.abs()).fold(0.0, f64::max)
    }

    /// Principal-curvature extremes and the minimum of the ratio
    /// `h(v,v)/g(v,v)`, which equals the smallest eigenvalue of the
    /// self-adjoint shape operator.
    pub fn convexity(&self) -> Convexity {
        let n = self.surface_dim;
        let mut out = Convexity { k_min: f64::INFINITY, k_max: f64::NEG_INFINITY, theta_min: f64::INFINITY };
        for p in &self.points {
            out.k_min = out.k_min.min(p.curvatures[0]);
            out.k_max = out.k_max.max(p.curvatures[n - 1]);
        }
        out.theta_min = out.k_min;
        out
    }

    /// Periodic trapezoidal sum of the area density.
    pub fn area(&self) -> f64 {
        self.points.iter().map(|p| p.area_density).sum::<f64>() * self.cell
    }

    /// `sum H^2 dmu`.
    pub fn h2_integral(&self) -> f64 {
        self.points.iter().map(|p| p.mean_curvature.powi(2) * p.area_density).sum::<f64>() * self.cell
    }
}

/// Geometry of every vertex, with second derivatives of the embedding taken
/// from fourth-order periodic differences.
pub fn compute_geometry(state: &SurfaceState) -> Result<GeometryCache, SurfaceError> {
    let norm = state.norm();
    let n = state.surface_dim();
    match state.data() {
        StateData::Radial { grid, r } => {
            let rd = radial_derivatives(r, grid.surface_dim(), grid.n_theta(), grid.n_phi());
            let mut points = Vec::with_capacity(r.len());
            for (k, z) in grid.frames.iter().enumerate() {
                let (r1, r2) = rd[k];
                let rk = r[k];
                let mut frame = *z;
                frame.x = *state.center() + z.x.scale(rk);
                for i in 0..n {
                    frame.d1[i] = z.x.scale(r1[i]) + z.d1[i].scale(rk);
                    for j in 0..n {
                        frame.d2[i][j] =
                            z.x.scale(r2[i][j]) + z.d1[j].scale(r1[i]) + z.d1[i].scale(r1[j]) + z.d2[i][j].scale(rk);
                    }
                }
                // nu_bar = g(-z)(-r z + r^i z_i) with r^i = gbar^{ij} r_j
                let mut v = z.x.scale(-rk);
                for i in 0..n {
                    let ri: f64 = (0..n).map(|j| grid.gbar_inv[k].get(i, j) * r1[j]).sum();
                    v += z.d1[i].scale(ri);
                }
                let raw = grid.metric[k].lower(&v);
                points.push(point_geometry(norm, frame, raw, Some(&v), n, state.sigma(), k)?);
            }
            Ok(GeometryCache { surface_dim: n, cell: grid.cell(), points })
        }
        StateData::Parametric { points: pts } => {
            let h = std::f64::consts::TAU / pts.len() as f64;
            let xs: Vec<f64> = pts.iter().map(|p| p[0]).collect();
            let ys: Vec<f64> = pts.iter().map(|p| p[1]).collect();
            let dx = periodic_derivatives(&xs, h);
            let dy = periodic_derivatives(&ys, h);
            let mut points = Vec::with_capacity(pts.len());
            for k in 0..pts.len() {
                let zero = Vector::zeros(2);
                let frame = Frame {
                    x: pts[k],
                    d1: [Vector::new2(dx[k].0, dy[k].0), zero],
                    d2: [[Vector::new2(dx[k].1, dy[k].1), zero], [zero; 2]],
                };
                // inward for counter-clockwise order: rotate the tangent by +90 degrees
                let raw = Covector::new2(-dy[k].0, dx[k].0);
                points.push(point_geometry(norm, frame, raw, None, 1, state.sigma(), k)?);
            }
            Ok(GeometryCache { surface_dim: 1, cell: h, points })
        }
    }
}

type RadialDerivs = ([f64; 2], [[f64; 2]; 2]);

fn radial_derivatives(r: &[f64], n: usize, n_theta: usize, n_phi: usize) -> Vec<RadialDerivs> {
    if n == 1 {
        periodic_derivatives(r, std::f64::consts::TAU / n_theta as f64)
            .into_iter()
            .map(|(a, b)| ([a, 0.0], [[b, 0.0], [0.0, 0.0]]))
            .collect()
    } else {
        sphere_derivatives(r, n_theta, n_phi).into_iter().map(|d| (d.d1, d.d2)).collect()
    }
}

fn point_geometry(
    norm: &MinkowskiNorm,
    frame: Frame,
    raw: Covector,
    guess: Option<&Vector>,
    n: usize,
    sigma: f64,
    index: usize,
) -> Result<PointGeometry, SurfaceError> {
    let y = norm.legendre_inv_from(&raw, guess)?;
    let scale = raw.pair(&y) / norm.eval(&y)?;
    let conormal = raw.scale(1.0 / scale);
    let normal = y.scale(1.0 / scale);
    let g = norm.metric(&normal)?;
    let induced = Matrix::from_fn(n, |i, j| g.bilinear(frame.d1[i].as_slice(), frame.d1[j].as_slice()));
    let induced_inv = induced.inverse(1e-14).ok_or(SurfaceError::DegenerateMetric { index })?;
    let second = Matrix::from_fn(n, |i, j| conormal.pair(&frame.d2[i][j]));
    let shape = induced_inv.matmul(&second);
    let mean_curvature = shape.trace();
    let curvatures = if n == 1 {
        [mean_curvature, mean_curvature]
    } else {
        // real spectrum: the shape operator is self-adjoint for the induced metric
        let half = 0.5 * mean_curvature;
        let disc = (half * half - shape.det()).max(0.0).sqrt();
        [half - disc, half + disc]
    };
    let dim = n + 1;
    let cols = |c: usize| if c == 0 { normal } else { frame.d1[c - 1] };
    let det = Matrix::from_fn(dim, |i, c| cols(c)[i]).det();
    Ok(PointGeometry {
        frame,
        conormal_raw: raw,
        conormal_scale: scale,
        conormal,
        normal,
        normal_metric: g,
        induced,
        induced_inv,
        second,
        shape,
        curvatures,
        mean_curvature,
        area_density: sigma * det.abs(),
    })
}
