//! Direction grids on the unit inverse Minkowski sphere `{F(-z) = 1}`.

use crate::kernel::{Matrix, MinkowskiNorm, NormError, Vector};

use super::SurfaceError;

/// Embedding samples of a parametrized surface: position, first and second
/// parameter derivatives. Only the first `n` slots are meaningful.
#[derive(Clone, Copy, Debug)]
pub struct Frame {
    pub x: Vector,
    pub d1: [Vector; 2],
    pub d2: [[Vector; 2]; 2],
}

impl Frame {
    fn zeros(dim: usize) -> Self {
        let z = Vector::zeros(dim);
        Self { x: z, d1: [z; 2], d2: [[z; 2]; 2] }
    }
}

/// Directions `z = rho(u) u` with `rho = 1 / F(-u)` over a periodic angle
/// grid (curves) or a latitude-longitude grid without poles (surfaces).
#[derive(Clone, Debug)]
pub struct DirectionGrid {
    surface_dim: usize,
    n_theta: usize,
    n_phi: usize,
    /// `z`, `z_i`, `z_ij` at each node, derivatives in closed form.
    pub frames: Vec<Frame>,
    /// `rho(u)` at each node.
    pub rho: Vec<f64>,
    /// `g(-z)` at each node.
    pub metric: Vec<Matrix>,
    /// Inverse of the direction-grid metric `g(-z)(z_i, z_j)`.
    pub gbar_inv: Vec<Matrix>,
}

impl DirectionGrid {
    pub fn surface_dim(&self) -> usize {
        self.surface_dim
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn theta_step(&self) -> f64 {
        std::f64::consts::TAU / self.n_theta as f64
    }

    pub fn phi_step(&self) -> f64 {
        std::f64::consts::PI / self.n_phi as f64
    }

    /// Quadrature weight of one node.
    pub fn cell(&self) -> f64 {
        match self.surface_dim {
            1 => self.theta_step(),
            _ => self.theta_step() * self.phi_step(),
        }
    }

    /// Euclidean unit direction `u` at node `k`.
    pub fn unit(&self, k: usize) -> Vector {
        self.frames[k].x.scale(1.0 / self.rho[k])
    }

    /// Grid angles `(theta, phi)` of node `k`; `phi` is zero for curves.
    pub fn angles(&self, k: usize) -> (f64, f64) {
        let i = k % self.n_theta;
        let j = k / self.n_theta;
        let th = i as f64 * self.theta_step();
        let ph = if self.surface_dim == 1 { 0.0 } else { (j as f64 + 0.5) * self.phi_step() };
        (th, ph)
    }
}

/// Unit-sphere parametrization and its derivatives at `(theta, phi)`.
fn unit_frame(surface_dim: usize, th: f64, ph: f64) -> Frame {
    let (st, ct) = th.sin_cos();
    if surface_dim == 1 {
        let mut f = Frame::zeros(2);
        f.x = Vector::new2(ct, st);
        f.d1[0] = Vector::new2(-st, ct);
        f.d2[0][0] = Vector::new2(-ct, -st);
        return f;
    }
    let (sp, cp) = ph.sin_cos();
    let mut f = Frame::zeros(3);
    f.x = Vector::new3(sp * ct, sp * st, cp);
    f.d1[0] = Vector::new3(-sp * st, sp * ct, 0.0);
    f.d1[1] = Vector::new3(cp * ct, cp * st, -sp);
    f.d2[0][0] = Vector::new3(-sp * ct, -sp * st, 0.0);
    f.d2[0][1] = Vector::new3(-cp * st, cp * ct, 0.0);
    f.d2[1][0] = f.d2[0][1];
    f.d2[1][1] = Vector::new3(-sp * ct, -sp * st, -cp);
    f
}

/// Builds the direction grid for an `n`-dimensional hypersurface in
/// `R^{n+1}`: `n_theta` longitudes and, for `n = 2`, `n_phi` latitudes.
pub fn build_inverse_sphere_grid(
    norm: &MinkowskiNorm,
    n_theta: usize,
    n_phi: usize,
) -> Result<DirectionGrid, SurfaceError> {
    let surface_dim = norm.dim() - 1;
    if n_theta < 16 {
        return Err(SurfaceError::InvalidState("direction grid needs at least 16 longitudes".into()));
    }
    if surface_dim == 2 && (n_theta % 2 != 0 || n_phi < 8) {
        return Err(SurfaceError::InvalidState(
            "sphere grid needs an even number of longitudes and at least 8 latitudes".into(),
        ));
    }
    let n_phi = if surface_dim == 1 { 1 } else { n_phi };
    let ht = std::f64::consts::TAU / n_theta as f64;
    let hp = std::f64::consts::PI / n_phi as f64;
    let mut grid = DirectionGrid {
        surface_dim,
        n_theta,
        n_phi,
        frames: Vec::with_capacity(n_theta * n_phi),
        rho: Vec::with_capacity(n_theta * n_phi),
        metric: Vec::with_capacity(n_theta * n_phi),
        gbar_inv: Vec::with_capacity(n_theta * n_phi),
    };
    for j in 0..n_phi {
        for i in 0..n_theta {
            let u = unit_frame(surface_dim, i as f64 * ht, (j as f64 + 0.5) * hp);
            let (frame, rho) = inverse_sphere_frame(norm, &u, surface_dim)?;
            let g = norm.metric(&(-frame.x))?;
            let gbar = Matrix::from_fn(surface_dim, |a, b| g.bilinear(frame.d1[a].as_slice(), frame.d1[b].as_slice()));
            let gbar_inv = gbar.inverse(1e-14).ok_or(SurfaceError::DegenerateMetric { index: grid.len() })?;
            grid.frames.push(frame);
            grid.rho.push(rho);
            grid.metric.push(g);
            grid.gbar_inv.push(gbar_inv);
        }
    }
    Ok(grid)
}

/// `z = rho u` and its derivatives from the jet of `F` at `w = -u`:
/// with `q_i = F_a w^a_i` and `q_ij = F_ab w^a_i w^b_j + F_a w^a_ij`,
/// `rho_i = -q_i / F^2` and `rho_ij = 2 q_i q_j / F^3 - q_ij / F^2`.
fn inverse_sphere_frame(norm: &MinkowskiNorm, u: &Frame, n: usize) -> Result<(Frame, f64), NormError> {
    let w = -u.x;
    let jet = norm.norm_jet(&w, 2)?;
    let f = jet.value();
    let grad = jet.gradient();
    let hess = jet.hessian();
    let dim = norm.dim();
    let grad_dot = |v: &Vector| (0..dim).map(|a| grad[a] * v[a]).sum::<f64>();
    let mut q = [0.0; 2];
    let mut qq = [[0.0; 2]; 2];
    for i in 0..n {
        q[i] = -grad_dot(&u.d1[i]);
        for j in 0..n {
            qq[i][j] = hess.bilinear(u.d1[i].as_slice(), u.d1[j].as_slice()) - grad_dot(&u.d2[i][j]);
        }
    }
    let rho = 1.0 / f;
    let mut rd = [0.0; 2];
    let mut rdd = [[0.0; 2]; 2];
    for i in 0..n {
        rd[i] = -q[i] * rho * rho;
        for j in 0..n {
            rdd[i][j] = 2.0 * q[i] * q[j] * rho * rho * rho - qq[i][j] * rho * rho;
        }
    }
    let mut z = Frame::zeros(dim);
    z.x = u.x.scale(rho);
    for i in 0..n {
        z.d1[i] = u.x.scale(rd[i]) + u.d1[i].scale(rho);
        for j in 0..n {
            z.d2[i][j] = u.x.scale(rdd[i][j]) + u.d1[j].scale(rd[i]) + u.d1[i].scale(rd[j]) + u.d2[i][j].scale(rho);
        }
    }
    Ok((z, rho))
}
