//! Minkowski norm families and their pointwise tensors.
//!
//! All derivative tensors are taken from the squared norm `G = F^2`:
//! `g_ij = G_ij / 2`, `C_ijk = G_ijk / 4` and `C_ijkl = G_ijkl / 4`.

use serde::{Deserialize, Serialize};

use super::error::NormError;
use super::jet::{for_each_index, Jet, MAX_ORDER};
use super::linalg::{Covector, Matrix, Tensor3, Tensor4, Vector, MAX_DIM};

/// Inputs with Euclidean length at or below this are rejected.
pub const ZERO_VECTOR_THRESHOLD: f64 = 1e-14;

const LEGENDRE_TOL: f64 = 1e-12;
/// Newton tolerance when `L` itself is differenced.
const LEGENDRE_TOL_FD: f64 = 1e-10;
const LEGENDRE_MAX_ITER: usize = 50;

/// How derivative tensors of `F^2` are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivativeMode {
    /// Closed-form derivatives (euclidean, randers). For `lp_smooth` this is
    /// the exact chain rule, i.e. the same as `ForwardAd`.
    Analytic,
    /// Exact Taylor-jet propagation through elementary operations.
    ForwardAd,
    /// Fourth-order central differences of `F^2`.
    FiniteDifference,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormFamily {
    Euclidean,
    /// `F(y) = |y| + <b, y>` with `|b| < 1`.
    Randers {
        drift: Covector,
    },
    /// `F^2 = (1 - eps) (sum y_i^p)^{2/p} + eps |y|^2`, `p` even.
    LpSmooth {
        exponent: u32,
        blend: f64,
    },
}

/// A Minkowski norm on `R^dim`. Immutable once built.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinkowskiNorm {
    family: NormFamily,
    dim: usize,
    mode: DerivativeMode,
}

/// `g_ij(y)` together with its inverse.
#[derive(Clone, Copy, Debug)]
pub struct FundamentalTensor {
    pub g: Matrix,
    pub g_inv: Matrix,
}

impl MinkowskiNorm {
    pub fn euclidean(dim: usize) -> Result<Self, NormError> {
        check_dim(dim)?;
        Ok(Self { family: NormFamily::Euclidean, dim, mode: DerivativeMode::Analytic })
    }

    pub fn randers(b: &[f64]) -> Result<Self, NormError> {
        check_dim(b.len())?;
        if b.iter().any(|c| !c.is_finite()) {
            return Err(NormError::invalid("b", "components must be finite"));
        }
        let len = b.iter().map(|c| c * c).sum::<f64>().sqrt();
        if len >= 1.0 {
            return Err(NormError::invalid("b", "Euclidean norm must be < 1"));
        }
        Ok(Self {
            family: NormFamily::Randers { drift: Covector::from_slice(b) },
            dim: b.len(),
            mode: DerivativeMode::Analytic,
        })
    }

    pub fn lp_smooth(dim: usize, exponent: u32, blend: f64) -> Result<Self, NormError> {
        check_dim(dim)?;
        if exponent < 4 || exponent % 2 != 0 {
            return Err(NormError::invalid("p", "must be an even integer >= 4"));
        }
        if !(0.0..=1.0).contains(&blend) {
            return Err(NormError::invalid("epsilon", "must be in [0,1]"));
        }
        Ok(Self { family: NormFamily::LpSmooth { exponent, blend }, dim, mode: DerivativeMode::ForwardAd })
    }

    pub fn with_mode(mut self, mode: DerivativeMode) -> Self {
        self.mode = mode;
        self
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn family(&self) -> &NormFamily {
        &self.family
    }

    #[inline]
    pub fn mode(&self) -> DerivativeMode {
        self.mode
    }

    pub fn is_reversible(&self) -> bool {
        !matches!(self.family, NormFamily::Randers { drift } if drift.euclidean_norm() > 0.0)
    }

    fn check(&self, y: &[f64]) -> Result<(), NormError> {
        if y.len() != self.dim {
            return Err(NormError::DimensionMismatch { expected: self.dim, got: y.len() });
        }
        let len = y.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !(len > ZERO_VECTOR_THRESHOLD) {
            return Err(NormError::ZeroVector);
        }
        Ok(())
    }

    /// `F(y)`.
    pub fn eval(&self, y: &Vector) -> Result<f64, NormError> {
        self.check(y.as_slice())?;
        Ok(self.eval_unchecked(y.as_slice()))
    }

    fn eval_unchecked(&self, y: &[f64]) -> f64 {
        let alpha = || y.iter().map(|c| c * c).sum::<f64>().sqrt();
        match self.family {
            NormFamily::Euclidean => alpha(),
            NormFamily::Randers { drift } => alpha() + dot(drift.as_slice(), y),
            NormFamily::LpSmooth { exponent, blend } => {
                let q: f64 = y.iter().map(|c| c.powi(exponent as i32)).sum();
                let sq: f64 = y.iter().map(|c| c * c).sum();
                ((1.0 - blend) * q.powf(2.0 / exponent as f64) + blend * sq).sqrt()
            }
        }
    }

    /// Taylor jet of `F^2` at `y` up to `order`.
    pub fn squared_jet(&self, y: &Vector, order: usize) -> Result<Jet, NormError> {
        self.check(y.as_slice())?;
        Ok(self.squared_jet_unchecked(y.as_slice(), order))
    }

    /// Taylor jet of `F` at `y` up to `order`.
    pub fn norm_jet(&self, y: &Vector, order: usize) -> Result<Jet, NormError> {
        self.check(y.as_slice())?;
        let y = y.as_slice();
        Ok(match (self.family, self.mode) {
            (_, DerivativeMode::FiniteDifference) => fd_jet(|p| self.eval_unchecked(p), y, order),
            (NormFamily::Euclidean, DerivativeMode::Analytic) => euclidean_length_jet(y, order),
            (NormFamily::Euclidean, _) => Jet::squared_norm(y, order).sqrt(),
            (NormFamily::Randers { drift }, mode) => {
                let alpha = if mode == DerivativeMode::Analytic {
                    euclidean_length_jet(y, order)
                } else {
                    Jet::squared_norm(y, order).sqrt()
                };
                alpha.add(&Jet::linear(drift.as_slice(), y, order))
            }
            (NormFamily::LpSmooth { .. }, _) => self.squared_jet_unchecked(y, order).sqrt(),
        })
    }

    fn squared_jet_unchecked(&self, y: &[f64], order: usize) -> Jet {
        match (self.family, self.mode) {
            (_, DerivativeMode::FiniteDifference) => fd_jet(|p| self.eval_unchecked(p).powi(2), y, order),
            (NormFamily::Euclidean, _) => Jet::squared_norm(y, order),
            (NormFamily::Randers { drift }, mode) => {
                let alpha = if mode == DerivativeMode::Analytic {
                    euclidean_length_jet(y, order)
                } else {
                    Jet::squared_norm(y, order).sqrt()
                };
                let f = alpha.add(&Jet::linear(drift.as_slice(), y, order));
                f.mul(&f)
            }
            (NormFamily::LpSmooth { exponent, blend }, _) => {
                let p = exponent as i32;
                let q = Jet::from_components(y.len(), order, |idx| {
                    if idx.is_empty() {
                        return y.iter().map(|c| c.powi(p)).sum();
                    }
                    if idx.iter().any(|&i| i != idx[0]) {
                        return 0.0;
                    }
                    let k = idx.len() as i32;
                    let falling: f64 = (0..k).map(|m| (p - m) as f64).product();
                    falling * y[idx[0]].powi(p - k)
                });
                q.powf(2.0 / exponent as f64).scale(1.0 - blend).add(&Jet::squared_norm(y, order).scale(blend))
            }
        }
    }

    /// `g_ij(y) = (1/2) [F^2]_{y^i y^j}`.
    pub fn metric(&self, y: &Vector) -> Result<Matrix, NormError> {
        self.check(y.as_slice())?;
        let g = self.metric_unchecked(y.as_slice());
        if !is_positive_definite(&g) {
            return Err(NormError::NotPositiveDefinite);
        }
        Ok(g)
    }

    fn metric_unchecked(&self, y: &[f64]) -> Matrix {
        match (self.family, self.mode) {
            (NormFamily::Euclidean, DerivativeMode::Analytic | DerivativeMode::ForwardAd) => Matrix::identity(self.dim),
            (NormFamily::Randers { drift }, DerivativeMode::Analytic) => randers_metric(drift.as_slice(), y).0,
            _ => self.squared_jet_unchecked(y, 2).hessian().scale(0.5),
        }
    }

    /// `g_ij(y)` and `g^{ij}(y)`.
    pub fn fundamental_tensor(&self, y: &Vector) -> Result<FundamentalTensor, NormError> {
        let g = self.metric(y)?;
        let g_inv = g.inverse(1e-14).ok_or(NormError::NotPositiveDefinite)?;
        Ok(FundamentalTensor { g, g_inv })
    }

    /// Cartan tensor `C_ijk = (1/2) dg_ij / dy^k`.
    pub fn cartan(&self, y: &Vector) -> Result<Tensor3, NormError> {
        self.check(y.as_slice())?;
        if matches!(self.family, NormFamily::Euclidean) && self.mode != DerivativeMode::FiniteDifference {
            return Ok(Tensor3::zeros(self.dim));
        }
        let t = self.squared_jet_unchecked(y.as_slice(), 3).third();
        let mut c = Tensor3::zeros(self.dim);
        for_each_index(self.dim, 3, |i| c.set(i[0], i[1], i[2], 0.25 * t.get(i[0], i[1], i[2])));
        Ok(c)
    }

    /// `C_ijkl = dC_ijk / dy^l`.
    pub fn cartan_deriv(&self, y: &Vector) -> Result<Tensor4, NormError> {
        self.check(y.as_slice())?;
        if matches!(self.family, NormFamily::Euclidean) && self.mode != DerivativeMode::FiniteDifference {
            return Ok(Tensor4::zeros(self.dim));
        }
        let t = self.squared_jet_unchecked(y.as_slice(), 4).fourth();
        let mut c = Tensor4::zeros(self.dim);
        for_each_index(self.dim, 4, |i| c.set(i[0], i[1], i[2], i[3], 0.25 * t.get(i[0], i[1], i[2], i[3])));
        Ok(c)
    }

    /// Legendre map `L(y)_a = g_ab(y) y^b`.
    pub fn legendre(&self, y: &Vector) -> Result<Covector, NormError> {
        self.check(y.as_slice())?;
        Ok(self.legendre_and_metric(y.as_slice()).0)
    }

    fn legendre_and_metric(&self, y: &[f64]) -> (Covector, Matrix) {
        match (self.family, self.mode) {
            (NormFamily::Randers { drift }, DerivativeMode::Analytic) => {
                let (g, l) = randers_metric(drift.as_slice(), y);
                (Covector::from_slice(&l[..self.dim]), g)
            }
            (_, DerivativeMode::FiniteDifference) => {
                // g y from a differenced Hessian carries ~1e-8 noise; first
                // differences of F^2 are two orders cleaner
                let d = self.squared_jet_unchecked(y, 1).gradient();
                let l: Vec<f64> = d[..self.dim].iter().map(|v| 0.5 * v).collect();
                (Covector::from_slice(&l), self.metric_unchecked(y))
            }
            _ => {
                let g = self.metric_unchecked(y);
                (Covector::from_slice(&g.mul_vec(y)[..self.dim]), g)
            }
        }
    }

    /// Inverse Legendre map by Newton iteration from the Euclidean guess.
    pub fn legendre_inv(&self, xi: &Covector) -> Result<Vector, NormError> {
        self.legendre_inv_from(xi, None)
    }

    /// Inverse Legendre map with an optional warm start.
    ///
    /// The Jacobian of `y -> L(y)` is exactly `g(y)` because the Cartan
    /// tensor annihilates `y`.
    pub fn legendre_inv_from(&self, xi: &Covector, guess: Option<&Vector>) -> Result<Vector, NormError> {
        self.check(xi.as_slice())?;
        if matches!(self.family, NormFamily::Euclidean) && self.mode != DerivativeMode::FiniteDifference {
            return Ok(xi.sharp());
        }
        let scale = xi.euclidean_norm();
        let target = xi.scale(1.0 / scale);
        let mut y = match guess {
            Some(g) if g.dim() == self.dim && g.euclidean_norm() > ZERO_VECTOR_THRESHOLD => g.scale(1.0 / scale),
            _ => target.sharp(),
        };
        let tol = if self.mode == DerivativeMode::FiniteDifference { LEGENDRE_TOL_FD } else { LEGENDRE_TOL };
        let (mut l, mut g) = self.legendre_and_metric(y.as_slice());
        let mut res = (l - target).euclidean_norm();
        for _ in 0..LEGENDRE_MAX_ITER {
            if res <= tol {
                return Ok(y.scale(scale));
            }
            let r = l - target;
            let step = match g.solve(r.as_slice()) {
                Some(s) => Vector::from_slice(&s[..self.dim]),
                None => break,
            };
            let mut t = 1.0;
            loop {
                let cand = y - step.scale(t);
                if cand.euclidean_norm() > ZERO_VECTOR_THRESHOLD {
                    let (lc, gc) = self.legendre_and_metric(cand.as_slice());
                    let rc = (lc - target).euclidean_norm();
                    if rc < res || t < 1e-8 {
                        y = cand;
                        l = lc;
                        g = gc;
                        res = rc;
                        break;
                    }
                }
                t *= 0.5;
                if t < 1e-8 {
                    return Err(NormError::NoConvergence { iterations: LEGENDRE_MAX_ITER, residual: res });
                }
            }
        }
        if res <= tol {
            return Ok(y.scale(scale));
        }
        Err(NormError::NoConvergence { iterations: LEGENDRE_MAX_ITER, residual: res })
    }

    /// Dual norm `F*(xi) = <xi, L^{-1} xi> / F(L^{-1} xi)`.
    pub fn dual_norm(&self, xi: &Covector) -> Result<f64, NormError> {
        let y = self.legendre_inv(xi)?;
        Ok(xi.pair(&y) / self.eval_unchecked(y.as_slice()))
    }

    /// Gradient `F_{y^i}(y)` as a covector.
    pub fn gradient(&self, y: &Vector) -> Result<Covector, NormError> {
        let f = self.eval(y)?;
        Ok(self.legendre(y)?.scale(1.0 / f))
    }

    /// Busemann-Hausdorff constant `vol(B^dim) / vol({F < 1})`, by quadrature
    /// over `samples` directions.
    pub fn bh_sigma(&self, samples: usize) -> f64 {
        match self.dim {
            2 => {
                let h = std::f64::consts::TAU / samples as f64;
                let area: f64 = (0..samples)
                    .map(|k| {
                        let th = k as f64 * h;
                        let rho = 1.0 / self.eval_unchecked(&[th.cos(), th.sin()]);
                        0.5 * rho * rho * h
                    })
                    .sum();
                std::f64::consts::PI / area
            }
            _ => {
                let m = samples.max(8);
                let (dth, dph) = (std::f64::consts::TAU / (2 * m) as f64, std::f64::consts::PI / m as f64);
                let mut vol = 0.0;
                for j in 0..m {
                    let ph = (j as f64 + 0.5) * dph;
                    for i in 0..2 * m {
                        let th = i as f64 * dth;
                        let u = [ph.sin() * th.cos(), ph.sin() * th.sin(), ph.cos()];
                        let rho = 1.0 / self.eval_unchecked(&u);
                        vol += rho.powi(3) / 3.0 * ph.sin() * dth * dph;
                    }
                }
                4.0 / 3.0 * std::f64::consts::PI / vol
            }
        }
    }

    pub fn to_spec(&self) -> NormSpec {
        let mut spec = NormSpec {
            family: FamilyKind::Euclidean,
            dim: self.dim,
            b: None,
            p: None,
            epsilon: None,
            derivative_mode: Some(self.mode),
        };
        match self.family {
            NormFamily::Euclidean => {}
            NormFamily::Randers { drift } => {
                spec.family = FamilyKind::Randers;
                spec.b = Some(drift.to_vec());
            }
            NormFamily::LpSmooth { exponent, blend } => {
                spec.family = FamilyKind::LpSmooth;
                spec.p = Some(exponent);
                spec.epsilon = Some(blend);
            }
        }
        spec
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Euclidean,
    Randers,
    LpSmooth,
}

/// JSON description of a norm, e.g. `{"family": "randers", "dim": 2, "b": [0.3, 0.0]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormSpec {
    pub family: FamilyKind,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derivative_mode: Option<DerivativeMode>,
}

impl NormSpec {
    pub fn build(&self) -> Result<MinkowskiNorm, NormError> {
        let norm = match self.family {
            FamilyKind::Euclidean => MinkowskiNorm::euclidean(self.dim)?,
            FamilyKind::Randers => {
                let b = self.b.as_deref().ok_or_else(|| NormError::invalid("b", "required for randers"))?;
                if b.len() != self.dim {
                    return Err(NormError::invalid("b", "length must equal dim"));
                }
                MinkowskiNorm::randers(b)?
            }
            FamilyKind::LpSmooth => {
                let p = self.p.ok_or_else(|| NormError::invalid("p", "required for lp_smooth"))?;
                let eps = self.epsilon.ok_or_else(|| NormError::invalid("epsilon", "required for lp_smooth"))?;
                MinkowskiNorm::lp_smooth(self.dim, p, eps)?
            }
        };
        Ok(match self.derivative_mode {
            Some(mode) => norm.with_mode(mode),
            None => norm,
        })
    }
}

fn check_dim(dim: usize) -> Result<(), NormError> {
    if (2..=MAX_DIM).contains(&dim) {
        Ok(())
    } else {
        Err(NormError::invalid("dim", "must be 2 or 3"))
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Closed-form Randers metric and Legendre map:
/// `g = (F/a)(I - u u^T) + (u + b)(u + b)^T`, `L = F (u + b)` with `u = y/a`.
fn randers_metric(b: &[f64], y: &[f64]) -> (Matrix, [f64; MAX_DIM]) {
    let dim = y.len();
    let alpha = y.iter().map(|c| c * c).sum::<f64>().sqrt();
    let f = alpha + dot(b, y);
    let mut u = [0.0; MAX_DIM];
    let mut w = [0.0; MAX_DIM];
    let mut l = [0.0; MAX_DIM];
    for i in 0..dim {
        u[i] = y[i] / alpha;
        w[i] = u[i] + b[i];
        l[i] = f * w[i];
    }
    let ratio = f / alpha;
    let g = Matrix::from_fn(dim, |i, j| {
        let p = if i == j { 1.0 } else { 0.0 } - u[i] * u[j];
        ratio * p + w[i] * w[j]
    });
    (g, l)
}

/// Closed-form jet of `a(y) = |y|` up to order 4, with `u = y/a` and
/// `P = I - u u^T`:
/// `a_i = u_i`, `a_ij = P_ij / a`, `a_ijk = -(P_ij u_k + P_ik u_j + P_jk u_i) / a^2`,
/// `a_ijkl = [-(P_ij P_kl + P_ik P_jl + P_il P_jk) + 2 sum_{6 pairs} P u u] / a^3`.
fn euclidean_length_jet(y: &[f64], order: usize) -> Jet {
    let dim = y.len();
    let a = y.iter().map(|c| c * c).sum::<f64>().sqrt();
    let mut u = [0.0; MAX_DIM];
    for i in 0..dim {
        u[i] = y[i] / a;
    }
    let p = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 } - u[i] * u[j];
    Jet::from_components(dim, order, |idx| match *idx {
        [] => a,
        [i] => u[i],
        [i, j] => p(i, j) / a,
        [i, j, k] => -(p(i, j) * u[k] + p(i, k) * u[j] + p(j, k) * u[i]) / (a * a),
        [i, j, k, l] => {
            let pp = p(i, j) * p(k, l) + p(i, k) * p(j, l) + p(i, l) * p(j, k);
            let puu = p(i, j) * u[k] * u[l]
                + p(i, k) * u[j] * u[l]
                + p(i, l) * u[j] * u[k]
                + p(j, k) * u[i] * u[l]
                + p(j, l) * u[i] * u[k]
                + p(k, l) * u[i] * u[j];
            (2.0 * puu - pp) / (a * a * a)
        }
        _ => unreachable!(),
    })
}

pub(crate) fn is_positive_definite(g: &Matrix) -> bool {
    let m = |i, j| g.get(i, j);
    match g.dim() {
        1 => m(0, 0) > 0.0,
        2 => m(0, 0) > 0.0 && m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) > 0.0,
        _ => {
            let d2 = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
            m(0, 0) > 0.0 && d2 > 0.0 && g.det() > 0.0
        }
    }
}

// Fourth-order central stencils, offsets -3..=3, for derivative orders 0..=4.
const STENCILS: [[f64; 7]; MAX_ORDER + 1] = [
    [0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
    [0.0, 1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0, 0.0],
    [0.0, -1.0 / 12.0, 4.0 / 3.0, -5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0, 0.0],
    [1.0 / 8.0, -1.0, 13.0 / 8.0, 0.0, -13.0 / 8.0, 1.0, -1.0 / 8.0],
    [-1.0 / 6.0, 2.0, -13.0 / 2.0, 28.0 / 3.0, -13.0 / 2.0, 2.0, -1.0 / 6.0],
];

/// Relative step per derivative order; order 2 uses `1e-4 |y|`.
const FD_STEPS: [f64; MAX_ORDER + 1] = [0.0, 1e-4, 1e-4, 2e-3, 5e-3];

/// Mixed partial derivative of `f` at `y` by tensor products of 1D stencils.
pub fn fd_partial(f: impl Fn(&[f64]) -> f64, y: &[f64], idx: &[usize]) -> f64 {
    let dim = y.len();
    let k = idx.len();
    if k == 0 {
        return f(y);
    }
    let len = y.iter().map(|c| c * c).sum::<f64>().sqrt();
    let h = FD_STEPS[k] * len;
    let mut counts = [0usize; MAX_DIM];
    for &i in idx {
        counts[i] += 1;
    }
    let mut acc = 0.0;
    let mut offs = [-3i32; MAX_DIM];
    let mut p = [0.0; MAX_DIM];
    // iterate offsets -3..=3 on each axis, skipping zero weights
    loop {
        let mut w = 1.0;
        for a in 0..dim {
            w *= STENCILS[counts[a]][(offs[a] + 3) as usize];
        }
        if w != 0.0 {
            for a in 0..dim {
                p[a] = y[a] + offs[a] as f64 * h;
            }
            acc += w * f(&p[..dim]);
        }
        let mut a = 0;
        loop {
            if a == dim {
                return acc / h.powi(k as i32);
            }
            offs[a] += 1;
            if offs[a] <= 3 {
                break;
            }
            offs[a] = -3;
            a += 1;
        }
    }
}

fn fd_jet(f: impl Fn(&[f64]) -> f64, y: &[f64], order: usize) -> Jet {
    Jet::from_components(y.len(), order, |idx| fd_partial(&f, y, idx))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stencils_are_exact_on_monomials() {
        for (order, st) in STENCILS.iter().enumerate() {
            // fourth-order accuracy: exact through degree order + 3
            for deg in 0..=(order as u32 + 3) {
                let s: f64 = st.iter().enumerate().map(|(i, c)| c * (i as f64 - 3.0).powi(deg as i32)).sum();
                let expect = if deg as usize == order { (1..=deg).map(f64::from).product::<f64>() } else { 0.0 };
                assert!((s - expect).abs() < 1e-12, "order {order} degree {deg}: {s}");
            }
        }
    }

    #[test]
    fn fd_partial_mixed_polynomial() {
        let f = |p: &[f64]| p[0].powi(3) * p[1] * p[1];
        let d = fd_partial(f, &[1.0, 2.0], &[0, 0, 1]);
        // d^3/dx^2 dy = 6x * 2y = 24
        assert!((d - 24.0).abs() < 1e-6, "{d}");
    }
}
