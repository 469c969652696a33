//! Fixed-capacity linear algebra for ambient dimensions 2 and 3.
//!
//! Everything here is `Copy` and allocation free; the flow loops evaluate
//! these objects millions of times per run.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 3;

macro_rules! component_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Copy, PartialEq)]
        pub struct $name {
            comps: [f64; MAX_DIM],
            dim: usize,
        }

        impl $name {
            /// Builds from a slice of 1 to 3 components.
            ///
            /// Panics when the slice length is outside `1..=3`.
            pub fn from_slice(c: &[f64]) -> Self {
                assert!(
                    (1..=MAX_DIM).contains(&c.len()),
                    "dimension {} outside 1..={MAX_DIM}",
                    c.len()
                );
                let mut comps = [0.0; MAX_DIM];
                comps[..c.len()].copy_from_slice(c);
                Self { comps, dim: c.len() }
            }

            pub fn zeros(dim: usize) -> Self {
                assert!((1..=MAX_DIM).contains(&dim));
                Self { comps: [0.0; MAX_DIM], dim }
            }

            pub fn new2(x: f64, y: f64) -> Self {
                Self::from_slice(&[x, y])
            }

            pub fn new3(x: f64, y: f64, z: f64) -> Self {
                Self::from_slice(&[x, y, z])
            }

            #[inline]
            pub fn dim(&self) -> usize {
                self.dim
            }

            #[inline]
            pub fn as_slice(&self) -> &[f64] {
                &self.comps[..self.dim]
            }

            pub fn to_vec(&self) -> Vec<f64> {
                self.as_slice().to_vec()
            }

            /// Euclidean norm of the coordinate components.
            #[inline]
            pub fn euclidean_norm(&self) -> f64 {
                self.as_slice().iter().map(|c| c * c).sum::<f64>().sqrt()
            }

            #[inline]
            pub fn scale(&self, s: f64) -> Self {
                let mut out = *self;
                for c in out.comps.iter_mut() {
                    *c *= s;
                }
                out
            }

            /// Coordinate dot product (not a metric pairing).
            #[inline]
            pub fn coord_dot(&self, other: &Self) -> f64 {
                debug_assert_eq!(self.dim, other.dim);
                (0..self.dim).map(|i| self.comps[i] * other.comps[i]).sum()
            }

            pub fn max_abs_diff(&self, other: &Self) -> f64 {
                (0..self.dim)
                    .map(|i| (self.comps[i] - other.comps[i]).abs())
                    .fold(0.0, f64::max)
            }
        }

        impl Index<usize> for $name {
            type Output = f64;
            #[inline]
            fn index(&self, i: usize) -> &f64 {
                debug_assert!(i < self.dim);
                &self.comps[i]
            }
        }

        impl IndexMut<usize> for $name {
            #[inline]
            fn index_mut(&mut self, i: usize) -> &mut f64 {
                debug_assert!(i < self.dim);
                &mut self.comps[i]
            }
        }

        impl Add for $name {
            type Output = Self;
            #[inline]
            fn add(mut self, rhs: Self) -> Self {
                debug_assert_eq!(self.dim, rhs.dim);
                for i in 0..MAX_DIM {
                    self.comps[i] += rhs.comps[i];
                }
                self
            }
        }

        impl AddAssign for $name {
            #[inline]
            fn add_assign(&mut self, rhs: Self) {
                *self = *self + rhs;
            }
        }

        impl Sub for $name {
            type Output = Self;
            #[inline]
            fn sub(mut self, rhs: Self) -> Self {
                debug_assert_eq!(self.dim, rhs.dim);
                for i in 0..MAX_DIM {
                    self.comps[i] -= rhs.comps[i];
                }
                self
            }
        }

        impl SubAssign for $name {
            #[inline]
            fn sub_assign(&mut self, rhs: Self) {
                *self = *self - rhs;
            }
        }

        impl Neg for $name {
            type Output = Self;
            #[inline]
            fn neg(self) -> Self {
                self.scale(-1.0)
            }
        }

        impl Mul<f64> for $name {
            type Output = Self;
            #[inline]
            fn mul(self, s: f64) -> Self {
                self.scale(s)
            }
        }

        impl Mul<$name> for f64 {
            type Output = $name;
            #[inline]
            fn mul(self, v: $name) -> $name {
                v.scale(self)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}{:?}", stringify!($name), self.as_slice())
            }
        }

        impl Serialize for $name {
            fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                self.as_slice().serialize(s)
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let v = Vec::<f64>::deserialize(d)?;
                if !(1..=MAX_DIM).contains(&v.len()) {
                    return Err(serde::de::Error::custom(format!(
                        "expected 1 to {MAX_DIM} components, got {}",
                        v.len()
                    )));
                }
                Ok(Self::from_slice(&v))
            }
        }
    };
}

component_type!(
    /// A tangent vector in ambient linear coordinates.
    Vector
);
component_type!(
    /// A covector (linear form) in the dual coordinates.
    Covector
);

impl Covector {
    /// The evaluation pairing `<xi, y>`.
    #[inline]
    pub fn pair(&self, y: &Vector) -> f64 {
        debug_assert_eq!(self.dim, y.dim);
        (0..self.dim).map(|i| self.comps[i] * y.comps[i]).sum()
    }

    /// Index raising with the Euclidean metric.
    #[inline]
    pub fn sharp(&self) -> Vector {
        Vector { comps: self.comps, dim: self.dim }
    }
}

impl Vector {
    /// Index lowering with the Euclidean metric.
    #[inline]
    pub fn flat(&self) -> Covector {
        Covector { comps: self.comps, dim: self.dim }
    }
}

/// Square matrix of size at most 3, stored row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct Matrix {
    m: [[f64; MAX_DIM]; MAX_DIM],
    dim: usize,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim));
        Self { m: [[0.0; MAX_DIM]; MAX_DIM], dim }
    }

    pub fn identity(dim: usize) -> Self {
        let mut out = Self::zeros(dim);
        for i in 0..dim {
            out.m[i][i] = 1.0;
        }
        out
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut out = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                out.m[i][j] = f(i, j);
            }
        }
        out
    }

    /// Symmetric outer product `u u^T`.
    pub fn outer(u: &[f64], v: &[f64]) -> Self {
        Self::from_fn(u.len(), |i, j| u[i] * v[j])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[i][j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.m[i][j] = v;
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_fn(self.dim, |i, j| self.m[i][j] * s)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.m[j][i])
    }

    /// `M y` for a vector argument.
    #[inline]
    pub fn mul_vec(&self, y: &[f64]) -> [f64; MAX_DIM] {
        let mut out = [0.0; MAX_DIM];
        for i in 0..self.dim {
            out[i] = (0..self.dim).map(|j| self.m[i][j] * y[j]).sum();
        }
        out
    }

    /// Lowers a vector: `(M y)_i`, returned as a covector.
    #[inline]
    pub fn lower(&self, y: &Vector) -> Covector {
        Covector::from_slice(&self.mul_vec(y.as_slice())[..self.dim])
    }

    /// Raises a covector: `(M xi)^i`, returned as a vector.
    #[inline]
    pub fn raise(&self, xi: &Covector) -> Vector {
        Vector::from_slice(&self.mul_vec(xi.as_slice())[..self.dim])
    }

    /// Bilinear form `u^T M v`.
    #[inline]
    pub fn bilinear(&self, u: &[f64], v: &[f64]) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                s += u[i] * self.m[i][j] * v[j];
            }
        }
        s
    }

    pub fn matmul(&self, other: &Self) -> Self {
        Self::from_fn(self.dim, |i, j| (0..self.dim).map(|k| self.m[i][k] * other.m[k][j]).sum())
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.m[i][i]).sum()
    }

    pub fn det(&self) -> f64 {
        let m = &self.m;
        match self.dim {
            1 => m[0][0],
            2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
            _ => {
                m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                    + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
            }
        }
    }

    /// Cofactor inverse; `None` when the determinant is below `tol` relative
    /// to the matrix scale.
    pub fn inverse(&self, tol: f64) -> Option<Self> {
        let d = self.det();
        let scale = self.max_abs().powi(self.dim as i32);
        if !d.is_finite() || d.abs() <= tol * scale.max(f64::MIN_POSITIVE) {
            return None;
        }
        let m = &self.m;
        let inv = match self.dim {
            1 => Self::from_fn(1, |_, _| 1.0 / d),
            2 => {
                let mut r = Self::zeros(2);
                r.m[0][0] = m[1][1] / d;
                r.m[0][1] = -m[0][1] / d;
                r.m[1][0] = -m[1][0] / d;
                r.m[1][1] = m[0][0] / d;
                r
            }
            _ => Self::from_fn(3, |i, j| {
                // adjugate: transpose of the cofactor matrix
                let (r0, r1) = others(j);
                let (c0, c1) = others(i);
                let minor = m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
                let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                sign * minor / d
            }),
        };
        Some(inv)
    }

    /// Solves `M x = b` via the cofactor inverse.
    pub fn solve(&self, b: &[f64]) -> Option<[f64; MAX_DIM]> {
        self.inverse(1e-300).map(|inv| inv.mul_vec(b))
    }

    pub fn max_abs(&self) -> f64 {
        let mut s: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                s = s.max(self.m[i][j].abs());
            }
        }
        s
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn asymmetry(&self) -> f64 {
        self.max_abs_diff(&self.transpose())
    }

    /// Eigenvalues of the symmetric part, ascending.
    pub fn symmetric_eigenvalues(&self) -> Vec<f64> {
        let n = self.dim;
        let sym = nalgebra::DMatrix::from_fn(n, n, |i, j| 0.5 * (self.m[i][j] + self.m[j][i]));
        let mut ev: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

fn others(i: usize) -> (usize, usize) {
    match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

impl Add for Matrix {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(self.dim, |i, j| self.m[i][j] + rhs.m[i][j])
    }
}

impl Sub for Matrix {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(self.dim, |i, j| self.m[i][j] - rhs.m[i][j])
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[f64]> = (0..self.dim).map(|i| &self.m[i][..self.dim]).collect();
        write!(f, "Matrix{rows:?}")
    }
}

/// Rank-3 covariant tensor, e.g. the Cartan tensor.
#[derive(Clone, Copy, PartialEq)]
pub struct Tensor3 {
    t: [[[f64; MAX_DIM]; MAX_DIM]; MAX_DIM],
    dim: usize,
}

impl Tensor3 {
    pub fn zeros(dim: usize) -> Self {
        Self { t: [[[0.0; MAX_DIM]; MAX_DIM]; MAX_DIM], dim }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.t[i][j][k]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: f64) {
        self.t[i][j][k] = v;
    }

    /// `T(u, v, w)`.
    pub fn apply(&self, u: &[f64], v: &[f64], w: &[f64]) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    s += self.t[i][j][k] * u[i] * v[j] * w[k];
                }
            }
        }
        s
    }

    /// Contraction of the last slot with `y`: `T_ijk y^k`.
    pub fn contract_last(&self, y: &[f64]) -> Matrix {
        Matrix::from_fn(self.dim, |i, j| (0..self.dim).map(|k| self.t[i][j][k] * y[k]).sum())
    }

    pub fn max_abs(&self) -> f64 {
        let mut s: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    s = s.max(self.t[i][j][k].abs());
                }
            }
        }
        s
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut s: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    s = s.max((self.t[i][j][k] - other.t[i][j][k]).abs());
                }
            }
        }
        s
    }

    /// Largest deviation from total symmetry under index permutations.
    pub fn asymmetry(&self) -> f64 {
        let mut s: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    let v = self.t[i][j][k];
                    for w in [self.t[j][i][k], self.t[i][k][j], self.t[k][j][i]] {
                        s = s.max((v - w).abs());
                    }
                }
            }
        }
        s
    }
}

impl fmt::Debug for Tensor3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tensor3(dim={}, max_abs={:e})", self.dim, self.max_abs())
    }
}

/// Rank-4 covariant tensor (derivative of the Cartan tensor).
#[derive(Clone, Copy, PartialEq)]
pub struct Tensor4 {
    t: [[[[f64; MAX_DIM]; MAX_DIM]; MAX_DIM]; MAX_DIM],
    dim: usize,
}

impl Tensor4 {
    pub fn zeros(dim: usize) -> Self {
        Self { t: [[[[0.0; MAX_DIM]; MAX_DIM]; MAX_DIM]; MAX_DIM], dim }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.t[i][j][k][l]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, v: f64) {
        self.t[i][j][k][l] = v;
    }

    pub fn contract_last(&self, y: &[f64]) -> Tensor3 {
        let mut out = Tensor3::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    out.t[i][j][k] = (0..self.dim).map(|l| self.t[i][j][k][l] * y[l]).sum();
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.t.iter().flatten().flatten().flatten().fold(0.0_f64, |a, b| a.max(b.abs()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut s: f64 = 0.0;
        for i in 0..MAX_DIM {
            for j in 0..MAX_DIM {
                for k in 0..MAX_DIM {
                    for l in 0..MAX_DIM {
                        s = s.max((self.t[i][j][k][l] - other.t[i][j][k][l]).abs());
                    }
                }
            }
        }
        s
    }
}

impl fmt::Debug for Tensor4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tensor4(dim={}, max_abs={:e})", self.dim, self.max_abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_3x3_round_trip() {
        let m = Matrix::from_fn(3, |i, j| if i == j { 4.0 } else { 1.0 / (1 + i + j) as f64 });
        let inv = m.inverse(1e-14).unwrap();
        let prod = m.matmul(&inv);
        assert!(prod.max_abs_diff(&Matrix::identity(3)) < 1e-14);
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let m = Matrix::outer(&[1.0, 2.0], &[1.0, 2.0]);
        assert!(m.inverse(1e-12).is_none());
    }

    #[test]
    fn pairing_is_bilinear() {
        let xi = Covector::new2(1.0, -2.0);
        let y = Vector::new2(3.0, 0.5);
        let z = Vector::new2(-1.0, 4.0);
        let lhs = xi.pair(&(y * 2.0 + z));
        assert!((lhs - (2.0 * xi.pair(&y) + xi.pair(&z))).abs() < 1e-14);
    }

    #[test]
    fn eigenvalues_ascending() {
        let m = Matrix::from_fn(2, |i, j| [[2.0, 1.0], [1.0, 2.0]][i][j]);
        let ev = m.symmetric_eigenvalues();
        assert!((ev[0] - 1.0).abs() < 1e-14 && (ev[1] - 3.0).abs() < 1e-14);
    }
}
