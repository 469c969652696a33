//! Truncated multivariate Taylor jets (derivatives up to order 4).
//!
//! A `Jet` carries a scalar function's value and all partial derivatives up
//! to a chosen order at one point. Products follow the Leibniz rule over
//! index subsets and composition with a univariate function follows the
//! multivariate Faà di Bruno formula over set partitions, so derivative
//! tensors are exact up to rounding.

use std::sync::OnceLock;

use super::linalg::{Matrix, Tensor3, Tensor4, MAX_DIM};

pub const MAX_ORDER: usize = 4;

#[derive(Clone, Copy, Debug)]
pub struct Jet {
    dim: usize,
    order: usize,
    v: f64,
    d1: [f64; MAX_DIM],
    d2: [[f64; MAX_DIM]; MAX_DIM],
    d3: [[[f64; MAX_DIM]; MAX_DIM]; MAX_DIM],
    d4: [[[[f64; MAX_DIM]; MAX_DIM]; MAX_DIM]; MAX_DIM],
}

impl Jet {
    pub fn zero(dim: usize, order: usize) -> Self {
        assert!(order <= MAX_ORDER && (1..=MAX_DIM).contains(&dim));
        Self {
            dim,
            order,
            v: 0.0,
            d1: [0.0; MAX_DIM],
            d2: [[0.0; MAX_DIM]; MAX_DIM],
            d3: [[[0.0; MAX_DIM]; MAX_DIM]; MAX_DIM],
            d4: [[[[0.0; MAX_DIM]; MAX_DIM]; MAX_DIM]; MAX_DIM],
        }
    }

    pub fn constant(dim: usize, order: usize, c: f64) -> Self {
        let mut j = Self::zero(dim, order);
        j.v = c;
        j
    }

    /// The linear function `y -> <a, y>` evaluated at `y`.
    pub fn linear(a: &[f64], y: &[f64], order: usize) -> Self {
        let dim = y.len();
        let mut j = Self::zero(dim, order);
        j.v = a.iter().zip(y).map(|(a, y)| a * y).sum();
        if order >= 1 {
            j.d1[..dim].copy_from_slice(a);
        }
        j
    }

    /// The squared Euclidean norm `|y|^2` at `y`.
    pub fn squared_norm(y: &[f64], order: usize) -> Self {
        let dim = y.len();
        let mut j = Self::zero(dim, order);
        j.v = y.iter().map(|c| c * c).sum();
        if order >= 1 {
            for i in 0..dim {
                j.d1[i] = 2.0 * y[i];
            }
        }
        if order >= 2 {
            for i in 0..dim {
                j.d2[i][i] = 2.0;
            }
        }
        j
    }

    /// Builds a jet from a component callback `f(index tuple)`.
    pub fn from_components(dim: usize, order: usize, f: impl Fn(&[usize]) -> f64) -> Self {
        let mut j = Self::zero(dim, order);
        for k in 0..=order {
            for_each_index(dim, k, |idx| j.set(idx, f(idx)));
        }
        j
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.v
    }

    #[inline]
    pub fn get(&self, idx: &[usize]) -> f64 {
        match *idx {
            [] => self.v,
            [i] => self.d1[i],
            [i, j] => self.d2[i][j],
            [i, j, k] => self.d3[i][j][k],
            [i, j, k, l] => self.d4[i][j][k][l],
            _ => unreachable!("jet order above {MAX_ORDER}"),
        }
    }

    #[inline]
    fn set(&mut self, idx: &[usize], x: f64) {
        match *idx {
            [] => self.v = x,
            [i] => self.d1[i] = x,
            [i, j] => self.d2[i][j] = x,
            [i, j, k] => self.d3[i][j][k] = x,
            [i, j, k, l] => self.d4[i][j][k][l] = x,
            _ => unreachable!("jet order above {MAX_ORDER}"),
        }
    }

    pub fn gradient(&self) -> [f64; MAX_DIM] {
        self.d1
    }

    pub fn hessian(&self) -> Matrix {
        assert!(self.order >= 2);
        Matrix::from_fn(self.dim, |i, j| self.d2[i][j])
    }

    pub fn third(&self) -> Tensor3 {
        assert!(self.order >= 3);
        let mut t = Tensor3::zeros(self.dim);
        for_each_index(self.dim, 3, |x| t.set(x[0], x[1], x[2], self.d3[x[0]][x[1]][x[2]]));
        t
    }

    pub fn fourth(&self) -> Tensor4 {
        assert!(self.order >= 4);
        let mut t = Tensor4::zeros(self.dim);
        for_each_index(self.dim, 4, |x| t.set(x[0], x[1], x[2], x[3], self.d4[x[0]][x[1]][x[2]][x[3]]));
        t
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, 1.0, 1.0)
    }

    pub fn scale(&self, s: f64) -> Self {
        self.combine(self, s, 0.0)
    }

    /// `a * self + b * other`.
    pub fn combine(&self, other: &Self, a: f64, b: f64) -> Self {
        debug_assert_eq!((self.dim, self.order), (other.dim, other.order));
        let mut out = *self;
        for k in 0..=self.order {
            for_each_index(self.dim, k, |idx| out.set(idx, a * self.get(idx) + b * other.get(idx)));
        }
        out
    }

    /// Leibniz rule: `(fg)_I = sum over subsets S of I of f_S g_{I\S}`.
    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!((self.dim, self.order), (other.dim, other.order));
        let mut out = Self::zero(self.dim, self.order);
        let mut sub = [0usize; MAX_ORDER];
        let mut rest = [0usize; MAX_ORDER];
        for k in 0..=self.order {
            for_each_index(self.dim, k, |idx| {
                let mut acc = 0.0;
                for mask in 0..(1usize << k) {
                    let (mut ns, mut nr) = (0, 0);
                    for (pos, &i) in idx.iter().enumerate() {
                        if mask & (1 << pos) != 0 {
                            sub[ns] = i;
                            ns += 1;
                        } else {
                            rest[nr] = i;
                            nr += 1;
                        }
                    }
                    acc += self.get(&sub[..ns]) * other.get(&rest[..nr]);
                }
                out.set(idx, acc);
            });
        }
        out
    }

    /// Composition `phi(self)` where `derivs[m]` is the m-th derivative of
    /// `phi` at `self.value()`.
    pub fn compose(&self, derivs: &[f64; MAX_ORDER + 1]) -> Self {
        let mut out = Self::zero(self.dim, self.order);
        out.v = derivs[0];
        let parts = partitions();
        let mut block_idx = [0usize; MAX_ORDER];
        for k in 1..=self.order {
            for_each_index(self.dim, k, |idx| {
                let mut acc = 0.0;
                for partition in &parts[k] {
                    let mut prod = derivs[partition.len()];
                    for block in partition {
                        for (slot, &pos) in block.iter().enumerate() {
                            block_idx[slot] = idx[pos];
                        }
                        prod *= self.get(&block_idx[..block.len()]);
                    }
                    acc += prod;
                }
                out.set(idx, acc);
            });
        }
        out
    }

    /// `sqrt(self)`; requires a positive value.
    pub fn sqrt(&self) -> Self {
        self.powf(0.5)
    }

    /// `self^e`; requires a positive value.
    pub fn powf(&self, e: f64) -> Self {
        let u = self.v;
        let mut d = [0.0; MAX_ORDER + 1];
        let mut coef = 1.0;
        for (m, slot) in d.iter_mut().enumerate() {
            *slot = coef * u.powf(e - m as f64);
            coef *= e - m as f64;
        }
        self.compose(&d)
    }
}

/// Calls `f` with every index tuple of length `k` over `0..dim`.
pub fn for_each_index(dim: usize, k: usize, mut f: impl FnMut(&[usize])) {
    let mut idx = [0usize; MAX_ORDER];
    loop {
        f(&idx[..k]);
        let mut pos = 0;
        loop {
            if pos == k {
                return;
            }
            idx[pos] += 1;
            if idx[pos] < dim {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

type Partition = Vec<Vec<usize>>;

/// Set partitions of `{0, .., k-1}` for `k <= MAX_ORDER`.
fn partitions() -> &'static [Vec<Partition>; MAX_ORDER + 1] {
    static CACHE: OnceLock<[Vec<Partition>; MAX_ORDER + 1]> = OnceLock::new();
    CACHE.get_or_init(|| std::array::from_fn(set_partitions))
}

fn set_partitions(k: usize) -> Vec<Partition> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in set_partitions(k - 1) {
        // put element k-1 into each existing block, or a new block
        for b in 0..p.len() {
            let mut q = p.clone();
            q[b].push(k - 1);
            out.push(q);
        }
        let mut q = p;
        q.push(vec![k - 1]);
        out.push(q);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_numbers() {
        let p = partitions();
        let counts: Vec<usize> = p.iter().map(Vec::len).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 15]);
    }

    #[test]
    fn product_of_linear_forms_has_constant_hessian() {
        let y = [0.3, -1.2];
        let a = Jet::linear(&[1.0, 2.0], &y, 4);
        let b = Jet::linear(&[-3.0, 0.5], &y, 4);
        let p = a.mul(&b);
        assert!((p.get(&[0, 1]) - (1.0 * 0.5 + 2.0 * -3.0)).abs() < 1e-15);
        assert_eq!(p.get(&[0, 1, 1]), 0.0);
    }

    #[test]
    fn sqrt_of_squared_norm_matches_closed_form() {
        let y = [1.0, 2.0, -0.5];
        let a = Jet::squared_norm(&y, 4).sqrt();
        let r = (1.0f64 + 4.0 + 0.25).sqrt();
        assert!((a.value() - r).abs() < 1e-15);
        assert!((a.get(&[1]) - 2.0 / r).abs() < 1e-15);
        // second derivative: (delta_ij - y_i y_j / r^2) / r
        let expect = -y[0] * y[2] / (r * r * r);
        assert!((a.get(&[0, 2]) - expect).abs() < 1e-15);
    }

    #[test]
    fn univariate_power_fourth_derivative() {
        // d^4/dx^4 x^{5/2} = (5/2)(3/2)(1/2)(-1/2) x^{-3/2}
        let x = 1.7;
        let j = Jet::linear(&[1.0], &[x], 4).powf(2.5);
        let expect = 2.5 * 1.5 * 0.5 * -0.5 * x.powf(-1.5);
        assert!((j.get(&[0, 0, 0, 0]) - expect).abs() < 1e-13);
    }
}
