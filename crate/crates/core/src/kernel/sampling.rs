//! Deterministic low-discrepancy unit directions.

use super::linalg::Vector;

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// `count` quasi-random unit vectors in `R^dim`: golden-angle points on the
/// circle for `dim = 2`, a Fibonacci lattice on the sphere for `dim = 3`.
pub fn directions(dim: usize, count: usize) -> Vec<Vector> {
    (0..count)
        .map(|k| match dim {
            2 => {
                let th = std::f64::consts::TAU * ((k as f64 + 0.5) * GOLDEN).fract();
                Vector::new2(th.cos(), th.sin())
            }
            _ => {
                let z = 1.0 - 2.0 * (k as f64 + 0.5) / count as f64;
                let s = (1.0 - z * z).max(0.0).sqrt();
                let th = std::f64::consts::TAU * (k as f64 * GOLDEN).fract();
                Vector::new3(s * th.cos(), s * th.sin(), z)
            }
        })
        .collect()
}
