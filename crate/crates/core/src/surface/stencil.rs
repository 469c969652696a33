//! Fourth-order central differences on periodic grids.

const D1: [f64; 5] = [1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0];
const D2: [f64; 5] = [-1.0 / 12.0, 4.0 / 3.0, -5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0];

/// First and second derivative of a periodic sample sequence with spacing `h`.
pub fn periodic_derivatives(values: &[f64], h: f64) -> Vec<(f64, f64)> {
    let n = values.len();
    (0..n)
        .map(|k| {
            let mut d1 = 0.0;
            let mut d2 = 0.0;
            for (s, (a, b)) in D1.iter().zip(&D2).enumerate() {
                let v = values[(k + n + s - 2) % n];
                d1 += a * v;
                d2 += b * v;
            }
            (d1 / h, d2 / (h * h))
        })
        .collect()
}

/// Partial derivatives of a scalar on a latitude-longitude grid.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SphereDerivs {
    /// `[f_theta, f_phi]`.
    pub d1: [f64; 2],
    /// Hessian in `(theta, phi)`.
    pub d2: [[f64; 2]; 2],
}

/// Derivatives on the grid `theta_i = 2 pi i / n_theta`,
/// `phi_j = (j + 1/2) pi / n_phi`, stored row-major as `values[j * n_theta + i]`.
///
/// Stencils reaching past a pole continue on the opposite meridian
/// (`theta + pi`), which needs an even `n_theta`.
pub fn sphere_derivatives(values: &[f64], n_theta: usize, n_phi: usize) -> Vec<SphereDerivs> {
    assert_eq!(values.len(), n_theta * n_phi);
    assert!(n_theta % 2 == 0 && n_phi >= 3);
    let ht = std::f64::consts::TAU / n_theta as f64;
    let hp = std::f64::consts::PI / n_phi as f64;
    let at = |i: isize, j: isize| -> f64 {
        let (mut i, mut j) = (i, j);
        let nt = n_theta as isize;
        let np = n_phi as isize;
        if j < 0 {
            j = -j - 1;
            i += nt / 2;
        } else if j >= np {
            j = 2 * np - j - 1;
            i += nt / 2;
        }
        values[j as usize * n_theta + i.rem_euclid(nt) as usize]
    };
    let mut out = Vec::with_capacity(values.len());
    for j in 0..n_phi as isize {
        for i in 0..n_theta as isize {
            let mut d = SphereDerivs::default();
            for s in 0..5 {
                let o = s as isize - 2;
                d.d1[0] += D1[s] * at(i + o, j);
                d.d1[1] += D1[s] * at(i, j + o);
                d.d2[0][0] += D2[s] * at(i + o, j);
                d.d2[1][1] += D2[s] * at(i, j + o);
                for (q, c) in D1.iter().enumerate() {
                    d.d2[0][1] += D1[s] * c * at(i + o, j + q as isize - 2);
                }
            }
            d.d1[0] /= ht;
            d.d1[1] /= hp;
            d.d2[0][0] /= ht * ht;
            d.d2[1][1] /= hp * hp;
            d.d2[0][1] /= ht * hp;
            d.d2[1][0] = d.d2[0][1];
            out.push(d);
        }
    }
    out
}
