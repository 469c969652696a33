//! Closed planar polylines: orientation, distances, ray casts and
//! periodic cubic spline resampling.

use crate::kernel::Vector;

/// Shoelace signed area; positive for counter-clockwise order.
pub fn signed_area(points: &[Vector]) -> f64 {
    let n = points.len();
    (0..n)
        .map(|k| {
            let (a, b) = (points[k], points[(k + 1) % n]);
            a[0] * b[1] - b[0] * a[1]
        })
        .sum::<f64>()
        * 0.5
}

/// Length-weighted mean of edge midpoints.
pub fn centroid(points: &[Vector]) -> Vector {
    let n = points.len();
    let mut c = Vector::zeros(2);
    let mut total = 0.0;
    for k in 0..n {
        let (a, b) = (points[k], points[(k + 1) % n]);
        let len = (b - a).euclidean_norm();
        c += (a + b).scale(0.5 * len);
        total += len;
    }
    c.scale(1.0 / total)
}

pub fn edge_lengths(points: &[Vector]) -> Vec<f64> {
    let n = points.len();
    (0..n).map(|k| (points[(k + 1) % n] - points[k]).euclidean_norm()).collect()
}

fn point_segment_distance(p: &Vector, a: &Vector, b: &Vector) -> f64 {
    let ab = *b - *a;
    let len2 = ab.coord_dot(&ab);
    let t = if len2 > 0.0 { ((*p - *a).coord_dot(&ab) / len2).clamp(0.0, 1.0) } else { 0.0 };
    (*p - (*a + ab.scale(t))).euclidean_norm()
}

/// Euclidean distance from `p` to the closed polyline.
pub fn distance_to_polyline(p: &Vector, poly: &[Vector]) -> f64 {
    let n = poly.len();
    (0..n).map(|k| point_segment_distance(p, &poly[k], &poly[(k + 1) % n])).fold(f64::INFINITY, f64::min)
}

/// Symmetric Hausdorff distance between two closed polylines.
pub fn hausdorff(a: &[Vector], b: &[Vector]) -> f64 {
    let one_way = |x: &[Vector], y: &[Vector]| x.iter().map(|p| distance_to_polyline(p, y)).fold(0.0, f64::max);
    one_way(a, b).max(one_way(b, a))
}

/// Even-odd point-in-polygon test.
pub fn contains(poly: &[Vector], p: &Vector) -> bool {
    let n = poly.len();
    let mut inside = false;
    for k in 0..n {
        let (a, b) = (poly[k], poly[(k + 1) % n]);
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let x = a[0] + (p[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
            if p[0] < x {
                inside = !inside;
            }
        }
    }
    inside
}

/// Euclidean signed distance, positive inside.
pub fn signed_distance(p: &Vector, poly: &[Vector]) -> f64 {
    let d = distance_to_polyline(p, poly);
    if contains(poly, p) {
        d
    } else {
        -d
    }
}

/// Largest `s > 0` with `origin + s dir` on the polyline, if any.
pub fn ray_hit(origin: &Vector, dir: &Vector, poly: &[Vector]) -> Option<f64> {
    let n = poly.len();
    let mut best: Option<f64> = None;
    for k in 0..n {
        if let Some(s) = ray_segment(origin, dir, &poly[k], &poly[(k + 1) % n]) {
            best = Some(best.map_or(s, |b| b.max(s)));
        }
    }
    best
}

pub(crate) fn ray_segment(o: &Vector, d: &Vector, a: &Vector, b: &Vector) -> Option<f64> {
    let e = *b - *a;
    let den = d[0] * e[1] - d[1] * e[0];
    if den.abs() < 1e-300 {
        return None;
    }
    let w = *a - *o;
    let s = (w[0] * e[1] - w[1] * e[0]) / den;
    let t = (w[0] * d[1] - w[1] * d[0]) / den;
    (s > 0.0 && (-1e-12..=1.0 + 1e-12).contains(&t)).then_some(s)
}

/// Periodic cubic spline through closed-curve nodes, parametrized by
/// cumulative chord length.
#[derive(Clone, Debug)]
pub struct PeriodicSpline {
    knots: Vec<f64>,
    period: f64,
    values: Vec<[f64; 2]>,
    /// Second derivatives at the knots.
    moments: Vec<[f64; 2]>,
}

impl PeriodicSpline {
    pub fn through(points: &[Vector]) -> Self {
        let n = points.len();
        let h = edge_lengths(points);
        let mut knots = Vec::with_capacity(n);
        let mut s = 0.0;
        for len in &h {
            knots.push(s);
            s += len;
        }
        let values: Vec<[f64; 2]> = points.iter().map(|p| [p[0], p[1]]).collect();
        // h_{k-1} M_{k-1} + 2 (h_{k-1} + h_k) M_k + h_k M_{k+1} = 6 (slope_k - slope_{k-1})
        let mut moments = vec![[0.0; 2]; n];
        for c in 0..2 {
            let rhs: Vec<f64> = (0..n)
                .map(|k| {
                    let km = (k + n - 1) % n;
                    let kp = (k + 1) % n;
                    6.0 * ((values[kp][c] - values[k][c]) / h[k] - (values[k][c] - values[km][c]) / h[km])
                })
                .collect();
            let lower: Vec<f64> = (0..n).map(|k| h[(k + n - 1) % n]).collect();
            let diag: Vec<f64> = (0..n).map(|k| 2.0 * (h[(k + n - 1) % n] + h[k])).collect();
            let upper: Vec<f64> = h.clone();
            let m = solve_cyclic(&lower, &diag, &upper, &rhs);
            for k in 0..n {
                moments[k][c] = m[k];
            }
        }
        Self { knots, period: s, values, moments }
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    fn segment(&self, s: f64) -> (usize, f64, f64) {
        let s = s.rem_euclid(self.period);
        let k = match self.knots.binary_search_by(|x| x.total_cmp(&s)) {
            Ok(k) => k,
            Err(k) => k - 1,
        };
        let end = if k + 1 < self.knots.len() { self.knots[k + 1] } else { self.period };
        (k, s - self.knots[k], end - self.knots[k])
    }

    /// Position at chord parameter `s`.
    pub fn eval(&self, s: f64) -> Vector {
        let (k, t, h) = self.segment(s);
        let kp = (k + 1) % self.knots.len();
        let (a, b) = (h - t, t);
        let mut out = [0.0; 2];
        for (c, o) in out.iter_mut().enumerate() {
            let (m0, m1) = (self.moments[k][c], self.moments[kp][c]);
            let (y0, y1) = (self.values[k][c], self.values[kp][c]);
            *o = (m0 * a * a * a + m1 * b * b * b) / (6.0 * h)
                + (y0 / h - m0 * h / 6.0) * a
                + (y1 / h - m1 * h / 6.0) * b;
        }
        Vector::new2(out[0], out[1])
    }

    /// Derivative with respect to `s`.
    pub fn tangent(&self, s: f64) -> Vector {
        let (k, t, h) = self.segment(s);
        let kp = (k + 1) % self.knots.len();
        let (a, b) = (h - t, t);
        let mut out = [0.0; 2];
        for (c, o) in out.iter_mut().enumerate() {
            let (m0, m1) = (self.moments[k][c], self.moments[kp][c]);
            let (y0, y1) = (self.values[k][c], self.values[kp][c]);
            *o = (-m0 * a * a + m1 * b * b) / (2.0 * h) + (y1 - y0) / h - (m1 - m0) * h / 6.0;
        }
        Vector::new2(out[0], out[1])
    }

    /// Arc length of the spline between knots `k` and `k + 1`, Gauss-Legendre
    /// with five nodes.
    fn segment_length(&self, k: usize, upto: f64) -> f64 {
        const X: [f64; 5] =
            [-0.906_179_845_938_664, -0.538_469_310_105_683, 0.0, 0.538_469_310_105_683, 0.906_179_845_938_664];
        const W: [f64; 5] = [
            0.236_926_885_056_189,
            0.478_628_670_499_366,
            0.568_888_888_888_889,
            0.478_628_670_499_366,
            0.236_926_885_056_189,
        ];
        let s0 = self.knots[k];
        X.iter().zip(W).map(|(x, w)| w * self.tangent(s0 + 0.5 * upto * (x + 1.0)).euclidean_norm()).sum::<f64>()
            * 0.5
            * upto
    }
}

/// Resamples a closed polyline at `n` points equally spaced in spline arc
/// length, starting from the first node.
pub fn resample_uniform(points: &[Vector], n: usize) -> Vec<Vector> {
    let spline = PeriodicSpline::through(points);
    let m = points.len();
    let widths: Vec<f64> =
        (0..m).map(|k| if k + 1 < m { spline.knots[k + 1] } else { spline.period } - spline.knots[k]).collect();
    let lengths: Vec<f64> = (0..m).map(|k| spline.segment_length(k, widths[k])).collect();
    let total: f64 = lengths.iter().sum();
    let mut out = Vec::with_capacity(n);
    let mut k = 0;
    let mut before = 0.0;
    for j in 0..n {
        let target = total * j as f64 / n as f64;
        while k + 1 < m && before + lengths[k] < target {
            before += lengths[k];
            k += 1;
        }
        // invert the arc length inside segment k by Newton on the chord parameter
        let want = target - before;
        let mut t = if lengths[k] > 0.0 { widths[k] * want / lengths[k] } else { 0.0 };
        for _ in 0..8 {
            let err = spline.segment_length(k, t) - want;
            let speed = spline.tangent(spline.knots[k] + t).euclidean_norm();
            if err.abs() < 1e-15 * total || speed == 0.0 {
                break;
            }
            t = (t - err / speed).clamp(0.0, widths[k]);
        }
        out.push(spline.eval(spline.knots[k] + t));
    }
    out
}

/// Solves a cyclic tridiagonal system (Sherman-Morrison on the Thomas
/// algorithm). `lower[0]` couples row 0 to the last unknown and `upper[n-1]`
/// couples the last row to unknown 0.
fn solve_cyclic(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let alpha = upper[n - 1];
    let beta = lower[0];
    let gamma = -diag[0];
    let mut d = diag.to_vec();
    d[0] -= gamma;
    d[n - 1] -= alpha * beta / gamma;
    let x = thomas(lower, &d, upper, rhs);
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = alpha;
    let z = thomas(lower, &d, upper, &u);
    let fact = (x[0] + beta * x[n - 1] / gamma) / (1.0 + z[0] + beta * z[n - 1] / gamma);
    x.iter().zip(&z).map(|(x, z)| x - fact * z).collect()
}

fn thomas(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = upper[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for k in 1..n {
        let m = diag[k] - lower[k] * c[k - 1];
        c[k] = upper[k] / m;
        d[k] = (rhs[k] - lower[k] * d[k - 1]) / m;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for k in (0..n - 1).rev() {
        x[k] = d[k] - c[k] * x[k + 1];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(n: usize, r: f64) -> Vec<Vector> {
        (0..n)
            .map(|k| {
                let t = std::f64::consts::TAU * k as f64 / n as f64;
                Vector::new2(r * t.cos(), r * t.sin())
            })
            .collect()
    }

    #[test]
    fn orientation_and_containment() {
        let c = circle(64, 2.0);
        assert!(signed_area(&c) > 0.0);
        assert!(contains(&c, &Vector::new2(0.1, -0.3)));
        assert!(!contains(&c, &Vector::new2(2.5, 0.0)));
        assert!((signed_distance(&Vector::new2(0.0, 0.0), &c) - 2.0).abs() < 1e-2);
    }

    #[test]
    fn cyclic_solver_matches_dense_product() {
        let n = 7;
        let lower: Vec<f64> = (0..n).map(|k| 1.0 + 0.1 * k as f64).collect();
        let upper: Vec<f64> = (0..n).map(|k| 0.5 + 0.05 * k as f64).collect();
        let diag: Vec<f64> = (0..n).map(|k| 4.0 + k as f64).collect();
        let x: Vec<f64> = (0..n).map(|k| (k as f64).sin()).collect();
        let rhs: Vec<f64> =
            (0..n).map(|k| lower[k] * x[(k + n - 1) % n] + diag[k] * x[k] + upper[k] * x[(k + 1) % n]).collect();
        let got = solve_cyclic(&lower, &diag, &upper, &rhs);
        for (a, b) in got.iter().zip(&x) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn spline_interpolates_nodes() {
        let pts = circle(20, 1.0);
        let sp = PeriodicSpline::through(&pts);
        for (k, p) in pts.iter().enumerate() {
            assert!((sp.eval(sp.knots[k]) - *p).euclidean_norm() < 1e-12);
        }
    }

    #[test]
    fn resampling_a_uniform_circle_is_the_identity() {
        let pts = circle(64, 1.5);
        let out = resample_uniform(&pts, 64);
        for (a, b) in pts.iter().zip(&out) {
            assert!((*a - *b).euclidean_norm() < 1e-10);
        }
    }
}
