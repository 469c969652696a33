use crate::kernel::Vector;
use crate::schemes::{RunRecord, Scheme};
use crate::surface::stencil::periodic_derivatives;
use crate::surface::{compute_geometry, GeometryCache, Snapshot};

use super::{CheckDetail, CheckError, CheckResult};

/// Tolerance of the homothety and scale-law checks.
pub const WULFF_TOL: f64 = 1e-3;
const HMIN_TOL: f64 = 1e-2;
const HMIN_SLACK: f64 = 1e-8;
const AREA_TOL: f64 = 0.02;
const AREA_SLACK: f64 = 1e-10;
const CONVEX_SLACK: f64 = 1e-6;
const GAP_SLACK: f64 = 1e-6;
const EVOLUTION_TOL: f64 = 5e-2;
const MIN_STATES: usize = 10;

fn detail(label: &str, observed: f64, bound: f64, pass: bool, worst_t: Option<f64>) -> CheckDetail {
    CheckDetail { label: label.to_string(), observed, bound, pass, worst_t }
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn rel_spread(v: &[f64]) -> f64 {
    let m = mean(v);
    let var = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / v.len() as f64;
    var.sqrt() / m.abs()
}

/// `F(-(X_k - x0))` at every vertex of a snapshot.
fn wulff_radii(rec: &RunRecord, snap: &Snapshot, center: &Vector) -> Result<Vec<f64>, CheckError> {
    if let (Some(r), true) = (&snap.r, center == &rec.center) {
        return Ok(r.clone());
    }
    let state = rec.state_at(snap)?;
    Ok(state.positions().iter().map(|x| rec.norm.eval(&(*center - *x)).unwrap_or(0.0)).collect())
}

/// Homothetic shrinking of a Wulff shape: the radius profile keeps its
/// shape and the scale follows `sqrt(1 - t/T)` with `T = r0^2 / (2n)`.
pub fn check_wulff_selfsimilar(rec: &RunRecord) -> Result<CheckResult, CheckError> {
    let first = rec.snapshots.first().ok_or(CheckError::InsufficientSnapshots { found: 0, needed: 2 })?;
    let spread = rel_spread(&first.h);
    if !(spread <= WULFF_TOL) {
        return Err(CheckError::WrongInitialData { spread });
    }
    if rec.snapshots.len() < 2 {
        return Err(CheckError::InsufficientSnapshots { found: rec.snapshots.len(), needed: 2 });
    }
    let n = rec.surface_dim() as f64;
    let q0 = wulff_radii(rec, first, &rec.center)?;
    let r0 = mean(&q0);
    let t_model = r0 * r0 / (2.0 * n);
    let (mut homothety, mut homothety_t) = (0.0f64, 0.0);
    let (mut law, mut law_t) = (0.0f64, 0.0);
    let (mut num, mut den) = (0.0, 0.0);
    for snap in &rec.snapshots {
        let q = wulff_radii(rec, snap, &rec.center)?;
        let ratio: Vec<f64> = if q.len() == q0.len() {
            q.iter().zip(&q0).map(|(a, b)| a / b).collect()
        } else {
            q.iter().map(|a| a / r0).collect()
        };
        let dev = rel_spread(&ratio);
        if dev > homothety {
            (homothety, homothety_t) = (dev, snap.t);
        }
        let f = mean(&q) / r0;
        if snap.t <= 0.9 * t_model {
            let d = (f - (1.0 - snap.t / t_model).sqrt()).abs();
            if d > law {
                (law, law_t) = (d, snap.t);
            }
            // least squares for f^2 = 1 - t/T
            num += snap.t * (1.0 - f * f);
            den += snap.t * snap.t;
        }
    }
    let t_fit = if num > 0.0 { den / num } else { f64::INFINITY };
    let fit_err = (t_fit - t_model).abs() / t_model;
    let details = vec![
        detail("homothety_deviation", homothety, WULFF_TOL, homothety <= WULFF_TOL, Some(homothety_t)),
        detail("scale_law_deviation", law, WULFF_TOL, law <= WULFF_TOL, Some(law_t)),
        detail("fitted_extinction_time", t_fit, t_model, fit_err <= 0.01, None),
    ];
    let worst = homothety.max(law);
    Ok(CheckResult::new("wulff_selfsimilar", worst, WULFF_TOL, WULFF_TOL - worst, details))
}

/// Area dissipation `dA/dt = -sum H^2 dmu`, monotone area and the
/// integrated bound `int_0^T sum H^2 dmu dt <= A(0)`.
pub fn check_area_identity(rec: &RunRecord) -> Result<CheckResult, CheckError> {
    let d = &rec.diagnostics;
    if d.len() < MIN_STATES {
        return Err(CheckError::InsufficientSnapshots { found: d.len(), needed: MIN_STATES });
    }
    let (mut rise, mut rise_t) = (f64::NEG_INFINITY, 0.0);
    for w in d.windows(2) {
        let inc = w[1].area - w[0].area;
        if inc > rise {
            (rise, rise_t) = (inc, w[1].t);
        }
    }
    let (mut err, mut err_t) = (0.0f64, 0.0);
    for k in 1..d.len() - 1 {
        let slope = (d[k + 1].area - d[k - 1].area) / (d[k + 1].t - d[k - 1].t);
        let rel = (slope + d[k].h2_integral).abs() / d[k].h2_integral.abs().max(f64::MIN_POSITIVE);
        if rel > err {
            (err, err_t) = (rel, d[k].t);
        }
    }
    let dissipated: f64 = d.windows(2).map(|w| w[1].dt * w[0].h2_integral).sum();
    let cap = d[0].area * 1.01;
    let details = vec![
        detail("area_increase", rise, AREA_SLACK, rise <= AREA_SLACK, Some(rise_t)),
        detail("rate_relative_error", err, AREA_TOL, err <= AREA_TOL, Some(err_t)),
        detail("integrated_dissipation", dissipated, cap, dissipated <= cap, None),
    ];
    Ok(CheckResult::new("area_identity", err, AREA_TOL, AREA_TOL - err, details))
}

/// Lower bound `H_min(t) >= H0 (1 - (2/n) H0^2 t)^{-1/2}`, monotone `H_min`
/// and the extinction bound `T <= (n/2) H0^{-2}`.
pub fn check_hmin_bound(rec: &RunRecord) -> Result<CheckResult, CheckError> {
    let d = &rec.diagnostics;
    let h0 = d.first().ok_or(CheckError::InsufficientSnapshots { found: 0, needed: 1 })?.h_min;
    if !(h0 > 0.0) {
        return Err(CheckError::NotMeanConvex { h_min: h0 });
    }
    let n = rec.surface_dim() as f64;
    let t_max = 0.5 * n / (h0 * h0);
    let (mut ratio, mut ratio_t) = (f64::INFINITY, 0.0);
    for row in d {
        let base = 1.0 - 2.0 / n * h0 * h0 * row.t;
        if base <= 0.0 {
            continue;
        }
        let r = row.h_min / (h0 / base.sqrt());
        if r < ratio {
            (ratio, ratio_t) = (r, row.t);
        }
    }
    let (mut drop, mut drop_t) = (f64::INFINITY, 0.0);
    for w in d.windows(2) {
        let inc = w[1].h_min - w[0].h_min;
        if inc < drop {
            (drop, drop_t) = (inc, w[1].t);
        }
    }
    if d.len() < 2 {
        drop = 0.0;
    }
    let halt = rec.halt_time();
    let details = vec![
        detail("bound_ratio", ratio, 1.0 - HMIN_TOL, ratio >= 1.0 - HMIN_TOL, Some(ratio_t)),
        detail("h_min_decrease", drop, -HMIN_SLACK, drop >= -HMIN_SLACK, Some(drop_t)),
        detail("halt_time", halt, t_max, halt <= t_max, None),
    ];
    Ok(CheckResult::new("hmin_bound", ratio, 1.0 - HMIN_TOL, ratio - (1.0 - HMIN_TOL), details))
}

/// Convexity is preserved, and becomes strict after the first steps.
pub fn check_convexity(rec: &RunRecord) -> Result<CheckResult, CheckError> {
    let d = &rec.diagnostics;
    let k0 = d.first().ok_or(CheckError::InsufficientSnapshots { found: 0, needed: 1 })?.k_min;
    if k0 < -1e-8 {
        return Err(CheckError::NotConvexInitially { k_min: k0 });
    }
    let (mut worst, mut worst_t) = (f64::INFINITY, 0.0);
    let (mut strict, mut strict_t) = (f64::INFINITY, 0.0);
    for row in d {
        if row.k_min < worst {
            (worst, worst_t) = (row.k_min, row.t);
        }
        if row.step >= 5 && row.k_min < strict {
            (strict, strict_t) = (row.k_min, row.t);
        }
    }
    let details = vec![
        detail("k_min", worst, -CONVEX_SLACK, worst >= -CONVEX_SLACK, Some(worst_t)),
        detail("k_min_after_5_steps", strict, 0.0, strict > 0.0, Some(strict_t)),
    ];
    Ok(CheckResult::new("convexity", worst, -CONVEX_SLACK, worst + CONVEX_SLACK, details))
}

/// Radius of a Wulff-sphere run at time `t`, interpolating `r^2` linearly
/// between recorded states.
fn sphere_radius(rec: &RunRecord, t: f64) -> Option<f64> {
    let d = &rec.diagnostics;
    let r2 = |k: usize| (0.5 * (d[k].r_min + d[k].r_max)).powi(2);
    let k = d.partition_point(|row| row.t < t);
    if k == 0 {
        return (d.first()?.t == t).then(|| r2(0).sqrt());
    }
    if k >= d.len() {
        return None;
    }
    let w = (t - d[k - 1].t) / (d[k].t - d[k - 1].t);
    Some(((1.0 - w) * r2(k - 1) + w * r2(k)).sqrt())
}

/// Distance between a surface and enclosing/enclosed Wulff spheres is
/// non-decreasing: `r1 - r_out` and `r_in - r2` about the sphere centers.
pub fn check_comparison(inner: &RunRecord, outer: &RunRecord, mid: &RunRecord) -> Result<CheckResult, CheckError> {
    let mut gaps: Vec<(f64, f64, f64)> = Vec::new();
    for snap in &mid.snapshots {
        let (Some(r1), Some(r2)) = (sphere_radius(outer, snap.t), sphere_radius(inner, snap.t)) else {
            break;
        };
        let q_out = wulff_radii(mid, snap, &outer.center)?;
        let q_in = wulff_radii(mid, snap, &inner.center)?;
        let r_out = q_out.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let r_in = q_in.iter().copied().fold(f64::INFINITY, f64::min);
        gaps.push((snap.t, r1 - r_out, r_in - r2));
    }
    let &(_, g1, g2) = gaps.first().ok_or(CheckError::InsufficientSnapshots { found: 0, needed: 2 })?;
    if !(g1 > 0.0 && g2 > 0.0) {
        return Err(CheckError::NotNestedInitially { outer_gap: g1, inner_gap: g2 });
    }
    if gaps.len() < 2 {
        return Err(CheckError::InsufficientSnapshots { found: gaps.len(), needed: 2 });
    }
    let mut worst = [(f64::INFINITY, 0.0); 2];
    let mut min_gap = (f64::INFINITY, 0.0);
    for w in gaps.windows(2) {
        for (slot, inc) in [w[1].1 - w[0].1, w[1].2 - w[0].2].into_iter().enumerate() {
            if inc < worst[slot].0 {
                worst[slot] = (inc, w[1].0);
            }
        }
        let g = w[1].1.min(w[1].2);
        if g < min_gap.0 {
            min_gap = (g, w[1].0);
        }
    }
    let details = vec![
        detail("outer_gap_decrease", worst[0].0, -GAP_SLACK, worst[0].0 >= -GAP_SLACK, Some(worst[0].1)),
        detail("inner_gap_decrease", worst[1].0, -GAP_SLACK, worst[1].0 >= -GAP_SLACK, Some(worst[1].1)),
        detail("min_gap", min_gap.0, 0.0, min_gap.0 > 0.0, Some(min_gap.1)),
        detail("common_snapshots", gaps.len() as f64, 2.0, true, None),
    ];
    let observed = worst[0].0.min(worst[1].0);
    Ok(CheckResult::new("comparison", observed, -GAP_SLACK, observed + GAP_SLACK, details))
}

/// Finite differences in time of the induced metric and the normal against
/// `dg/dt = -2 H h - 2 C(n)(X_i, X_j, grad H)` and `dn/dt = -grad H`, with
/// `grad H = g^{ij} H_j X_i`.
pub fn check_evolution_identities(rec: &RunRecord) -> Result<CheckResult, CheckError> {
    if rec.config.scheme != Scheme::ParametricCurve {
        return Err(CheckError::UnsupportedScheme("parametric_curve"));
    }
    if rec.config.tangential_redistribution {
        return Err(CheckError::RedistributionActive);
    }
    let snaps = &rec.snapshots;
    let consecutive = snaps.windows(2).all(|w| w[1].step == w[0].step + 1);
    if snaps.len() < 3 || !consecutive {
        return Err(CheckError::InsufficientSnapshots { found: snaps.len(), needed: 3 });
    }
    let caches: Vec<GeometryCache> =
        snaps.iter().map(|s| Ok(compute_geometry(&rec.state_at(s)?)?)).collect::<Result<_, CheckError>>()?;
    let len = caches[0].len();
    let h = std::f64::consts::TAU / len as f64;
    let (mut g_err, mut g_t) = (0.0f64, 0.0);
    let (mut n_err, mut n_t) = (0.0f64, 0.0);
    let mut cartan_max = 0.0f64;
    let mut dt_max = 0.0f64;
    for k in 1..snaps.len() - 1 {
        let span = snaps[k + 1].t - snaps[k - 1].t;
        dt_max = dt_max.max(snaps[k + 1].t - snaps[k].t).max(snaps[k].t - snaps[k - 1].t);
        let cur = &caches[k];
        let hs: Vec<f64> = cur.mean_curvatures();
        let dh = periodic_derivatives(&hs, h);
        let (mut g_diff, mut g_scale) = (0.0f64, 0.0f64);
        let (mut n_diff, mut n_scale) = (0.0f64, 0.0f64);
        for (v, p) in cur.points.iter().enumerate() {
            let xt = p.frame.d1[0];
            let grad_h = xt.scale(p.induced_inv.get(0, 0) * dh[v].0);
            let c = rec.norm.cartan(&p.normal)?;
            let cartan_term = -2.0 * c.apply(xt.as_slice(), xt.as_slice(), grad_h.as_slice());
            cartan_max = cartan_max.max(cartan_term.abs());
            let rhs = -2.0 * p.mean_curvature * p.second.get(0, 0) + cartan_term;
            let lhs = (caches[k + 1].points[v].induced.get(0, 0) - caches[k - 1].points[v].induced.get(0, 0)) / span;
            g_diff = g_diff.max((lhs - rhs).abs());
            g_scale = g_scale.max(rhs.abs());
            let dn = (caches[k + 1].points[v].normal - caches[k - 1].points[v].normal).scale(1.0 / span);
            n_diff = n_diff.max((dn + grad_h).euclidean_norm());
            // shapes with constant curvature have zero rhs; H^2 is the natural rate scale
            n_scale = n_scale.max(grad_h.euclidean_norm()).max(p.mean_curvature.powi(2));
        }
        let ge = g_diff / g_scale.max(f64::MIN_POSITIVE);
        let ne = n_diff / n_scale.max(f64::MIN_POSITIVE);
        if ge > g_err {
            (g_err, g_t) = (ge, snaps[k].t);
        }
        if ne > n_err {
            (n_err, n_t) = (ne, snaps[k].t);
        }
    }
    let tol = EVOLUTION_TOL.max(10.0 * (dt_max + h.powi(4)));
    let details = vec![
        detail("metric_identity_error", g_err, tol, g_err <= tol, Some(g_t)),
        detail("normal_identity_error", n_err, tol, n_err <= tol, Some(n_t)),
        detail("cartan_term_max", cartan_max, f64::INFINITY, true, None),
    ];
    let worst = g_err.max(n_err);
    Ok(CheckResult::new("evolution_identities", worst, tol, tol - worst, details))
}
