use anisoflow::kernel::{MinkowskiNorm, Vector};
use anisoflow::schemes::{adaptive_dt, run, step_parametric, FlowConfig, RunRecord, Scheme, StopReason};
use anisoflow::surface::polyline::{distance_to_polyline, hausdorff, resample_uniform};
use anisoflow::surface::{compute_geometry, parametric_state, radial_state, Shape, SurfaceState};

fn origin() -> Vector {
    Vector::new2(0.0, 0.0)
}

fn euclid() -> MinkowskiNorm {
    MinkowskiNorm::euclidean(2).unwrap()
}

fn randers() -> MinkowskiNorm {
    MinkowskiNorm::randers(&[0.3, 0.0]).unwrap()
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn radial(norm: MinkowskiNorm, shape: Shape, n: usize) -> SurfaceState {
    radial_state(norm, origin(), &shape, n, 1).unwrap()
}

fn config(scheme: Scheme, t_end: f64) -> FlowConfig {
    let mut c = FlowConfig::new(scheme, t_end);
    c.snapshot_every = 1;
    c
}

/// Max relative deviation of the mean radius from sqrt(1 - 2t) for t <= t_max.
fn radius_error(rec: &RunRecord, t_max: f64, radius: impl Fn(&RunRecord, usize) -> f64) -> f64 {
    rec.snapshots
        .iter()
        .enumerate()
        .filter(|(_, s)| s.t <= t_max)
        .map(|(k, s)| {
            let exact = (1.0 - 2.0 * s.t).sqrt();
            (radius(rec, k) - exact).abs() / exact
        })
        .fold(0.0, f64::max)
}

fn mean_r(rec: &RunRecord, k: usize) -> f64 {
    mean(rec.snapshots[k].r.as_ref().unwrap())
}

#[test]
fn radial_circle_follows_the_shrinking_sphere() {
    let rec = run(&radial(euclid(), Shape::Circle { radius: 1.0 }, 256), &config(Scheme::RadialGraph, 0.45)).unwrap();
    assert_eq!(rec.halt, StopReason::TEnd);
    assert!(radius_error(&rec, 0.45, mean_r) <= 1e-3);
}

#[test]
fn randers_wulff_follows_the_same_law() {
    let rec = run(&radial(randers(), Shape::Wulff { radius: 1.0 }, 256), &config(Scheme::RadialGraph, 0.45)).unwrap();
    assert!(radius_error(&rec, 0.45, mean_r) <= 1e-3);
}

#[test]
fn wulff_data_stays_constant_in_direction() {
    let mut c = config(Scheme::RadialGraph, 1.0);
    c.max_steps = Some(100);
    let rec = run(&radial(randers(), Shape::Wulff { radius: 1.0 }, 128), &c).unwrap();
    assert_eq!(rec.halt, StopReason::MaxSteps);
    let r = rec.snapshots.last().unwrap().r.clone().unwrap();
    let m = mean(&r);
    let sd = (r.iter().map(|x| (x - m).powi(2)).sum::<f64>() / r.len() as f64).sqrt();
    assert!(sd / m <= 1e-10, "{}", sd / m);
}

#[test]
fn parametric_circle_follows_the_shrinking_sphere() {
    let init = parametric_state(euclid(), origin(), &Shape::Circle { radius: 1.0 }, 256).unwrap();
    let rec = run(&init, &config(Scheme::ParametricCurve, 0.45)).unwrap();
    let err = radius_error(&rec, 0.45, |rec, k| {
        let p = rec.snapshots[k].points.as_ref().unwrap();
        mean(&p.iter().map(|q| q[0].hypot(q[1])).collect::<Vec<_>>())
    });
    assert!(err <= 1e-3, "{err}");
}

#[test]
fn parametric_ellipse_area_decreases_every_step() {
    let init = parametric_state(euclid(), origin(), &Shape::Ellipse { semi_axes: vec![2.0, 1.0] }, 128).unwrap();
    let rec = run(&init, &config(Scheme::ParametricCurve, 0.1)).unwrap();
    assert!(rec.diagnostics.windows(2).all(|w| w[1].area < w[0].area));
}

#[test]
fn tangential_velocity_changes_the_curve_only_at_second_order() {
    let s = parametric_state(randers(), origin(), &Shape::Ellipse { semi_axes: vec![2.0, 1.0] }, 256).unwrap();
    let c = compute_geometry(&s).unwrap();
    let dt = 1e-3;
    let plain = step_parametric(&s, &c, dt, false).unwrap().positions();
    // same normal motion plus a tangential field along X_theta
    let pushed: Vec<Vector> = s
        .positions()
        .iter()
        .zip(&c.points)
        .enumerate()
        .map(|(k, (x, p))| {
            let w = 0.7 * (3.0 * k as f64 * std::f64::consts::TAU / 256.0).sin();
            *x + p.normal.scale(dt * p.mean_curvature) + p.frame.d1[0].scale(dt * w)
        })
        .collect();
    // vertices of each run against a dense spline through the other run
    let one_way = |a: &[Vector], b: &[Vector]| {
        let dense = resample_uniform(b, 20_000);
        a.iter().map(|p| distance_to_polyline(p, &dense)).fold(0.0, f64::max)
    };
    let d = one_way(&plain, &pushed).max(one_way(&pushed, &plain));
    assert!(d <= 5.0 * dt * dt, "{d}");
}

#[test]
fn adaptive_step_formula() {
    let s = radial(euclid(), Shape::Circle { radius: 1.0 }, 256);
    let c = compute_geometry(&s).unwrap();
    let h = std::f64::consts::TAU / 256.0;
    let expect = 0.2 * h * h / (1.0 + h);
    let dt = adaptive_dt(&s, &c, 0.2, 1.0);
    assert!((dt - expect).abs() < 1e-15);
    assert!((dt - 1.18e-4).abs() < 1e-6);
    assert_eq!(adaptive_dt(&s, &c, 0.1, 1.0), 0.5 * dt);
    assert_eq!(adaptive_dt(&s, &c, 0.2, 1e-6), 1e-6);
    // near collapse the step scales like the squared radius
    let small = radial(euclid(), Shape::Circle { radius: 0.06 }, 256);
    let cs = compute_geometry(&small).unwrap();
    let ratio = adaptive_dt(&small, &cs, 0.2, 1.0) / dt;
    assert!((ratio - 0.06f64.powi(2) * (1.0 + h) / (1.0 + h)).abs() < 1e-3 * ratio);
}

#[test]
fn zero_end_time_keeps_only_the_initial_state() {
    let rec = run(&radial(euclid(), Shape::Circle { radius: 1.0 }, 64), &config(Scheme::RadialGraph, 0.0)).unwrap();
    assert_eq!(rec.snapshots.len(), 1);
    assert_eq!(rec.diagnostics.len(), 1);
    assert_eq!(rec.halt, StopReason::TEnd);
}

#[test]
fn circle_area_strictly_decreases_and_run_halts_at_r_stop() {
    let rec = run(&radial(euclid(), Shape::Circle { radius: 1.0 }, 128), &config(Scheme::RadialGraph, 1.0)).unwrap();
    assert_eq!(rec.halt, StopReason::RStop);
    assert!(rec.halt_time() >= 0.45 && rec.halt_time() <= 0.5);
    assert!(rec.diagnostics.windows(2).all(|w| w[1].area < w[0].area));
}

#[test]
fn mean_convex_radial_runs_are_contracting() {
    let rec =
        run(&radial(randers(), Shape::Ellipse { semi_axes: vec![2.0, 1.0] }, 128), &config(Scheme::RadialGraph, 0.2))
            .unwrap();
    assert!(rec.diagnostics.iter().all(|d| d.h_min >= 0.0));
    for w in rec.snapshots.windows(2) {
        let (a, b) = (w[0].r.as_ref().unwrap(), w[1].r.as_ref().unwrap());
        assert!(a.iter().zip(b).all(|(x, y)| y - x <= 1e-10));
    }
}

#[test]
fn curvature_cap_stops_the_ellipse_before_the_extinction_bound() {
    let mut c = FlowConfig::new(Scheme::RadialGraph, 10.0);
    c.h_cap = 50.0;
    c.r_stop = 0.005;
    c.snapshot_every = 1000;
    let rec = run(&radial(euclid(), Shape::Ellipse { semi_axes: vec![2.0, 1.0] }, 128), &c).unwrap();
    assert_eq!(rec.halt, StopReason::HCap);
    // T_max <= (n/2) H_min(0)^-2 = 8
    assert!(rec.halt_time() < 8.0);
}

#[test]
fn runs_are_deterministic() {
    let init = radial(randers(), Shape::Ellipse { semi_axes: vec![2.0, 1.0] }, 64);
    let c = config(Scheme::RadialGraph, 0.05);
    assert_eq!(run(&init, &c).unwrap().diagnostics, run(&init, &c).unwrap().diagnostics);
}

#[test]
fn schemes_agree_on_the_ellipse() {
    let shape = Shape::Ellipse { semi_axes: vec![2.0, 1.0] };
    let mut c = FlowConfig::new(Scheme::RadialGraph, 0.2);
    c.snapshot_every = 100_000;
    let a = run(&radial(euclid(), shape.clone(), 256), &c).unwrap();
    c.scheme = Scheme::ParametricCurve;
    let b = run(&parametric_state(euclid(), origin(), &shape, 256).unwrap(), &c).unwrap();
    let pa = a.state_at(a.snapshots.last().unwrap()).unwrap().positions();
    let pb = b.state_at(b.snapshots.last().unwrap()).unwrap().positions();
    assert!((a.halt_time() - 0.2).abs() < 1e-12 && (b.halt_time() - 0.2).abs() < 1e-12);
    let d = hausdorff(&pa, &pb);
    assert!(d <= 1e-2, "{d}");
}

#[test]
fn level_set_circle_matches_the_ode() {
    let mut c = FlowConfig::new(Scheme::LevelSet, 0.2);
    c.snapshot_every = 100_000;
    c.level_set.bounds = Some([-1.6, 1.6, -1.6, 1.6]);
    c.level_set.dx = 0.025;
    let init = parametric_state(euclid(), origin(), &Shape::Circle { radius: 1.0 }, 512).unwrap();
    let rec = run(&init, &c).unwrap();
    assert_eq!(rec.halt, StopReason::TEnd, "{:?}", rec.halt);
    let last = rec.snapshots.last().unwrap();
    let radii: Vec<f64> = last.points.as_ref().unwrap().iter().map(|q| q[0].hypot(q[1])).collect();
    let exact = (1.0 - 2.0 * 0.2f64).sqrt();
    let spread = radii.iter().map(|r| (r - exact).abs()).fold(0.0, f64::max);
    assert!(spread <= 2.0 * 0.025, "{spread}");
    let m = mean(&radii);
    let var = radii.iter().map(|r| (r - m).powi(2)).sum::<f64>() / radii.len() as f64;
    assert!(var <= 0.025);
}

#[test]
fn level_set_randers_wulff_stays_homothetic() {
    let dx = 0.025;
    let mut c = FlowConfig::new(Scheme::LevelSet, 0.2);
    c.snapshot_every = 100_000;
    c.level_set.bounds = Some([-2.0, 2.0, -1.6, 1.6]);
    c.level_set.dx = dx;
    let shape = Shape::Wulff { radius: 1.0 };
    let ls = run(&parametric_state(randers(), origin(), &shape, 512).unwrap(), &c).unwrap();
    assert_eq!(ls.halt, StopReason::TEnd, "{:?}", ls.halt);
    c.scheme = Scheme::RadialGraph;
    let rad = run(&radial(randers(), shape, 256), &c).unwrap();
    let a = ls.state_at(ls.snapshots.last().unwrap()).unwrap().positions();
    let b = rad.state_at(rad.snapshots.last().unwrap()).unwrap().positions();
    let d = hausdorff(&a, &b);
    assert!(d <= 2.0 * dx, "{d}");
}
