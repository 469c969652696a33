use anisoflow::kernel::{MinkowskiNorm, Vector};
use anisoflow::schemes::{run, FlowConfig, RunRecord, Scheme};
use anisoflow::surface::{parametric_state, radial_state, Shape};
use anisoflow::verify::{
    check_area_identity, check_comparison, check_convexity, check_evolution_identities, check_hmin_bound,
    check_wulff_selfsimilar, CheckError,
};

fn origin() -> Vector {
    Vector::new2(0.0, 0.0)
}

fn euclid() -> MinkowskiNorm {
    MinkowskiNorm::euclidean(2).unwrap()
}

fn randers() -> MinkowskiNorm {
    MinkowskiNorm::randers(&[0.3, 0.0]).unwrap()
}

fn ellipse() -> Shape {
    Shape::Ellipse { semi_axes: vec![2.0, 1.0] }
}

fn radial_run(norm: MinkowskiNorm, shape: Shape, t_end: f64) -> RunRecord {
    let init = radial_state(norm, origin(), &shape, 128, 1).unwrap();
    run(&init, &FlowConfig::new(Scheme::RadialGraph, t_end)).unwrap()
}

fn parametric_run(norm: MinkowskiNorm, shape: Shape, steps: u64, redistribute: bool) -> RunRecord {
    let init = parametric_state(norm, origin(), &shape, 128).unwrap();
    let mut c = FlowConfig::new(Scheme::ParametricCurve, 1.0);
    c.snapshot_every = 1;
    c.max_steps = Some(steps);
    c.tangential_redistribution = redistribute;
    run(&init, &c).unwrap()
}

/// Non-convex, non-mean-convex radial profile `1 + 0.4 cos(2 theta)`.
fn peanut() -> Shape {
    let values = (0..128).map(|k| 1.0 + 0.4 * (2.0 * std::f64::consts::TAU * k as f64 / 128.0).cos()).collect();
    Shape::RadialValues { values }
}

#[test]
fn wulff_check_accepts_a_randers_wulff_run() {
    let rec = radial_run(randers(), Shape::Wulff { radius: 1.0 }, 0.45);
    let res = check_wulff_selfsimilar(&rec).unwrap();
    assert!(res.pass, "{res:?}");
    let fit = res.detail("fitted_extinction_time").unwrap();
    assert!((fit.observed - 0.5).abs() <= 0.005);
}

#[test]
fn wulff_check_rejects_an_ellipse() {
    let rec = radial_run(euclid(), ellipse(), 0.05);
    assert!(matches!(check_wulff_selfsimilar(&rec), Err(CheckError::WrongInitialData { .. })));
}

#[test]
fn area_identity_holds_for_euclidean_and_randers_ellipses() {
    for norm in [euclid(), randers()] {
        let rec = radial_run(norm, ellipse(), 0.3);
        let res = check_area_identity(&rec).unwrap();
        assert!(res.pass, "{res:?}");
    }
}

#[test]
fn area_identity_flags_a_tampered_record() {
    let mut rec = radial_run(euclid(), ellipse(), 0.1);
    let k = rec.diagnostics.len() / 2;
    rec.diagnostics[k].area += 0.1;
    let res = check_area_identity(&rec).unwrap();
    assert!(!res.pass);
    assert!(!res.detail("area_increase").unwrap().pass);
}

#[test]
fn area_identity_needs_ten_states() {
    let rec = parametric_run(euclid(), ellipse(), 5, true);
    assert_eq!(check_area_identity(&rec), Err(CheckError::InsufficientSnapshots { found: 6, needed: 10 }));
}

#[test]
fn hmin_bound_holds_on_the_ellipse() {
    let rec = radial_run(euclid(), ellipse(), 0.3);
    let res = check_hmin_bound(&rec).unwrap();
    assert!(res.pass, "{res:?}");
}

#[test]
fn hmin_bound_is_tight_on_the_circle() {
    let rec = radial_run(euclid(), Shape::Circle { radius: 1.0 }, 0.4);
    let res = check_hmin_bound(&rec).unwrap();
    assert!(res.pass, "{res:?}");
    assert!((res.observed - 1.0).abs() < 5e-3, "{}", res.observed);
}

#[test]
fn non_convex_data_is_rejected() {
    let rec = radial_run(euclid(), peanut(), 0.01);
    assert!(matches!(check_hmin_bound(&rec), Err(CheckError::NotMeanConvex { .. })));
    assert!(matches!(check_convexity(&rec), Err(CheckError::NotConvexInitially { .. })));
}

#[test]
fn convexity_is_preserved_on_randers_ellipse() {
    let rec = radial_run(randers(), ellipse(), 0.3);
    let res = check_convexity(&rec).unwrap();
    assert!(res.pass, "{res:?}");
}

#[test]
fn comparison_with_enclosing_spheres() {
    let mid = radial_run(euclid(), ellipse(), 0.3);
    let inner = radial_run(euclid(), Shape::Circle { radius: 0.9 }, 0.35);
    let outer = radial_run(euclid(), Shape::Circle { radius: 2.2 }, 0.35);
    let res = check_comparison(&inner, &outer, &mid).unwrap();
    assert!(res.pass, "{res:?}");
}

#[test]
fn comparison_gaps_between_concentric_wulff_spheres() {
    let mid = radial_run(randers(), Shape::Wulff { radius: 1.0 }, 0.1);
    let inner = radial_run(randers(), Shape::Wulff { radius: 0.5 }, 0.12);
    let outer = radial_run(randers(), Shape::Wulff { radius: 1.5 }, 0.12);
    let res = check_comparison(&inner, &outer, &mid).unwrap();
    assert!(res.pass, "{res:?}");
    // gaps of concentric spheres are sqrt(a^2 - 2t) - sqrt(b^2 - 2t)
    let t = mid.halt_time();
    let q: Vec<f64> = mid.snapshots.last().unwrap().r.clone().unwrap();
    let r_out = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exact = (2.25 - 2.0 * t).sqrt() - (1.0 - 2.0 * t).sqrt();
    let outer_r = (2.25 - 2.0 * t).sqrt();
    assert!(((outer_r - r_out) - exact).abs() <= 1e-4);
}

#[test]
fn comparison_rejects_crossing_surfaces() {
    let mid = radial_run(euclid(), ellipse(), 0.05);
    let inner = radial_run(euclid(), Shape::Circle { radius: 1.5 }, 0.1);
    let outer = radial_run(euclid(), Shape::Circle { radius: 2.2 }, 0.1);
    assert!(matches!(check_comparison(&inner, &outer, &mid), Err(CheckError::NotNestedInitially { .. })));
}

#[test]
fn evolution_identities_on_euclidean_ellipse() {
    let rec = parametric_run(euclid(), ellipse(), 20, false);
    let res = check_evolution_identities(&rec).unwrap();
    assert!(res.pass, "{res:?}");
    assert!(res.detail("cartan_term_max").unwrap().observed < 1e-12);
}

#[test]
fn evolution_identities_on_randers_ellipse_exercise_the_cartan_term() {
    let rec = parametric_run(randers(), ellipse(), 20, false);
    let res = check_evolution_identities(&rec).unwrap();
    assert!(res.pass, "{res:?}");
    assert!(res.detail("cartan_term_max").unwrap().observed > 1e-3);
}

#[test]
fn evolution_identities_preconditions() {
    let rec = parametric_run(euclid(), ellipse(), 5, true);
    assert_eq!(check_evolution_identities(&rec), Err(CheckError::RedistributionActive));
    let rec = radial_run(euclid(), ellipse(), 0.01);
    assert!(matches!(check_evolution_identities(&rec), Err(CheckError::UnsupportedScheme(_))));
}

#[test]
fn circle_passes_every_flow_check() {
    let init = radial_state(euclid(), origin(), &Shape::Circle { radius: 1.0 }, 256, 1).unwrap();
    let rec = run(&init, &FlowConfig::new(Scheme::RadialGraph, 0.45)).unwrap();
    let inner = radial_run(euclid(), Shape::Circle { radius: 0.5 }, 0.45);
    let outer = radial_run(euclid(), Shape::Circle { radius: 1.5 }, 0.45);
    let results = [
        check_wulff_selfsimilar(&rec).unwrap(),
        check_area_identity(&rec).unwrap(),
        check_hmin_bound(&rec).unwrap(),
        check_convexity(&rec).unwrap(),
        check_comparison(&inner, &outer, &rec).unwrap(),
    ];
    for r in &results {
        assert!(r.pass, "{r:?}");
    }
    // the extinction time fitted from the scale law matches n / (2 H_min(0)^2)
    let t_fit = results[0].detail("fitted_extinction_time").unwrap().observed;
    let h0 = rec.diagnostics[0].h_min;
    assert!((t_fit - 0.5 / (h0 * h0)).abs() <= 0.01 * t_fit);
}

#[test]
fn circle_dissipation_matches_closed_form() {
    // sum H^2 dmu = 2 pi / r on a circle of radius r
    let rec = radial_run(euclid(), Shape::Circle { radius: 1.0 }, 0.4);
    for row in &rec.diagnostics {
        let r = 0.5 * (row.r_min + row.r_max);
        assert!((row.h2_integral - std::f64::consts::TAU / r).abs() <= 1e-9 * row.h2_integral);
    }
}

#[test]
fn evolution_identity_on_the_circle() {
    let rec = parametric_run(euclid(), Shape::Circle { radius: 1.0 }, 20, false);
    let res = check_evolution_identities(&rec).unwrap();
    assert!(res.detail("metric_identity_error").unwrap().observed <= 1e-3, "{res:?}");
    assert_eq!(res.detail("cartan_term_max").unwrap().observed, 0.0);
}

#[test]
fn convexity_grows_on_the_euclidean_ellipse() {
    let rec = radial_run(euclid(), ellipse(), 0.3);
    assert!(check_convexity(&rec).unwrap().pass);
    assert!((rec.diagnostics[0].k_min - 0.25).abs() <= 1e-4);
    assert!(rec.diagnostics.last().unwrap().k_min > 0.25);
}

#[test]
fn checks_are_pure_functions_of_records() {
    let rec = radial_run(randers(), ellipse(), 0.1);
    assert_eq!(check_area_identity(&rec), check_area_identity(&rec));
    assert_eq!(check_hmin_bound(&rec), check_hmin_bound(&rec));
    let again = radial_run(randers(), ellipse(), 0.1);
    assert_eq!(check_convexity(&rec), check_convexity(&again));
}
