//! Randomized checks of geometric and scheme invariants.

use anisoflow::kernel::{MinkowskiNorm, Vector};
use anisoflow::schemes::{run, FlowConfig, Scheme};
use anisoflow::surface::{compute_geometry, parametric_state, radial_state, Shape, SurfaceState};
use proptest::prelude::*;

fn any_norm() -> impl Strategy<Value = MinkowskiNorm> {
    prop_oneof![
        Just(MinkowskiNorm::euclidean(2).unwrap()),
        (0.0..0.6f64, 0.0..std::f64::consts::TAU).prop_map(|(m, a)| MinkowskiNorm::randers(&[
            m * a.cos(),
            m * a.sin()
        ])
        .unwrap()),
        (0.2..1.0f64).prop_map(|e| MinkowskiNorm::lp_smooth(2, 4, e).unwrap()),
    ]
}

fn any_ellipse() -> impl Strategy<Value = Shape> {
    (1.0..2.5f64, 0.6..1.4f64).prop_map(|(a, b)| Shape::Ellipse { semi_axes: vec![a, b] })
}

fn states(norm: MinkowskiNorm, shape: &Shape) -> [SurfaceState; 2] {
    let o = Vector::new2(0.0, 0.0);
    [radial_state(norm, o, shape, 128, 1).unwrap(), parametric_state(norm, o, shape, 128).unwrap()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn conormal_and_normal_are_consistent(norm in any_norm(), shape in any_ellipse()) {
        for state in states(norm, &shape) {
            let cache = compute_geometry(&state).unwrap();
            for p in &cache.points {
                let xt = p.frame.d1[0];
                let annihilation = p.conormal_raw.pair(&xt).abs() / (p.conormal_scale * xt.euclidean_norm());
                prop_assert!(annihilation <= 1e-8);
                prop_assert!((norm.dual_norm(&p.conormal).unwrap() - 1.0).abs() <= 1e-10);
                prop_assert!((norm.eval(&p.normal).unwrap() - 1.0).abs() <= 1e-10);
                let g = norm.metric(&p.normal).unwrap();
                prop_assert!(g.bilinear(p.normal.as_slice(), xt.as_slice()).abs() <= 1e-8 * xt.euclidean_norm());
            }
        }
    }

    #[test]
    fn relabelling_permutes_curvatures(norm in any_norm(), shape in any_ellipse(), shift in 1usize..127) {
        let [_, curve] = states(norm, &shape);
        let mut pts = curve.positions();
        pts.rotate_left(shift);
        let rolled = SurfaceState::parametric(norm, Vector::new2(0.0, 0.0), pts).unwrap();
        let mut a = compute_geometry(&curve).unwrap().mean_curvatures();
        let b = compute_geometry(&rolled).unwrap().mean_curvatures();
        a.rotate_left(shift);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0));
        }
    }

    #[test]
    fn mean_convex_radial_graphs_contract(norm in any_norm(), shape in any_ellipse()) {
        let [init, _] = states(norm, &shape);
        let mut c = FlowConfig::new(Scheme::RadialGraph, 1.0);
        c.max_steps = Some(30);
        c.snapshot_every = 1;
        let rec = run(&init, &c).unwrap();
        prop_assert!(rec.diagnostics.iter().all(|d| d.h_min >= 0.0));
        for w in rec.snapshots.windows(2) {
            let (r0, r1) = (w[0].r.as_ref().unwrap(), w[1].r.as_ref().unwrap());
            prop_assert!(r0.iter().zip(r1).all(|(a, b)| b - a <= 1e-10));
        }
    }

    #[test]
    fn area_never_increases(norm in any_norm(), shape in any_ellipse()) {
        for init in states(norm, &shape) {
            let scheme = if init.grid().is_some() { Scheme::RadialGraph } else { Scheme::ParametricCurve };
            let mut c = FlowConfig::new(scheme, 1.0);
            c.max_steps = Some(30);
            let rec = run(&init, &c).unwrap();
            prop_assert!(rec.diagnostics.windows(2).all(|w| w[1].area <= w[0].area + 1e-10));
        }
    }
}
