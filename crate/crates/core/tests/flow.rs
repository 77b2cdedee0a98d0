use renlab::flow::*;
use renlab::models::DEFAULT_HM_THETA_PERIOD;
use renlab::renarea::DEFAULT_LADDER;
use renlab::surface::*;
use renlab::{horowitz_myers, hyperbolic3_anchored};
use std::f64::consts::PI;

fn spec() -> SolveSpec {
    SolveSpec {
        n_cheb: 21,
        n_theta: 16,
        ..SolveSpec::default()
    }
}

#[test]
fn hm_slice_translates_in_s() {
    let model = horowitz_myers(DEFAULT_HM_THETA_PERIOD, 2.0).unwrap();
    let curve = BoundaryCurve::constant(0.3, DEFAULT_HM_THETA_PERIOD);
    let f0 = solve_minimal_graph(&model, &curve, &spec()).unwrap();
    for mode in [TransportMode::Geodesic, TransportMode::Renormalized] {
        let s = flow_surface(&f0.param(), &Generator::Static, mode, 0.2).unwrap();
        for (p, q) in s.pts.iter().zip(&f0.param().pts) {
            assert!((p[2] - q[2] - 0.2).abs() < 1e-12);
            assert!((p[0] - q[0]).abs() < 1e-12 && (p[1] - q[1]).abs() < 1e-12);
        }
    }
    let fam = flow_integrate(&f0, &Generator::Static, TransportMode::Geodesic, &uniform_times(0.2, 4)).unwrap();
    let curve = rena_curve(&fam, Some(&DEFAULT_LADDER));
    assert!(curve.spread < 1e-10, "{}", curve.spread);
    assert!(curve.divergence_mismatch < 1e-4, "{}", curve.divergence_mismatch);
}

#[test]
fn cap_flow_keeps_rena() {
    let model = hyperbolic3_anchored(PI / 3.0);
    let curve = BoundaryCurve::constant(0.0, 2.0 * PI);
    let f0 = solve_minimal_graph(&model, &curve, &spec()).unwrap();
    let fam = flow_integrate(&f0, &Generator::Static, TransportMode::Renormalized, &[0.0, 0.1, -0.1]).unwrap();
    let c = rena_curve(&fam, None);
    for p in &c.points {
        assert!((p.rena + 2.0 * PI).abs() < 1e-8, "{}", p.rena);
    }
    // The boundary moves by the h-normal flow: latitude α + t.
    for p in &c.points {
        assert!((p.length_h - 2.0 * PI * (PI / 3.0 + p.t).sin()).abs() < 1e-9);
    }
}

#[test]
fn transport_modes_agree_for_static_flow() {
    let model = hyperbolic3_anchored(PI / 3.0);
    let curve = BoundaryCurve::perturbed(0.0, 0.05, 2, 2.0 * PI);
    let f0 = solve_minimal_graph(&model, &curve, &spec()).unwrap();
    assert!(transport_mode_gap(&f0, 0.05).unwrap() < 1e-8);
}

#[test]
fn first_variation_on_perturbed_graph() {
    let model = hyperbolic3_anchored(PI / 3.0);
    let curve = BoundaryCurve::perturbed(0.0, 0.05, 2, 2.0 * PI);
    let f0 = solve_minimal_graph(&model, &curve, &spec()).unwrap();
    let fv = first_variation_check(&f0, &Generator::Static, 1e-2, 0.02).unwrap();
    assert!(fv.matches, "{fv:?}");
    assert!(fv.fd.order > 1.8, "{}", fv.fd.order);
}

#[test]
fn general_generator_scales_first_variation() {
    let model = hyperbolic3_anchored(PI / 3.0);
    let curve = BoundaryCurve::perturbed(0.0, 0.05, 2, 2.0 * PI);
    let f0 = solve_minimal_graph(&model, &curve, &spec()).unwrap();
    let gen = Generator::General { a0: 1.0, cos: vec![0.0, 0.5], sin: vec![] };
    let fv = first_variation_check(&f0, &gen, 1e-2, 0.02).unwrap();
    assert!(fv.matches, "{fv:?}");
}

#[test]
fn evolution_laws_hold() {
    let model = hyperbolic3_anchored(PI / 3.0);
    let curve = BoundaryCurve::perturbed(0.0, 0.05, 2, 2.0 * PI);
    let f0 = solve_minimal_graph(&model, &curve, &spec()).unwrap();
    for t0 in [0.0, 0.1] {
        let r = evolution_check(&f0, t0, 1e-2, 0.05).unwrap();
        assert!(r.evolution_residual < 1e-4, "{r:?}");
        assert!(r.riccati_margin > -1e-6, "{r:?}");
        assert!(r.riccati_sharp_margin > -1e-6, "{r:?}");
    }
}
