use renlab::models::DEFAULT_HM_THETA_PERIOD;
use renlab::renarea::*;
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
fn hyperbolic_caps_have_minus_two_pi() {
    for alpha in [PI / 2.0, PI / 4.0, PI / 3.0] {
        let model = hyperbolic3_anchored(alpha);
        let curve = BoundaryCurve::constant(0.0, 2.0 * PI);
        let s = solve_minimal_graph(&model, &curve, &spec()).unwrap();
        let p = s.param();
        let fit = rena_fit(&p, &DEFAULT_LADDER).unwrap();
        let l = 2.0 * PI * alpha.sin();
        assert!((fit.length - l).abs() < 1e-10, "{}", fit.length);
        assert!((fit.direct + 2.0 * PI).abs() < 1e-8, "{alpha}: {}", fit.direct);
        assert!((fit.pinned_c + 2.0 * PI).abs() < 1e-8, "{}", fit.pinned_c);
        assert!((fit.free_inv - l).abs() < 1e-8, "{}", fit.free_inv);
        let cf = renarea_closed_form(&p, 1).unwrap();
        assert!((cf.value + 2.0 * PI).abs() < 1e-6, "{:?}", cf);
    }
}

#[test]
fn hm_slice_area_matches_exact_profile() {
    let p_theta = DEFAULT_HM_THETA_PERIOD;
    let model = horowitz_myers(p_theta, 2.0).unwrap();
    let curve = BoundaryCurve::constant(0.4, p_theta);
    let s = solve_minimal_graph(&model, &curve, &spec()).unwrap();
    let p = s.param();
    for eps in [0.05, 0.01] {
        let a = area_truncated(&p, eps).unwrap();
        let exact = p_theta / eps - p_theta + p_theta * eps * eps / 6.0;
        // r(ε) = (1 + ε³/4)^{2/3}/ε to all orders.
        let r = (1.0 + eps.powi(3) / 4.0).powf(2.0 / 3.0) / eps;
        let exact_all = p_theta * (r - 1.0);
        assert!((a - exact_all).abs() < 1e-9, "{a} vs {exact_all}");
        assert!((a - exact).abs() < 1e-3 * eps);
    }
    assert!((renormalized_area(&p).unwrap() + p_theta).abs() < 1e-10);
}

#[test]
fn equatorial_disk_truncated_area() {
    let model = hyperbolic3_anchored(PI / 2.0);
    let s = solve_minimal_graph(&model, &BoundaryCurve::constant(0.0, 2.0 * PI), &spec()).unwrap();
    let p = s.param();
    for eps in [0.1, 0.04, 0.007] {
        // ∫_ε^2 2π(1 − x²/4)/x² dx in the ball model.
        let exact = 2.0 * PI * (1.0 / eps - 1.0 + eps / 4.0);
        let a = area_truncated(&p, eps).unwrap();
        assert!((a - exact).abs() < 1e-9 * exact, "{eps}: {a} vs {exact}");
    }
}

#[test]
fn fit_is_stable_under_ladder_changes() {
    let model = hyperbolic3_anchored(PI / 3.0);
    let curve = BoundaryCurve::perturbed(0.0, 0.05, 2, 2.0 * PI);
    let p = solve_minimal_graph(&model, &curve, &spec()).unwrap().param();
    let base = rena_fit(&p, &DEFAULT_LADDER).unwrap().pinned_c;
    let shifted: Vec<f64> = DEFAULT_LADDER.iter().map(|e| e * 2f64.sqrt()).collect();
    let dense: Vec<f64> = (0..12).map(|k| 0.04 * (0.007f64 / 0.04).powf(k as f64 / 11.0)).collect();
    for ladder in [shifted, dense] {
        let c = rena_fit(&p, &ladder).unwrap().pinned_c;
        assert!((c - base).abs() < 1e-4, "{c} vs {base}");
    }
    let direct = renormalized_area(&p).unwrap();
    assert!((base - direct).abs() < 1e-5, "{base} vs {direct}");
}
