use renlab::geometry::{components, Which};
use renlab::models::DEFAULT_HM_THETA_PERIOD;
use renlab::surface::*;
use renlab::{horowitz_myers, hyperbolic3, hyperbolic3_anchored, Geometry3};
use std::f64::consts::PI;

fn small() -> SolveSpec {
    SolveSpec {
        n_cheb: 21,
        n_theta: 16,
        ..SolveSpec::default()
    }
}

#[test]
fn hemisphere_chart_pulls_back_fg_metric() {
    let model = hyperbolic3_anchored(PI / 3.0);
    let chart = Chart::for_model(&model).unwrap();
    let q = [0.31, -0.42, 0.17];
    // Jacobian of q ↦ (x, θ, s) by central differences.
    let e = 1e-6;
    let mut jac = [[0.0; 3]; 3];
    for k in 0..3 {
        let mut a = q;
        let mut b = q;
        a[k] += e;
        b[k] -= e;
        let (fa, fb) = (chart.to_fg(a), chart.to_fg(b));
        for i in 0..3 {
            jac[i][k] = (fa[i] - fb[i]) / (2.0 * e);
        }
    }
    let fg = chart.to_fg(q);
    let g = renlab::autodiff::unpack(&model.gbar(fg));
    let c = renlab::autodiff::unpack(&components(&chart, q, Which::Compactified));
    for a in 0..3 {
        for b in 0..3 {
            let mut s = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    s += jac[i][a] * g[(i, j)] * jac[j][b];
                }
            }
            assert!((s - c[(a, b)]).abs() < 1e-7, "{a}{b}: {s} vs {}", c[(a, b)]);
        }
    }
    assert!((chart.inv_v(q) - model.inv_v(fg)).abs() < 1e-13);
}

#[test]
fn collar_chart_pulls_back_fg_metric() {
    let model = horowitz_myers(DEFAULT_HM_THETA_PERIOD, 2.0).unwrap();
    let chart = Chart::for_model(&model).unwrap();
    let q = [0.21, 0.33, 0.4];
    let e = 1e-6;
    let mut jac = [[0.0; 3]; 3];
    for k in 0..3 {
        let mut a = q;
        let mut b = q;
        a[k] += e;
        b[k] -= e;
        let (fa, fb) = (chart.to_fg(a), chart.to_fg(b));
        for i in 0..3 {
            jac[i][k] = (fa[i] - fb[i]) / (2.0 * e);
        }
    }
    let fg = chart.to_fg(q);
    let g = renlab::autodiff::unpack(&model.gbar(fg));
    let c = renlab::autodiff::unpack(&components(&chart, q, Which::Compactified));
    for a in 0..3 {
        for b in 0..3 {
            let mut s = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    s += jac[i][a] * g[(i, j)] * jac[j][b];
                }
            }
            assert!((s - c[(a, b)]).abs() < 1e-7, "{a}{b}: {s} vs {}", c[(a, b)]);
        }
    }
    assert!((chart.inv_v(q) - model.inv_v(fg)).abs() < 1e-13);
}

#[test]
fn hm_slice_is_minimal() {
    let model = horowitz_myers(DEFAULT_HM_THETA_PERIOD, 2.0).unwrap();
    let curve = BoundaryCurve::constant(0.3, DEFAULT_HM_THETA_PERIOD);
    let s = solve_minimal_graph(&model, &curve, &small()).unwrap();
    assert!(s.converged);
    assert!(s.max_h < 1e-8, "{}", s.max_h);
    let e = s.expansion.as_ref().unwrap();
    assert!(e.u3.iter().all(|u| u.abs() < 1e-8));
}

#[test]
fn hyperbolic_cap_recovered_from_perturbed_guess() {
    let alpha = PI / 3.0;
    let model = hyperbolic3_anchored(alpha);
    let curve = BoundaryCurve::constant(0.0, 2.0 * PI);
    let spec = small();
    let exact = solve_minimal_graph(&model, &curve, &spec).unwrap();
    assert!(exact.converged);
    let target = alpha - PI / 2.0;
    assert!(exact.height.iter().all(|h| (h - target).abs() < 1e-9));
    let grid = exact.grid();
    let guess: Vec<f64> = (0..grid.len())
        .map(|n| {
            let r = grid.r(n / grid.n_theta);
            target + 0.05 * (1.0 - r * r)
        })
        .collect();
    let s = solve_minimal_graph_from(&model, &curve, &spec, Some(&guess)).unwrap();
    assert!(s.converged, "{:?}", s.residual_history);
    let err = s.height.iter().map(|h| (h - target).abs()).fold(0.0, f64::max);
    assert!(err < 1e-9, "{err}");
    let e = s.expansion.as_ref().unwrap();
    for (d, k) in e.defect.iter().zip(&e.kappa) {
        assert!(d.abs() < 1e-6, "defect {d}");
        assert!((k - 1.0 / alpha.tan()).abs() < 1e-6);
    }
}

#[test]
fn latitude_curvature_is_cot() {
    for alpha in [PI / 4.0, PI / 3.0, 2.0 * PI / 3.0] {
        let model = hyperbolic3_anchored(alpha);
        let curve = BoundaryCurve::constant(0.0, 2.0 * PI);
        let k = geodesic_curvature(&model, &curve, 0.7);
        assert!((k - 1.0 / alpha.tan()).abs() < 1e-7, "{alpha}: {k}");
    }
}

#[test]
fn perturbed_curve_solves() {
    let model = hyperbolic3_anchored(PI / 3.0);
    let curve = BoundaryCurve::perturbed(0.0, 0.05, 2, 2.0 * PI);
    let s = solve_minimal_graph(&model, &curve, &small()).unwrap();
    assert!(s.converged, "{:?}", s.residual_history);
    assert!(s.max_h < 1e-7, "{}", s.max_h);
    let e = s.expansion.as_ref().unwrap();
    let worst = e.defect.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    assert!(worst < 1e-4, "defect {worst}");
    let _ = hyperbolic3();
}

#[test]
fn csv_round_trip_is_exact() {
    let model = hyperbolic3_anchored(PI / 3.0);
    let curve = BoundaryCurve::perturbed(0.0, 0.05, 2, 2.0 * PI);
    let spec = small();
    let s = solve_minimal_graph(&model, &curve, &spec).unwrap();
    let text = s.to_csv().unwrap();
    let back = GraphSurface::from_csv(&model, curve, &spec, &text).unwrap();
    assert_eq!(back.height, s.height);
}
