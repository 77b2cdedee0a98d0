use renlab::field::{PeriodicGrid, TensorField2, TrigField2};
use renlab::models::{warped_torus, DEFAULT_HM_THETA_PERIOD};
use renlab::rigidity::profile_scan;
use renlab::surface::SolveSpec;
use renlab::{horowitz_myers, hyperbolic3};

fn spec() -> SolveSpec {
    SolveSpec {
        n_cheb: 15,
        n_theta: 12,
        ..SolveSpec::default()
    }
}

#[test]
fn hm_profile_is_flat() {
    let model = horowitz_myers(DEFAULT_HM_THETA_PERIOD, 2.0).unwrap();
    let rep = profile_scan(&model, 8, &spec()).unwrap();
    assert_eq!(rep.failures, 0);
    assert!(rep.spread.unwrap() < 1e-10);
    assert!(rep.second_differences.iter().all(|d| d.abs() < 1e-8));
    assert!(rep.total.abs() < 1e-12);
    assert!(rep.neumann_mismatch < 1e-6, "{}", rep.neumann_mismatch);
    let r0 = rep.samples[0].rena.unwrap();
    assert!((r0 + DEFAULT_HM_THETA_PERIOD).abs() < 1e-9);
}

#[test]
fn formal_torus_gets_flags_only() {
    let grid = PeriodicGrid::new(8, 8, 2.0, 3.0);
    let f = TrigField2::constant(grid, 1.0);
    // tr h₃ + h₃(∂s,∂s) = 2·h₃,ss + h₃,θθ = −0.2 < 0.
    let h3 = TensorField2::constant(grid, 0.2, 0.0, -0.2);
    let model = warped_torus(f, h3).unwrap();
    let rep = profile_scan(&model, 4, &spec()).unwrap();
    assert!(rep.samples.iter().all(|p| p.rena.is_none()));
    assert!(!rep.total_nonnegative);
    assert!(rep.circles_nonpositive);
    assert!(rep.neumann_mismatch < 1e-6, "{}", rep.neumann_mismatch);
}

#[test]
fn sphere_boundary_is_rejected() {
    assert!(profile_scan(&hyperbolic3(), 4, &spec()).is_err());
}
