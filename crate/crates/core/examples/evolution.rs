//! Evolution of H along the static flow and the Riccati inequality.

use renlab::flow::evolution_check;
use renlab::hyperbolic3_anchored;
use renlab::surface::{solve_minimal_graph, BoundaryCurve, SolveSpec};
use std::f64::consts::PI;

fn main() -> renlab::Result<()> {
    let model = hyperbolic3_anchored(PI / 3.0);
    let curve = BoundaryCurve::perturbed(0.0, 0.05, 2, 2.0 * PI);
    let spec = SolveSpec { n_cheb: 21, n_theta: 16, ..SolveSpec::default() };
    let f0 = solve_minimal_graph(&model, &curve, &spec)?;
    for t0 in [0.0, 0.05, 0.1] {
        let r = evolution_check(&f0, t0, 1e-2, 0.05)?;
        println!(
            "t {t0:.2}: {} nodes, residual {:.2e}, Riccati margin {:+.2e}, sharp margin {:+.2e}, max|H| {:.3e}",
            r.points, r.evolution_residual, r.riccati_margin, r.riccati_sharp_margin, r.max_h
        );
    }
    Ok(())
}
