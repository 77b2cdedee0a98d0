//! Minimal graph over a perturbed latitude circle in hyperbolic space and
//! its boundary expansion.

use renlab::hyperbolic3_anchored;
use renlab::surface::{solve_minimal_graph, BoundaryCurve, SolveSpec};
use std::f64::consts::PI;

fn main() -> renlab::Result<()> {
    let model = hyperbolic3_anchored(PI / 3.0);
    let curve = BoundaryCurve::perturbed(0.0, 0.05, 2, 2.0 * PI);
    let f = solve_minimal_graph(&model, &curve, &SolveSpec::default())?;
    println!("converged {} after {} Newton steps", f.converged, f.residual_history.len());
    for (k, r) in f.residual_history.iter().enumerate() {
        println!("  iterate {k}: max|VH| {r:.3e}");
    }
    println!("max|H| {:.3e}", f.max_h);
    if let Some(e) = &f.expansion {
        println!("   theta        u3           kappa        u2+kappa/2");
        for j in (0..e.theta.len()).step_by(4) {
            println!("  {:.4}  {:+.6e}  {:+.6e}  {:+.3e}", e.theta[j], e.u3[j], e.kappa[j], e.defect[j]);
        }
        println!("integral of u3 {:.8}", e.u3_integral);
    }
    Ok(())
}
