//! Renormalized area of totally geodesic disks by cutoff extrapolation, by
//! direct regularization and by the Gauss–Bonnet form.

use renlab::renarea::{rena_fit, renarea_closed_form, DEFAULT_LADDER};
use renlab::surface::{solve_minimal_graph, BoundaryCurve, SolveSpec};
use renlab::hyperbolic3_anchored;
use std::f64::consts::PI;

fn main() -> renlab::Result<()> {
    println!("target -2pi = {:.10}", -2.0 * PI);
    for alpha in [PI / 2.0, PI / 3.0, PI / 4.0] {
        let model = hyperbolic3_anchored(alpha);
        let f = solve_minimal_graph(&model, &BoundaryCurve::constant(0.0, 2.0 * PI), &SolveSpec::default())?;
        let p = f.param();
        let fit = rena_fit(&p, &DEFAULT_LADDER)?;
        let cf = renarea_closed_form(&p, 1)?;
        println!(
            "alpha {alpha:.4}: L {:.10}  fit {:.10}  direct {:.10}  closed form {:.10}",
            fit.length, fit.pinned_c, fit.direct, cf.value
        );
    }
    Ok(())
}
