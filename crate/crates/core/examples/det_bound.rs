//! Lower bound for the area element near the boundary, literal and with the
//! lowest-eigenvalue factor.

use renlab::models::DEFAULT_HM_THETA_PERIOD;
use renlab::surface::{det_bound, solve_minimal_graph, BoundaryCurve, SolveSpec};
use renlab::{horowitz_myers, hyperbolic3_anchored};
use std::f64::consts::PI;

fn main() -> renlab::Result<()> {
    let cases = [
        ("great circle", hyperbolic3_anchored(PI / 2.0), BoundaryCurve::constant(0.0, 2.0 * PI)),
        ("perturbed disk", hyperbolic3_anchored(PI / 3.0), BoundaryCurve::perturbed(0.0, 0.05, 2, 2.0 * PI)),
        ("HM slice", horowitz_myers(DEFAULT_HM_THETA_PERIOD, 2.0)?, BoundaryCurve::constant(0.3, DEFAULT_HM_THETA_PERIOD)),
    ];
    for (name, model, curve) in cases {
        let f = solve_minimal_graph(&model, &curve, &SolveSpec::default())?;
        let d = det_bound(&f, 0.05)?;
        println!(
            "{name:<15} {} points  literal margin {:+.3e} ({})  corrected margin {:+.3e} ({})",
            d.points, d.literal_margin, d.literal_holds, d.corrected_margin, d.corrected_holds
        );
    }
    Ok(())
}
