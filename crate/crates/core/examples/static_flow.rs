//! RenA along the static flow: constant on the Horowitz–Myers slice,
//! varying for a perturbed disk in hyperbolic space.

use renlab::flow::{flow_integrate, rena_curve, uniform_times, Generator, TransportMode};
use renlab::models::DEFAULT_HM_THETA_PERIOD;
use renlab::renarea::DEFAULT_LADDER;
use renlab::surface::{solve_minimal_graph, BoundaryCurve, SolveSpec};
use renlab::{horowitz_myers, hyperbolic3_anchored};
use std::f64::consts::PI;

fn main() -> renlab::Result<()> {
    let spec = SolveSpec { n_cheb: 21, n_theta: 16, ..SolveSpec::default() };
    let cases = [
        ("HM slice", horowitz_myers(DEFAULT_HM_THETA_PERIOD, 2.0)?, BoundaryCurve::constant(0.3, DEFAULT_HM_THETA_PERIOD)),
        ("perturbed disk", hyperbolic3_anchored(PI / 3.0), BoundaryCurve::perturbed(0.0, 0.05, 2, 2.0 * PI)),
    ];
    for (name, model, curve) in cases {
        let f0 = solve_minimal_graph(&model, &curve, &spec)?;
        let fam = flow_integrate(&f0, &Generator::Static, TransportMode::Geodesic, &uniform_times(0.2, 4))?;
        let c = rena_curve(&fam, Some(&DEFAULT_LADDER));
        println!("{name}");
        for p in &c.points {
            println!("  t {:.3}  RenA {:+.10}  L {:.8}", p.t, p.rena, p.length_h);
        }
        println!("  spread {:.3e}, max |1/eps coeff - L| {:.3e}", c.spread, c.divergence_mismatch);
    }
    Ok(())
}
