//! First and second derivatives of RenA along the flow against the
//! boundary-term formulas.

use renlab::flow::{first_variation_check, second_variation_check, Generator, VARIANT_NAMES};
use renlab::hyperbolic3_anchored;
use renlab::surface::{solve_minimal_graph, BoundaryCurve, SolveSpec};
use std::f64::consts::PI;

fn main() -> renlab::Result<()> {
    let model = hyperbolic3_anchored(PI / 3.0);
    let curve = BoundaryCurve::perturbed(0.0, 0.05, 2, 2.0 * PI);
    let f0 = solve_minimal_graph(&model, &curve, &SolveSpec::default())?;
    let gen = Generator::General { a0: 1.0, cos: vec![0.0, 0.5], sin: vec![] };
    for g in [Generator::Static, gen] {
        let fv = first_variation_check(&f0, &g, 1e-2, 0.02)?;
        println!(
            "first variation {:?}: FD {:.8} (order {:.3})  formula {:.8}  rel err {:.2e}",
            g, fv.fd.value, fv.fd.order, fv.formula, fv.rel_error
        );
    }
    let sv = second_variation_check(&f0, 1e-2, 0.05, 1e-4)?;
    println!("second variation FD {:.8}", sv.fd.value);
    for k in 0..4 {
        println!("  {:<12} {:+.8}  rel err {:.3}", VARIANT_NAMES[k], sv.variants[k], sv.rel_errors[k]);
    }
    Ok(())
}
