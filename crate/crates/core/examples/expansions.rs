//! Boundary expansions of 1/V and the compactified metric on hyperbolic
//! space and the Horowitz–Myers soliton.

use renlab::models::DEFAULT_HM_THETA_PERIOD;
use renlab::series::{conformal_metric_expansion, potential_expansion, sample_points, wang_mass, LadderSpec};
use renlab::{boundary_data, horowitz_myers, hyperbolic3};

fn main() -> renlab::Result<()> {
    let ladder = LadderSpec::default();
    for model in [hyperbolic3(), horowitz_myers(DEFAULT_HM_THETA_PERIOD, 2.0)?] {
        let pts = sample_points(&model, 2, 2);
        let pot = potential_expansion(&model, 4, &ladder, &pts)?;
        let met = conformal_metric_expansion(&model, 3, &ladder, &pts)?;
        println!("{}", model.name());
        println!("  order  measured 1/V coeff   predicted");
        for k in 0..=4 {
            println!("  {k}      {:>+.10}      {:>+.10}", pot.measured.get(k, 0, 0), pot.predicted.get(k, 0, 0));
        }
        println!("  metric discrepancy per order {:?}", met.discrepancy);
        let data = boundary_data(&model)?;
        let (t, s) = pts[0];
        println!("  h3 at ({t:.3}, {s:.3}) = {:?}", data.h3(t, s));
        println!("  mass {:.10}", wang_mass(&data));
    }
    Ok(())
}
