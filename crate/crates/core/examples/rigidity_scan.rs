//! RenA profile over the circles {s = const} of the Horowitz–Myers boundary.

use renlab::horowitz_myers;
use renlab::models::DEFAULT_HM_THETA_PERIOD;
use renlab::rigidity::profile_scan;
use renlab::surface::SolveSpec;

fn main() -> renlab::Result<()> {
    let model = horowitz_myers(DEFAULT_HM_THETA_PERIOD, 2.0)?;
    let spec = SolveSpec { n_cheb: 21, n_theta: 16, ..SolveSpec::default() };
    let r = profile_scan(&model, 16, &spec)?;
    for p in &r.samples {
        println!("s {:.4}  RenA {:+.10}  Neumann {:+.3e}", p.s, p.rena.unwrap_or(f64::NAN), p.neumann);
    }
    print!("{}", r.summary());
    Ok(())
}
