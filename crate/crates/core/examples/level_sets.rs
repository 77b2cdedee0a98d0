//! Mean curvature of the level sets {x = ε} fitted to a polynomial in ε.

use renlab::geometry::Scheme;
use renlab::models::DEFAULT_HM_THETA_PERIOD;
use renlab::series::{levelset_h_series, sample_points, LadderSpec};
use renlab::{horowitz_myers, hyperbolic3};

fn main() -> renlab::Result<()> {
    for model in [hyperbolic3(), horowitz_myers(DEFAULT_HM_THETA_PERIOD, 2.0)?] {
        let pts = sample_points(&model, 2, 1);
        let r = levelset_h_series(&model, &LadderSpec::default(), &pts, Scheme::Exact)?;
        let c: Vec<String> = (0..4).map(|k| format!("{:+.8}", r.measured.get(k, 0, 0))).collect();
        let p: Vec<String> = (0..4).map(|k| format!("{:+.8}", r.predicted.get(k, 0, 0))).collect();
        println!("{:<15} fitted    {}", model.name(), c.join(" "));
        println!("{:<15} predicted {}", "", p.join(" "));
    }
    Ok(())
}
