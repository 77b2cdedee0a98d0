//! Runs the `rena` command from an inline configuration into a temporary
//! directory and lists the files it wrote.

use renlab::cli::{cmd_rena, ExperimentConfig, ToleranceProfile};

const CONFIG: &str = r#"
[model]
kind = "horowitz_myers"

[surface]
s0 = 0.3
n_cheb = 21
n_theta = 16
"#;

fn main() -> renlab::Result<()> {
    let out = std::env::temp_dir().join("renlab_config_run");
    let cfg = ExperimentConfig::from_toml(CONFIG)?.resolve(ToleranceProfile::Fast, Some(&out))?;
    let o = cmd_rena(&cfg, ToleranceProfile::Fast)?;
    println!("status {:?}, exit code {}", o.status, o.exit_code());
    for f in &o.files {
        println!("  {}", o.dir.join(f).display());
    }
    print!("{}", o.summary);
    Ok(())
}
