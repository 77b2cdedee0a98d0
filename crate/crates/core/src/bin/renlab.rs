use clap::{Parser, Subcommand};
use renlab::cli::{cmd_expand, cmd_flow, cmd_rena, cmd_scan, exit_code, ExperimentConfig, Status, ToleranceProfile};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "renlab", version, about = "Renormalized area experiments")]
struct Args {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; overrides the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = ToleranceProfile::Strict)]
    tolerance_profile: ToleranceProfile,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Boundary expansions and Neumann data.
    Expand,
    /// Minimal graph and its renormalized area.
    Rena,
    /// RenA along the flow with variation and evolution checks.
    Flow,
    /// RenA profile over a torus boundary.
    Scan,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = args.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let Some(path) = &args.config else {
        eprintln!("error: --config is required");
        return ExitCode::from(2);
    };
    let profile = args.tolerance_profile;
    let result = ExperimentConfig::load(path)
        .and_then(|c| c.resolve(profile, args.out.as_deref()))
        .and_then(|cfg| match args.command {
            Command::Expand => cmd_expand(&cfg, profile),
            Command::Rena => cmd_rena(&cfg, profile),
            Command::Flow => cmd_flow(&cfg, profile),
            Command::Scan => cmd_scan(&cfg, profile),
        });
    match result {
        Ok(outcome) => {
            print!("{}", outcome.summary);
            match &outcome.status {
                Status::Success => {}
                Status::Inconclusive(m) => eprintln!("inconclusive: {m}"),
                Status::Failed(m) => eprintln!("failed: {m}"),
            }
            eprintln!("wrote {} files to {}", outcome.files.len(), outcome.dir.display());
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
