use renlab::cli::*;
use renlab::io::parse_csv;
use std::process::Command;

fn run(cmd: &str, text: &str) -> (Outcome, tempfile::TempDir) {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ExperimentConfig::from_toml(text)
        .unwrap()
        .resolve(ToleranceProfile::Strict, Some(dir.path()))
        .unwrap();
    let out = match cmd {
        "expand" => cmd_expand(&cfg, ToleranceProfile::Strict),
        "rena" => cmd_rena(&cfg, ToleranceProfile::Strict),
        "flow" => cmd_flow(&cfg, ToleranceProfile::Strict),
        _ => cmd_scan(&cfg, ToleranceProfile::Strict),
    }
    .unwrap();
    (out, dir)
}

#[test]
fn expand_prescribed_round_trip() {
    let text = r#"
[model]
kind = "prescribed_fg"
theta_period = 6.283185307179586
s_period = 3.0
h = [1.0, 0.0, 1.0]
h3 = [-0.25, 0.1, 0.25]
"#;
    let (out, dir) = run("expand", text);
    assert_eq!(out.status, Status::Success, "{}", out.summary);
    let (_, rows) = parse_csv(&std::fs::read_to_string(dir.path().join("neumann.csv")).unwrap()).unwrap();
    for r in rows {
        assert!((r[2] + 0.25).abs() < 1e-8 && (r[3] - 0.1).abs() < 1e-8, "{r:?}");
    }
    assert!(out.files.iter().any(|f| f == "MANIFEST.sha256"));
    assert!(dir.path().join("config.resolved.toml").exists());
}

#[test]
fn expand_hm_neumann_table() {
    let (out, dir) = run("expand", "[model]\nkind = \"horowitz_myers\"\n[expand]\nn_theta = 2\nn_s = 2\n");
    assert_eq!(out.status, Status::Success);
    let (_, rows) = parse_csv(&std::fs::read_to_string(dir.path().join("neumann.csv")).unwrap()).unwrap();
    for r in rows {
        assert!((r[2] + 2.0 / 3.0).abs() < 1e-12 && (r[4] - 1.0 / 3.0).abs() < 1e-12);
        assert!((r[5] + 1.0 / 3.0).abs() < 1e-12);
    }
}

#[test]
fn rena_hm_slice() {
    let (out, _dir) = run(
        "rena",
        "[model]\nkind = \"horowitz_myers\"\n[surface]\ns0 = 0.3\nn_cheb = 21\nn_theta = 16\n",
    );
    assert_eq!(out.exit_code(), 0);
    let get = |k: &str| -> f64 {
        out.summary
            .lines()
            .find_map(|l| l.strip_prefix(&format!("{k} ")))
            .unwrap()
            .parse()
            .unwrap()
    };
    assert!(get("max_h") < 1e-8);
    assert!((get("direct") + 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-9);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_renlab");
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    };
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    let out = dir.path().join("out");
    let out = out.to_str().unwrap();

    let bad = write("bad.toml", "[model]\nkind = \"hyperbolic3\"\nbogus = 1\n");
    assert_eq!(status(&["rena", "--config", bad.to_str().unwrap(), "--out", out]), Some(2));

    let sphere = write("sphere.toml", "[model]\nkind = \"hyperbolic3\"\n");
    assert_eq!(status(&["scan", "--config", sphere.to_str().unwrap(), "--out", out]), Some(2));
    assert_eq!(
        status(&["expand", "--config", sphere.to_str().unwrap(), "--out", out, "--workers", "2"]),
        Some(0)
    );

    let stuck = write(
        "stuck.toml",
        "[model]\nkind = \"hyperbolic3\"\nanchor = 1.0\n[surface]\ndelta = 0.3\nmode = 3\nn_cheb = 11\nn_theta = 8\nmax_iter = 1\n",
    );
    assert_eq!(
        status(&["rena", "--config", stuck.to_str().unwrap(), "--out", out, "--tolerance-profile", "fast"]),
        Some(3)
    );
    assert_eq!(status(&["rena", "--config", "/nonexistent.toml"]), Some(2));
}
