use std::path::Path;
use std::process::{Command, Output};

fn feykac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_feykac"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn identical_configs_give_byte_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let common = [
        "--set",
        "potential=gauss_cos(1,1)",
        "--set",
        "n_paths=4000",
        "--set",
        "m_steps=64",
        "--seed",
        "7",
    ];
    for out in [&a, &b] {
        let mut args = vec!["mc", "--out", path_str(out)];
        args.extend(common);
        assert!(feykac(&args).status.success());
    }
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    assert!(!bytes.contains(&b'\r'));

    let c = dir.path().join("c.csv");
    let mut args = vec!["mc", "--out", path_str(&c)];
    args.extend(common);
    let last = args.len() - 1;
    args[last] = "8";
    assert!(feykac(&args).status.success());
    assert_ne!(bytes, std::fs::read(&c).unwrap());
}

#[test]
fn oracle_csv_schema() {
    let out = feykac(&["oracle", "--set", "t=[0.5]", "--set", "x=[0]"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t,x,k,m1,m2,q_marginal,marginal_error"
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert!(lines.next().is_none());
    let k: f64 = row[2].parse().unwrap();
    assert_eq!(k, 1f64.cosh().powf(-0.5));
    // 17 significant digits: one leading digit and sixteen decimals
    let mantissa = row[2].split('e').next().unwrap();
    assert_eq!(mantissa.len(), 18);
}

#[test]
fn oracle_with_empty_t_list_writes_only_the_header() {
    let out = feykac(&["oracle", "--set", "t=[]"]);
    assert!(out.status.success());
    assert_eq!(out.stdout, b"t,x,k,m1,m2,q_marginal,marginal_error\n");
}

#[test]
fn malformed_config_leaves_no_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "n_paths = \"many\"\n").unwrap();
    let out_path = dir.path().join("out.csv");
    let out = feykac(&[
        "oracle",
        "--config",
        path_str(&cfg),
        "--out",
        path_str(&out_path),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out_path.exists());
    assert!(!String::from_utf8(out.stderr).unwrap().is_empty());

    for bad in [
        ["--set", "potential=warp(3)"],
        ["--set", "unknown_key=1"],
        ["--set", "dt=0"],
    ] {
        let mut args = vec!["pde", "--out", path_str(&out_path)];
        args.extend(bad);
        assert_eq!(feykac(&args).status.code(), Some(2), "{bad:?}");
        assert!(!out_path.exists());
    }
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn runtime_error_leaves_no_file() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("out.csv");
    // t is not a multiple of dt
    let out = feykac(&[
        "pde",
        "--set",
        "t=[0.123456]",
        "--set",
        "dt=0.001",
        "--out",
        path_str(&out_path),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out_path.exists());
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "seed = 5\nn_paths = 100\npotential = \"bump(1)\"\n").unwrap();
    let out = feykac(&[
        "--show-config",
        "--config",
        path_str(&cfg),
        "--set",
        "n_paths=200",
        "--seed",
        "9",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("seed = 9"));
    assert!(text.contains("n_paths = 200"));
    assert!(text.contains("potential = \"bump(1)\""));
}

#[test]
fn show_config_lists_every_default() {
    let out = feykac(&["--show-config"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for key in [
        "potential",
        "v0",
        "t",
        "x",
        "n_paths",
        "m_steps",
        "quad_order",
        "n",
        "h",
        "dt",
        "seed",
        "format",
    ] {
        assert!(
            text.lines().any(|l| l.starts_with(&format!("{key} = "))),
            "{key} missing"
        );
    }
}

#[test]
fn json_echoes_the_config() {
    let out = feykac(&[
        "split",
        "--format",
        "json",
        "--set",
        "n=8",
        "--set",
        "potential=constant(2)",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["command"], "split");
    assert_eq!(v["config"]["n"], 8);
    assert_eq!(v["config"]["potential"], "constant(2)");
    assert_eq!(v["passed"], true);
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn compare_without_potential_passes() {
    let out = feykac(&["compare", "--set", "n_paths=20000", "--set", "m_steps=128"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
}

#[test]
fn compare_with_tiny_budget_still_passes() {
    let out = feykac(&["compare", "--set", "n_paths=10", "--set", "m_steps=16"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
}

#[test]
fn failed_check_sets_exit_status() {
    // one splitting round is far from the Crank-Nicolson solution
    let out = feykac(&[
        "compare",
        "--set",
        "potential=gauss_cos(1,1)",
        "--set",
        "n=1",
        "--set",
        "n_paths=2000",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().skip(1).any(|l| l.ends_with(",false")));
}

#[test]
fn converge_reports_first_order() {
    let out = feykac(&[
        "converge",
        "--format",
        "json",
        "--set",
        "potential=gauss_cos(1,1)",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let q = v["fitted_order"].as_f64().unwrap();
    assert!((0.7..=1.3).contains(&q), "{q}");
}

#[test]
fn missing_command_is_a_usage_error() {
    assert_eq!(feykac(&[]).status.code(), Some(2));
    assert_eq!(feykac(&["integrate"]).status.code(), Some(2));
    assert!(feykac(&["--help"]).status.success());
}
