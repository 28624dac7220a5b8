//! End-to-end CLI tests driving the compiled binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn mrleq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mrleq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn tempdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mrleq-cli-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn solve_uniform_reports_third() {
    let out = mrleq(&["solve", "--dist", r#"{"kind":"uniform","a":0,"b":1}"#]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"], "solve");
    // config echoes defaults
    assert_eq!(v["config"]["grid_points"], 2000);
    assert_eq!(v["config"]["tol"], 1e-9);
    let r = v["result"]["r_star"].as_f64().unwrap();
    assert!((r - 1.0 / 3.0).abs() < 1e-7, "r* = {r}");
    assert_eq!(v["result"]["dgmrl_certified"], true);
}

#[test]
fn solve_is_byte_deterministic() {
    let args = ["solve", "--dist", r#"{"kind":"sinusoid","omega":3.141592653589793,"kappa":0.8,"phi":1.2}"#];
    let a = mrleq(&args);
    let b = mrleq(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "identical argv must give identical bytes");
}

#[test]
fn solve_exponential_matches_analytic() {
    let out = mrleq(&["solve", "--dist", r#"{"kind":"exponential","rate":0.9}"#]);
    let v = stdout_json(&out);
    let r = v["result"]["r_star"].as_f64().unwrap();
    assert!((r - 1.0 / 0.9).abs() < 1e-7);
}

#[test]
fn spec_file_reference_is_supported() {
    let dir = tempdir("specfile");
    let path = dir.join("dist.json");
    std::fs::write(&path, r#"{"kind":"uniform","a":0,"b":2}"#).unwrap();
    let arg = format!("@{}", path.display());
    let out = mrleq(&["solve", "--dist", &arg]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    let r = v["result"]["r_star"].as_f64().unwrap();
    assert!((r - 2.0 / 3.0).abs() < 1e-7);
}

#[test]
fn malformed_spec_exits_2_with_pointer() {
    let out = mrleq(&["solve", "--dist", r#"{"kind":"uniform","a":0,"b":1,"oops":3}"#]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("/oops"), "stderr: {err}");
    assert!(err.contains("unknown field"), "stderr: {err}");
}

#[test]
fn invalid_parameters_exit_2() {
    let out = mrleq(&["solve", "--dist", r#"{"kind":"exponential","rate":-1}"#]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn poa_exact_value() {
    let out = mrleq(&["poa", "--n", "4"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["result"]["poa"], 1.25);
}

#[test]
fn poa_with_empirical_check() {
    let out = mrleq(&[
        "poa",
        "--n",
        "2",
        "--dist",
        r#"{"kind":"uniform","a":0,"b":1}"#,
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    let emp = v["result"]["empirical_poa"].as_f64().unwrap();
    assert!((emp - 1.5).abs() < 1e-4, "empirical poa {emp}");
}

#[test]
fn fundamentals_from_r_star() {
    let out = mrleq(&[
        "fundamentals",
        "--r-star",
        "0.3333333333333333",
        "--alpha",
        "1.0",
        "--n",
        "1",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    let q = v["result"]["q_star"].as_f64().unwrap();
    assert!((q - 1.0 / 3.0).abs() < 1e-9);
    let eff = v["result"]["efficiency"].as_f64().unwrap();
    assert!((eff - 1.0).abs() < 1e-9);
}

#[test]
fn profile_csv_has_header_and_rows() {
    let out = mrleq(&[
        "profile",
        "--dist",
        r#"{"kind":"exponential","rate":1}"#,
        "--grid-points",
        "50",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "r,mrl,gmrl,hazard,gfr");
    assert_eq!(lines.count(), 50);
}

#[test]
fn check_property_verdict_json() {
    let out = mrleq(&[
        "check-property",
        "--dist",
        r#"{"kind":"sinusoid","omega":3.141592653589793,"kappa":0.8,"phi":1.2}"#,
        "--property",
        "dgmrl",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["result"]["holds"], "fails");
    assert!(v["result"]["witness"].is_object());
}

#[test]
fn check_order_direction() {
    let out = mrleq(&[
        "check-order",
        "--dist",
        r#"{"kind":"exponential","rate":2}"#,
        "--dist2",
        r#"{"kind":"exponential","rate":1}"#,
        "--order",
        "mrl",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["result"]["direction"], "forward");
}

#[test]
fn check_order_hr_without_density_reports_fallback() {
    let out = mrleq(&[
        "check-order",
        "--dist",
        r#"{"kind":"convolve","x":{"kind":"uniform","a":0,"b":1},"z":{"kind":"uniform","a":0,"b":1},"knots":256}"#,
        "--dist2",
        r#"{"kind":"uniform","a":0,"b":2}"#,
        "--order",
        "hr",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("fallback"), "stderr: {err}");
}

#[test]
fn oracle_argmax_with_monte_carlo() {
    let out = mrleq(&[
        "oracle",
        "--dist",
        r#"{"kind":"uniform","a":0,"b":1}"#,
        "--n",
        "1",
        "--grid-points",
        "2000",
        "--samples",
        "50000",
        "--seed",
        "7",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    let r_hat = v["result"]["grid_argmax"].as_f64().unwrap();
    assert!((r_hat - 1.0 / 3.0).abs() < 1e-3);
    assert!(v["result"]["mc_estimates"]["supplier"]["mean"].is_number());
    let dev = v["result"]["deviation_max"].as_f64().unwrap();
    assert!(dev < 1e-5, "deviation {dev}");
}

#[test]
fn experiment_scale_passes() {
    let out = mrleq(&["experiment", "--name", "scale"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["result"]["summary"]["fail"], 0);
    assert_eq!(v["result"]["summary"]["pass"], 4);
}

#[test]
fn experiment_closure_passes() {
    let out = mrleq(&["experiment", "--name", "closure"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["result"]["summary"]["fail"], 0);
}

#[test]
fn experiment_writes_artifact_atomically() {
    let dir = tempdir("artifact");
    let path = dir.join("scale.json");
    let out = mrleq(&[
        "experiment",
        "--name",
        "scale",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(path.exists());
    assert!(!path.with_extension("tmp").exists(), "temp file must be renamed away");
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "experiment");
}

#[test]
fn counterexample_writes_curves_and_exits_3() {
    // sub-check (b) pins the reference fixed-point window, which the
    // computed value misses by ~1e-4; the command must still write every
    // artifact and then signal the assertion failure
    let dir = tempdir("counterexample");
    let out = mrleq(&["counterexample", "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));

    let curves = std::fs::read_to_string(dir.join("curves.csv")).unwrap();
    assert!(curves.starts_with("r,survival_F,survival_G,log_ratio,mrl_F,mrl_G\n"));
    assert!(curves.lines().count() > 2000);

    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["result"]["summary"]["fail"], 1);
    assert_eq!(report["result"]["summary"]["pass"], 6);
    let rf = report["fixed_points"]["r_star_f"].as_f64().unwrap();
    let rg = report["fixed_points"]["r_star_g"].as_f64().unwrap();
    assert!(rg > rf, "price reversal must reproduce");
    assert!((rf - 1.0319975173602862).abs() < 1e-6);
}

#[test]
fn thread_cap_env_var_is_honored() {
    let out = Command::new(env!("CARGO_BIN_EXE_mrleq"))
        .env("MRLEQ_THREADS", "1")
        .args([
            "oracle",
            "--dist",
            r#"{"kind":"exponential","rate":1}"#,
            "--grid-points",
            "2000",
            "--samples",
            "20000",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v = stdout_json(&out);
    let r_hat = v["result"]["grid_argmax"].as_f64().unwrap();
    assert!((r_hat - 1.0).abs() < 2e-2);
}

#[test]
fn csv_rejected_for_scalar_commands() {
    let out = mrleq(&[
        "solve",
        "--dist",
        r#"{"kind":"uniform","a":0,"b":1}"#,
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
