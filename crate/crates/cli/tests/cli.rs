use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pencil-lab"))
}

fn sample(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/configs").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_sample(command: &str, name: &str, extra: &[&str]) -> Output {
    let path = sample(name);
    let mut args = vec![command, "--config", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn temp_config(text: &str) -> tempfile::NamedTempFile {
    let f = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(f.path(), text).unwrap();
    f
}

#[test]
fn generate_lists_chebyshev_like_polynomials() {
    let out = run_sample("generate", "chebyshev.json", &[]);
    assert_eq!(out.status.code(), Some(0));
    let doc = report(&out);
    let polys = doc["body"]["polynomials"].as_array().unwrap();
    assert_eq!(polys.len(), 4);
    assert_eq!(polys[3]["coeffs"], json!(["0", "-2", "0", "1"]));
    assert_eq!(polys[2]["coeffs"], json!(["-1", "0", "1"]));
    assert_eq!(doc["status"], json!("pass"));
    assert_eq!(doc["header"]["command"], json!("generate"));
}

#[test]
fn csv_has_one_row_per_polynomial() {
    let out = run_sample("generate", "chebyshev.json", &["--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "0,1\n1,0,1\n2,-1,0,1\n3,0,-2,0,1\n");
}

#[test]
fn csv_rejected_without_polynomials() {
    let out = run_sample("moments", "explicit.json", &["--format", "csv"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`format`"));
}

#[test]
fn ode_check_reports_lambda_six() {
    let out = run_sample("ode-check", "ode.json", &[]);
    assert_eq!(out.status.code(), Some(0));
    let body = &report(&out)["body"];
    assert_eq!(body["lambda"], json!("6"));
    assert_eq!(body["residual"], json!("0"));
    assert_eq!(body["solution"], json!(["-1/3", "-1", "1"]));
}

#[test]
fn band_check_fails_when_banded_expected() {
    let out = run_sample("band-check", "band.json", &["--expect-banded"]);
    assert_eq!(out.status.code(), Some(1));
    let doc = report(&out);
    let body = &doc["body"];
    assert_eq!(body["banded"], json!(false));
    assert_eq!(body["symmetry"]["witness"]["defect"], json!("-48/175"));
    assert!(body["symmetry"]["grid_witness"].is_array());
    assert!(!body["band_fit"]["off_band"].as_array().unwrap().is_empty());
    assert_eq!(doc["status"], json!("fail"));

    let plain = run_sample("band-check", "band.json", &[]);
    assert_eq!(plain.status.code(), Some(0));
    assert_eq!(report(&plain)["body"], *body);
}

#[test]
fn pencil_checks_pass_on_explicit_pencil() {
    for cmd in ["generate", "residuals", "cd-check", "spectrum", "moments", "detrep"] {
        let out = run_sample(cmd, "explicit.json", &[]);
        assert_eq!(out.status.code(), Some(0), "{cmd}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(report(&out)["status"], json!("pass"), "{cmd}");
    }
}

#[test]
fn spectrum_reports_real_eigenvalues() {
    let doc = report(&run_sample("spectrum", "explicit.json", &[]));
    let j2 = &doc["body"]["truncations"][1];
    assert_eq!(j2["charpoly"], json!(["7/8", "-7/4", "3/4"]));
    for e in j2["eigenvalues"].as_array().unwrap() {
        assert_eq!(e["value"]["im"], json!(0.0));
        assert!(e["residual"]["tol"].is_f64());
    }
}

#[test]
fn perturb_checks_and_tolerance_override() {
    let out = run_sample("perturb", "perturb.json", &[]);
    assert_eq!(out.status.code(), Some(0));
    let strict = run_sample("perturb", "perturb.json", &["--tol", "1e-300"]);
    assert_eq!(strict.status.code(), Some(1));
    let doc = report(&strict);
    assert_eq!(doc["body"]["float_defect"]["tol"], json!(1e-300));
    let failed: Vec<&Value> = doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == json!(false))
        .collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0]["name"], json!("orthonormality-float"));
}

#[test]
fn reports_are_byte_identical() {
    for (cmd, name) in [("spectrum", "explicit.json"), ("band-check", "band.json"), ("perturb", "perturb.json")] {
        let a = run_sample(cmd, name, &[]);
        let b = run_sample(cmd, name, &[]);
        assert_eq!(a.stdout, b.stdout, "{cmd}");
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("report.json");
    let out = run_sample("generate", "chebyshev.json", &["--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(target).unwrap()).unwrap();
    assert_eq!(doc["status"], json!("pass"));
}

#[test]
fn config_errors_exit_two_and_name_the_field() {
    let cases = [
        (r#"{"degenerate": {"a": ["1", "0"], "b": ["0", "0"]}}"#, "degenerate.a[1]"),
        (r#"{"degenerate": {"a": ["1"], "b": ["0"]}, "depth": 0}"#, "depth"),
        (r#"{"degenerate": {"a": ["1"], "b": ["zero"]}}"#, "degenerate.b[0]"),
        (r#"{"degenerate": {"a": ["1"], "b": ["0"]}, "colour": 1}"#, "colour"),
        (r#"{"degenerate": {"a": ["1"], "b": ["0"]}, "depth": 9}"#, "degenerate."),
        (r#"{"perturbation": {"c": "-2", "d": 0, "measure": "jacobi:0,0"}}"#, "perturbation.c"),
        (r#"{"command": "moments", "degenerate": {"a": ["1"], "b": ["0"]}}"#, "command"),
        ("{", "<root>"),
    ];
    for (text, field) in cases {
        let f = temp_config(text);
        let out = run(&["generate", "--config", f.path().to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{text}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(field), "{text}: {err}");
    }
    let missing = run(&["generate", "--config", "/nonexistent/config.json"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn unknown_command_is_a_usage_error() {
    let out = run(&["frobnicate", "--config", "x.json"]);
    assert_eq!(out.status.code(), Some(2));
}
