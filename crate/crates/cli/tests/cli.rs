use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).to_string_lossy().into_owned()
}

struct Run {
    code: i32,
    stdout: String,
    json: Value,
}

fn bk(args: &[&str], out: &Path) -> Run {
    bk_env(args, out, &[])
}

fn bk_env(args: &[&str], out: &Path, env: &[(&str, &str)]) -> Run {
    let output = Command::new(env!("CARGO_BIN_EXE_bk"))
        .args(args)
        .arg("--out")
        .arg(out)
        .envs(env.iter().copied())
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8(output.stdout).expect("utf-8 stdout");
    let json = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    Run {
        code: output.status.code().expect("exit code"),
        stdout,
        json,
    }
}

fn error_code(r: &Run) -> &str {
    r.json["error"]["code"].as_str().unwrap_or("")
}

/// Compares against `tests/golden/<name>`; `BK_BLESS=1` rewrites the file.
fn golden(name: &str, actual: &str) {
    let path: PathBuf = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var("BK_BLESS").as_deref() == Ok("1") {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "golden mismatch for {name}");
}

#[test]
fn validate_exit_codes() {
    let dir = TempDir::new().unwrap();
    let ok = bk(&["validate", "family:null_helix"], dir.path());
    assert_eq!(ok.code, 0);
    assert_eq!(ok.json["report"]["passed"], true);

    let bad = bk(&["validate", &data("timelike_declared_spacelike.json")], dir.path());
    assert_eq!(bad.code, 2);
    assert_eq!(bad.json["report"]["first_failure"]["t"], 0.0);
    golden("validate_timelike.json", &bad.stdout);

    for (file, code) in [
        ("truncated.json", "parse_error"),
        ("bad_expr.json", "parse_error"),
        ("unknown_field.json", "parse_error"),
        ("missing.json", "io"),
    ] {
        let r = bk(&["validate", &data(file)], dir.path());
        assert_eq!(r.code, 1, "{file}");
        assert_eq!(error_code(&r), code, "{file}: {}", r.stdout);
    }
    let r = bk(&["validate", &data("bad_expr.json")], dir.path());
    assert!(r.json["error"]["message"].as_str().unwrap().contains("offset"), "{}", r.stdout);
}

#[test]
fn usage_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    for args in [
        vec!["frobnicate"],
        vec!["construct", "family:spacelike_helix", "--theorem", "4.2", "--a", "1", "--theta", "1"],
        vec!["frame"],
        vec!["frame", "family:spacelike_helix", "--samples", "3"],
        vec!["frame", "family:nope"],
    ] {
        let r = bk(&args, dir.path());
        assert_eq!(r.code, 1, "{args:?}");
        assert!(!error_code(&r).is_empty(), "{args:?}");
    }
    let r = bk(&["construct", "family:spacelike_helix", "--theorem", "2.1", "--a", "1", "--theta", "0"], dir.path());
    assert_eq!((r.code, error_code(&r)), (1, "invalid_params"));

    let help = Command::new(env!("CARGO_BIN_EXE_bk")).arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(0));
}

#[test]
fn frame_artifacts_and_breaches() {
    let dir = TempDir::new().unwrap();
    let r = bk(&["frame", "family:small_circle", "--samples", "16"], dir.path());
    assert_eq!(r.code, 0, "{}", r.stdout);
    let csv = std::fs::read_to_string(dir.path().join("frame.csv")).unwrap();
    let header = csv.lines().next().unwrap();
    assert_eq!(header.split(',').count(), 23);
    assert!(header.starts_with("s,kappa_g,tau_g,delta,r1,r2,r3,gamma_x1"));
    golden("frame_small_circle.csv", &csv);

    // the frame tolerance also gates the unit-speed precondition
    let strict = bk(&["frame", "family:spacelike_helix", "--tol-frame", "1e-20"], dir.path());
    assert_eq!((strict.code, error_code(&strict)), (3, "not_unit_speed"));

    // a null curve is not unit speed
    let r = bk(&["frame", "family:null_helix"], dir.path());
    assert_eq!((r.code, error_code(&r)), (3, "not_unit_speed"));

    let r = bk(&["frame", "family:small_circle", "--samples", "16", "--format", "json"], dir.path());
    assert_eq!(r.code, 0);
    let table: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("frame.json")).unwrap()).unwrap();
    assert_eq!(table["rows"].as_array().unwrap().len(), 16);
}

#[test]
fn parallel_switch_does_not_change_output() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    bk(&["cartan", "family:null_helix"], a.path());
    bk_env(&["cartan", "family:null_helix"], b.path(), &[("BK_NO_PARALLEL", "1")]);
    let read = |d: &TempDir| std::fs::read(d.path().join("cartan.csv")).unwrap();
    assert_eq!(read(&a), read(&b));
}

#[test]
fn cartan_and_sphere_test() {
    let dir = TempDir::new().unwrap();
    let r = bk(&["cartan", "family:null_helix"], dir.path());
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert!(r.json["max_k1_route_difference"].as_f64().unwrap() <= 1e-7);

    let r = bk(&["cartan", "family:null_helix_unscaled"], dir.path());
    assert_eq!((r.code, error_code(&r)), (3, "pseudo_arc_precondition"));
    let r = bk(&["cartan", "family:null_helix_unscaled", "--reparam"], dir.path());
    assert_eq!(r.code, 0, "{}", r.stdout);

    let r = bk(&["sphere-test", "family:null_helix"], dir.path());
    assert_eq!(r.code, 0);
    assert_eq!(r.json["verdict"], true);
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("sphere_test.json")).unwrap()).unwrap();
    assert_eq!(saved["verdict"], true);

    let r = bk(&["sphere-test", "family:null_nonspherical"], dir.path());
    assert_eq!(r.code, 0);
    assert_eq!(r.json["verdict"], false);
}

#[test]
fn reparam_tables() {
    let dir = TempDir::new().unwrap();
    let r = bk(&["reparam", "family:null_helix_unscaled", "--kind", "pseudo-arc", "--samples", "16"], dir.path());
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert!(r.json["max_null_residual"].as_f64().unwrap() <= 1e-8);
    let csv = std::fs::read_to_string(dir.path().join("reparam.csv")).unwrap();
    assert!(csv.starts_with("t,u,x1,x2,x3,x4\n"));
    let r = bk(&["reparam", "family:null_helix", "--kind", "arclength"], dir.path());
    assert_eq!((r.code, error_code(&r)), (3, "causal_violation"));
}

#[test]
fn construct_then_verify() {
    let dir = TempDir::new().unwrap();
    let r = bk(
        &["construct", "family:spacelike_helix", "--theorem", "2.1", "--a", "1", "--theta", "1", "--samples", "256"],
        dir.path(),
    );
    assert_eq!(r.code, 0, "{}", r.stdout);
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("bertrand_report.json")).unwrap()).unwrap();
    assert_eq!(report["character"], "timelike");
    assert!(report["fit_residual"].as_f64().unwrap() <= 1e-6);
    assert!((report["paper_identity_value"].as_f64().unwrap() - 1.0).abs() <= 1e-9);

    let csv = dir.path().join("curve.csv").to_string_lossy().into_owned();
    let v = bk(&["verify", &csv], dir.path());
    assert_eq!(v.code, 0, "{}", v.stdout);
    assert!(dir.path().join("verify_report.json").exists());

    let r = bk(
        &["construct", "family:null_helix", "--theorem", "3.1", "--a", "1", "--theta", "-1.5", "--c", "1,2,3,4"],
        dir.path(),
    );
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(r.json["params"]["c"], serde_json::json!([1.0, 2.0, 3.0, 4.0]));

    let r = bk(&["construct", "family:null_helix_unscaled", "--theorem", "3.1", "--a", "1", "--theta", "1"], dir.path());
    assert_eq!((r.code, error_code(&r)), (3, "pseudo_arc_precondition"));
}

#[test]
fn verify_rejects_lines_and_bad_tables() {
    let dir = TempDir::new().unwrap();
    let r = bk(&["verify", &data("line.csv"), "--samples", "16"], dir.path());
    assert_eq!((r.code, error_code(&r)), (3, "bertrand_underdetermined"));
    golden("verify_line.json", &r.stdout);
    let r = bk(&["verify", &data("bad_header.csv")], dir.path());
    assert_eq!((r.code, error_code(&r)), (1, "parse_error"));
}

#[test]
fn config_file_precedence() {
    let dir = TempDir::new().unwrap();
    let cfg = data("config.json");
    let r = bk(&["frame", "family:small_circle", "--config", &cfg], dir.path());
    assert_eq!(r.json["samples"], 20);
    let r = bk(&["frame", "family:small_circle", "--config", &cfg, "--samples", "30"], dir.path());
    assert_eq!(r.json["samples"], 30);
    let r = bk(&["frame", "family:small_circle", "--config", &data("unknown_field.json")], dir.path());
    assert_eq!((r.code, error_code(&r)), (1, "parse_error"));
}

#[test]
fn demo_is_deterministic() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let ra = bk(&["demo"], a.path());
    let rb = bk(&["demo"], b.path());
    assert_eq!(ra.code, 0, "{}", ra.stdout);
    assert_eq!(ra.stdout, rb.stdout);
    let files = ra.json["artifacts"].as_array().unwrap();
    assert_eq!(files.len(), 4);
    for f in files {
        let f = f.as_str().unwrap();
        assert_eq!(std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap(), "{f}");
    }
    golden("demo_stdout.json", &ra.stdout);
}
