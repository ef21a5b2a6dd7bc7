//! End-to-end behaviour of the `bm3` binary.
//!
//! Golden files live in `tests/golden`; set `BM3_BLESS=1` to rewrite them.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bm3(args: &[&str]) -> Output {
    bm3_env(args, &[])
}

fn bm3_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_bm3"));
    cmd.args(args);
    for k in ["BM3_ABS_TOL", "BM3_REL_TOL", "BM3_MAX_DEPTH"] {
        cmd.env_remove(k);
    }
    cmd.envs(env.iter().copied());
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", stdout(o)))
}

fn error_json(o: &Output) -> serde_json::Value {
    let v: serde_json::Value = serde_json::from_slice(&o.stderr).expect("stderr is JSON");
    assert!(o.stdout.is_empty());
    v
}

fn golden(name: &str, args: &[&str]) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    let first = bm3(args);
    let second = bm3(args);
    assert_eq!(first.status.code(), Some(0), "{}", String::from_utf8_lossy(&first.stderr));
    assert_eq!(first.stdout, second.stdout, "output differs between runs");
    if std::env::var_os("BM3_BLESS").is_some() {
        std::fs::write(&path, &first.stdout).unwrap();
    }
    let expected = std::fs::read(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(stdout(&first), String::from_utf8(expected).unwrap(), "golden mismatch for {name}");
}

#[test]
fn golden_bingle() {
    golden("bingle.json", &["bingle", "1", "1", "1", "7.389056", "0.367879", "0.367879"]);
}

#[test]
fn golden_norm() {
    golden("norm.json", &["norm", "1", "2", "3"]);
}

#[test]
fn golden_compact_geodesic() {
    golden("geodesic_compact.csv", &["geodesic", "--q1", "1", "--from", "0", "--to", "1", "-n", "5", "--compact"]);
}

#[test]
fn golden_circle() {
    golden("circle.csv", &["circle", "--component", "2-", "--from", "0.5", "--to", "4", "-n", "4"]);
}

#[test]
fn golden_selftest() {
    golden("selftest.json", &["selftest"]);
}

#[test]
fn worked_values() {
    let v = json(&bm3(&["bingle", "1", "1", "1", "7.389056", "0.367879", "0.367879"]));
    // the arguments are e^2 and e^-1 rounded to 7 digits
    assert!((v["value"].as_f64().unwrap() - 2f64.cbrt()).abs() < 1e-6);
    let v = json(&bm3(&["norm", "1", "2", "3"]));
    assert!((v["value"].as_f64().unwrap() - 6f64.cbrt()).abs() < 1e-14);
    let out = stdout(&bm3(&["geodesic", "--q1", "1", "-n", "2", "--compact"]));
    assert_eq!(out.lines().nth(1), Some("0,0.5,0.5,0.5"));
}

#[test]
fn scalar_schema_has_value_then_meta() {
    let out = stdout(&bm3(&["psi", "1", "1", "1", "2", "0.5", "0.8"]));
    assert!(out.starts_with("{\"value\":"), "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["meta"]["verb"], "psi");
    assert!(v["meta"]["component"].is_string());
    assert_eq!(v["meta"]["max_depth"], 40);
}

#[test]
fn selftest_is_independent_of_execution_mode() {
    let par = bm3(&["selftest", "--seed", "11"]);
    let seq = bm3(&["selftest", "--seed", "11", "--sequential"]);
    assert_eq!(par.status.code(), Some(0));
    assert_eq!(par.stdout, seq.stdout);
    let v = json(&par);
    assert_eq!(v["value"], true);
    let suites = v["meta"]["suites"].as_array().unwrap();
    assert!(suites.len() >= 40);
    assert!(suites.iter().all(|s| s["passed"] == true));
}

#[test]
fn csv_curves_have_header_and_rows() {
    let out = stdout(&bm3(&["geodesic", "--q1", "0.5", "--from", "-1", "--to", "2", "-n", "7"]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "s,x1,x2,x3");
    assert_eq!(lines.len(), 8);
    assert!(lines[1].starts_with("-1,"));
    assert!(lines[7].starts_with("2,"));
    let mesh = stdout(&bm3(&["mesh", "-n", "4"]));
    assert_eq!(mesh.lines().next(), Some("strip,u1,u2,x1,x2,x3"));
    assert_eq!(mesh.lines().count(), 1 + 2 * 4 * 3);
}

#[test]
fn json_format_for_curves() {
    let v = json(&bm3(&["--format", "json", "circle", "-n", "3"]));
    assert_eq!(v["value"]["columns"][0], "xi");
    assert_eq!(v["value"]["rows"].as_array().unwrap().len(), 3);
}

#[test]
fn parse_errors_exit_2() {
    for args in [&["norm", "1", "2"][..], &["norm", "1", "x", "3"], &["frobnicate"], &["geodesic"]] {
        let o = bm3(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert_eq!(error_json(&o)["error"]["kind"], "ParseError");
    }
}

#[test]
fn validation_errors_exit_2() {
    let cases: [(&[&str], &str); 5] = [
        (&["biproject", "1", "-2", "3"], "OutOfOctant"),
        (&["psi", "1", "1", "1", "2", "2", "2"], "CoincidentPoints"),
        (&["geodesic", "--q1", "1", "-n", "1"], "InvalidConfig"),
        (&["circle", "--component", "5+"], "InvalidComponent"),
        (&["norm", "inf", "1", "1"], "NonFinite"),
    ];
    for (args, kind) in cases {
        let o = bm3(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert_eq!(error_json(&o)["error"]["kind"], kind, "{args:?}");
    }
}

#[test]
fn numerical_failure_exits_1() {
    let o = bm3_env(&["psi", "1", "1", "1", "20", "0.5", "0.1"], &[("BM3_MAX_DEPTH", "2")]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(error_json(&o)["error"]["kind"], "QuadratureFailure");
}

#[test]
fn flags_override_environment() {
    let args = ["cfh", "0.5"];
    let from_env = json(&bm3_env(&args, &[("BM3_ABS_TOL", "1e-9")]));
    assert_eq!(from_env["meta"]["abs_tol"].as_f64(), Some(1e-9));
    let flagged = json(&bm3_env(&["--abs-tol", "1e-8", "cfh", "0.5"], &[("BM3_ABS_TOL", "1e-9")]));
    assert_eq!(flagged["meta"]["abs_tol"].as_f64(), Some(1e-8));
    // an unusable variable is never read when the flag is present
    let o = bm3_env(&["--abs-tol", "1e-8", "cfh", "0.5"], &[("BM3_ABS_TOL", "junk")]);
    assert_eq!(o.status.code(), Some(0));
    let o = bm3_env(&args, &[("BM3_ABS_TOL", "junk")]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_json(&o)["error"]["kind"], "InvalidEnvironment");
    let o = bm3_env(&args, &[("BM3_REL_TOL", "-1")]);
    assert_eq!(error_json(&o)["error"]["kind"], "InvalidConfig");
}
