//! End-to-end runs of the `refspline` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn refspline(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_refspline")).args(args).output().expect("binary runs")
}

fn json_stdout(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout)
        .unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&o.stdout)))
}

fn json_stderr(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr)
        .unwrap_or_else(|e| panic!("stderr is not JSON ({e}): {}", String::from_utf8_lossy(&o.stderr)))
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(format!("{name}-{}", std::process::id()))
}

const SQRT10: [&str; 6] = ["--field", "10,2", "--lambda", "t", "--columns", "1;t/2"];

#[test]
fn counterexample_reports_exact_match() {
    let o = refspline(&["counterexample"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_stdout(&o);
    assert_eq!(v["exact_match"], Value::Bool(true));
    assert_eq!(v["translations"].as_array().unwrap().len(), 10);
    assert!(v["coefficients"].as_array().unwrap().iter().all(|c| c == "1/10"));
}

#[test]
fn lawton_box_quotient() {
    let o = refspline(&["lawton", "--p", "1", "--d", "0", "--m", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_stdout(&o)["quotient"], "z+1");
    let bad = refspline(&["lawton", "--p", "1,2", "--d", "0", "--m", "2"]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(json_stdout(&bad)["quotient"], Value::Null);
}

#[test]
fn check_refutes_sqrt2_with_witness() {
    let o = refspline(&["check", "--field", "2,2", "--lambda", "t", "--columns", "1;1"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json_stdout(&o);
    assert_eq!(v["status"], "refuted");
    assert_eq!(v["decision"]["verdict"], "not_refinable");
    assert_eq!(v["decision"]["witness"]["kind"], "condition_b");
    assert_eq!(v["decision"]["witness_verified"], Value::Bool(true));
}

#[test]
fn mask_output_round_trips_through_verify_mask() {
    let path = scratch("mask.json");
    let p = path.to_str().unwrap();
    let mut args = vec!["mask"];
    args.extend(SQRT10);
    args.extend(["--out", p]);
    assert_eq!(refspline(&args).status.code(), Some(0));
    let o = refspline(&["check", "--instance", p, "--verify-mask"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json_stdout(&o)["mask_identity"], Value::Bool(true));

    // Tamper with one coefficient: two terms now sum to the same total but the identity breaks.
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let terms = v["mask"]["mask"]["terms"].as_array_mut().unwrap();
    terms[0]["c"] = Value::String("1/5".into());
    terms[1]["c"] = Value::String("0".into());
    std::fs::write(&path, serde_json::to_string(&v).unwrap()).unwrap();
    let o = refspline(&["check", "--instance", p, "--verify-mask"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json_stdout(&o)["mask_identity"], Value::Bool(false));
    let _ = std::fs::remove_file(path);
}

#[test]
fn signed_columns_round_trip() {
    let path = scratch("signed.json");
    let p = path.to_str().unwrap();
    let o = refspline(&["mask", "--lambda", "3", "--columns", "-1;2", "--out", p]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(refspline(&["check", "--instance", p, "--verify-mask"]).status.code(), Some(0));
    let _ = std::fs::remove_file(path);
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        vec!["ftprobe", "--lambda", "2", "--columns", "1", "--points", "10", "--seed", "7"],
        vec!["decay", "--lambda", "2", "--columns", "1", "--jmax", "50"],
        vec!["erdos", "--lambda", "2", "--depth", "4"],
    ] {
        let a = refspline(&args);
        let b = refspline(&args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn config_is_echoed() {
    let o = refspline(&["ftprobe", "--lambda", "2", "--columns", "1", "--points", "3", "--seed", "11", "--prec", "96"]);
    let v = json_stdout(&o);
    assert_eq!(v["config"]["seed"], 11);
    assert_eq!(v["config"]["prec"], 96);
    assert_eq!(v["config"]["subcommand"], "ftprobe");
    assert_eq!(v["config"]["command"]["ftprobe"]["points"], 3);
}

#[test]
fn usage_errors_exit_2_with_reason() {
    let unknown = refspline(&["check", "--bogus"]);
    assert_eq!(unknown.status.code(), Some(2));
    let missing = refspline(&["check", "--lambda", "2"]);
    assert_eq!(missing.status.code(), Some(2));
    assert_eq!(json_stderr(&missing)["error"]["reason"], "usage");
    let lambda = refspline(&["check", "--lambda", "1/2", "--columns", "1"]);
    assert_eq!(lambda.status.code(), Some(2));
    assert_eq!(json_stderr(&lambda)["error"]["reason"], "invalid_lambda");
    let field = refspline(&["check", "--field", "4,2", "--lambda", "t", "--columns", "1"]);
    assert_eq!(field.status.code(), Some(2));
    let csv = refspline(&["lawton", "--p", "1", "--d", "0", "--m", "2", "--format", "csv"]);
    assert_eq!(csv.status.code(), Some(2));
    let file = refspline(&["check", "--instance", "/nonexistent/instance.json"]);
    assert_eq!(file.status.code(), Some(2));
    assert_eq!(json_stderr(&file)["error"]["reason"], "io");
}

#[test]
fn multivariate_check_and_perturbation() {
    let ok = refspline(&["mvcheck", "--field", "10,2", "--lambda", "t", "--columns", "1,0;0,1;t/2,0;0,t/2"]);
    assert_eq!(ok.status.code(), Some(0));
    let v = json_stdout(&ok);
    assert_eq!(v["chains"], serde_json::json!([[0, 2], [1, 3]]));
    assert_eq!(v["slice_masks_match"], Value::Bool(true));
    let bad = refspline(&["check", "--field", "10,2", "--lambda", "t", "--columns", "1,0;0,1;t/2,0;1,1/7"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn cascade_csv_and_factorization() {
    let o = refspline(&["cascade", "--lambda", "2", "--columns", "1;1", "--grid", "256", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# {"));
    assert!(lines.next().unwrap().starts_with("# start="));
    assert_eq!(lines.next(), Some("x,f"));
    assert!(lines.count() > 256);

    let mut args = vec!["factorize-check", "--grid", "1024"];
    args.extend(SQRT10);
    let f = refspline(&args);
    assert_eq!(f.status.code(), Some(0));
    assert_eq!(json_stdout(&f)["k"], 2);

    let tiny = refspline(&["cascade", "--lambda", "2", "--columns", "1", "--grid", "4"]);
    assert_eq!(tiny.status.code(), Some(2));
}

#[test]
fn text_format_is_human_readable() {
    let o = refspline(&["counterexample", "--format", "text"]);
    let s = String::from_utf8(o.stdout).unwrap();
    assert!(s.contains("coefficient: 1/10"));
    assert!(s.contains("4 + 1/2*t"));
}
