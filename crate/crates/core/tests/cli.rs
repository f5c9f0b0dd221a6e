//! End-to-end runs of the `hfl` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn hfl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hfl")).args(args).output().expect("binary runs")
}

fn golden(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/descriptors").join(name).to_string_lossy().into_owned()
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn condition_report_carries_the_example2_witness() {
    let r = json_of(&hfl(&["condition", "--spec", &golden("example2_condition.json")]));
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["analysis"], "condition");
    let w = &r["results"]["inf"]["witness"];
    assert_eq!(r["results"]["inf"]["verdict"], "fails");
    assert_eq!(w["c"], serde_json::json!(["alpha", "beta"]));
    assert_eq!(w["q"], "t^3 + t^2");
    assert_eq!(w["residual"], "1/2");
}

#[test]
fn constant_average_is_one_in_csv() {
    let p = scratch(
        "ones.json",
        r#"{"schema_version": 1, "sequence": {"kind": "constant", "value": 1.0}, "grid": [10, 100, 1000]}"#,
    );
    let out = hfl(&["avg", "--spec", p.to_str().unwrap(), "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("N,weighted_average,weight_total,stderr"));
    for l in lines {
        assert_eq!(l.split(',').nth(1), Some("1"));
    }
}

#[test]
fn example1_floor_search_is_empty_to_a_million() {
    let p = scratch(
        "example1.json",
        r#"{"schema_version": 1, "builtin": {"name": "example1"}, "set": {"kind": "odds"},
            "mode": "floor", "n_min": 2, "n_max": 1000000, "a_max": 1000000}"#,
    );
    let r = json_of(&hfl(&["pattern", "--spec", p.to_str().unwrap(), "--threads", "4"]));
    assert_eq!(r["results"]["result"], "none");
    assert_eq!(r["results"]["searched_n"], 1_000_000);
}

#[test]
fn out_flag_writes_the_report() {
    let dest = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli/seminorm.csv");
    let out = hfl(&["seminorm", "--spec", &golden("seminorm_indicator.json"), "--format", "csv", "--out", dest.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(dest).unwrap();
    assert!(text.starts_with("s,value,oracle\n1,0.0625,0.0625\n2,0.125,0.125\n"));
}

#[test]
fn precision_flag_is_echoed() {
    let r = json_of(&hfl(&["probe", "--spec", &golden("example5_probe.json"), "--precision", "128"]));
    assert_eq!(r["precision_digits"], 128);
    assert_eq!(r["descriptor"]["precision"], 128);
    let c = r["results"]["combination"].as_array().unwrap();
    assert!(c.iter().all(|v| v["radius"].as_f64().unwrap() < 1e-100));
}

#[test]
fn builtins_lists_parameter_slots() {
    let out = hfl(&["builtins", "--filter", "example8"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v[0]["name"], "example8");
    assert_eq!(v[0]["slots"], serde_json::json!(["alpha", "C"]));
}

#[test]
fn exit_codes() {
    let malformed = scratch("malformed.json", r#"{"schema_version": 1, "grid": [1, 2,"#);
    let out = hfl(&["avg", "--spec", malformed.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));

    let unknown = scratch("unknown.json", r#"{"schema_version": 1, "sequence": {"kind": "constant", "value": 1}, "colour": 3}"#);
    assert_eq!(hfl(&["avg", "--spec", unknown.to_str().unwrap()]).status.code(), Some(2));

    let skew = scratch(
        "skew_return.json",
        r#"{"schema_version": 1, "builtin": {"name": "example4"}, "system": {"kind": "skew", "alpha": {"sqrt2_minus_1": 1}},
            "set": {"kind": "box", "arcs": [[0, 0.5], [0, 0.5]]}, "N": 10}"#,
    );
    assert_eq!(hfl(&["return-set", "--spec", skew.to_str().unwrap()]).status.code(), Some(3));

    // r and s share a value, so f = (r - s) t is zero and its rounding can never be certified
    let sqrt2 = hfl::builtins::constant_value("sqrt2").unwrap();
    let body = format!(
        r#"{{"schema_version": 1,
            "family": {{"constants": [{{"name": "r", "value": "{sqrt2}"}}, {{"name": "s", "value": "{sqrt2}"}}],
                        "functions": [{{"name": "f", "terms": [{{"coeff": {{"r": 1, "s": -1}}, "t_exp": 1}}]}}]}},
            "set": {{"kind": "all"}}, "n_max": 5, "a_max": 5}}"#
    );
    let zero = scratch("zero.json", &body);
    let out = hfl(&["pattern", "--spec", zero.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    assert_eq!(hfl(&["avg", "--spec", "/nonexistent/descriptor.json"]).status.code(), Some(1));
}

#[test]
fn thread_count_does_not_change_the_payload() {
    for name in ["corollary_b3_torus.json", "skew_sampling.json", "weyl_n_sqrt2.json"] {
        let analysis = if name.starts_with("weyl") { "equi" } else { "multicorr" };
        let a = json_of(&hfl(&[analysis, "--spec", &golden(name), "--threads", "1"]));
        let b = json_of(&hfl(&[analysis, "--spec", &golden(name), "--threads", "2"]));
        assert_eq!(a["results"], b["results"], "{name}");
    }
}
