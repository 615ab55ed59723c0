use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bpp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bpp"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = bpp(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    stdout(&out)
}

fn assert_schema(name: &str, text: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("schemas")
        .join(name);
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let instance: Value = serde_json::from_str(text).unwrap();
    let errors: Vec<String> = validator
        .iter_errors(&instance)
        .map(|e| e.to_string())
        .collect();
    assert!(errors.is_empty(), "{name}: {errors:?}\n{text}");
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn formula_moments() {
    let out = ok(&["moments", "--dims", "2,2,2", "--method", "formula"]);
    assert_schema("moments.schema.json", &out);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["count"], "20");
    assert_eq!(v["cov"][2][2], "4/5");
    assert_eq!(v["cov"][1][3], "1/5");
}

#[test]
fn exact_methods_agree() {
    let strip = |s: String| {
        let mut v: Value = serde_json::from_str(&s).unwrap();
        v.as_object_mut().unwrap().remove("method");
        v
    };
    let f = ok(&["moments", "--dims", "2,3,2", "--method", "formula"]);
    let e = ok(&["moments", "--dims", "2,3,2", "--method", "enumerate"]);
    let d = ok(&["moments", "--dims", "2,3,2", "--method", "dp"]);
    assert_schema("moments.schema.json", &e);
    assert_schema("moments.schema.json", &d);
    assert_eq!(strip(f.clone()), strip(e));
    assert_eq!(strip(f), strip(d));
}

#[test]
fn monte_carlo_report() {
    let out = ok(&[
        "moments", "--dims", "2,2,2", "--method", "mc", "--n", "2000", "--seed", "3",
    ]);
    assert_schema("comparison.schema.json", &out);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["means"].as_array().unwrap().len(), 3);
    assert_eq!(v["cov"].as_array().unwrap().len(), 6);
}

#[test]
fn failing_comparison_exits_one() {
    let out = bpp(&[
        "moments",
        "--dims",
        "3,3,3",
        "--method",
        "mc",
        "--n",
        "50",
        "--threshold",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_schema("comparison.schema.json", &stdout(&out));
}

#[test]
fn generating_function() {
    assert_eq!(ok(&["gf", "--dims", "1,1,2"]).trim(), "1 + q + q^2");
    let json = ok(&["gf", "--dims", "2,2,2", "--format", "json", "--check"]);
    assert_schema("gf.schema.json", &json);
    let v: Vec<String> = serde_json::from_str(&json).unwrap();
    assert_eq!(v, ["1", "1", "3", "3", "4", "3", "3", "1", "1"]);
}

#[test]
fn stanley_table() {
    let out = ok(&[
        "stanley",
        "--a",
        "2",
        "--b",
        "2",
        "--max-degree",
        "3",
        "--check",
    ]);
    assert_schema("stanley.schema.json", &out);
}

#[test]
fn sampling_is_reproducible() {
    let a = ok(&[
        "sample", "--dims", "4,5,6", "--seed", "0x2a", "--format", "json",
    ]);
    let b = ok(&[
        "sample", "--dims", "4,5,6", "--seed", "42", "--format", "json",
    ]);
    assert_eq!(a, b);
    assert_schema("partition.schema.json", &a);
    let m = ok(&[
        "sample", "--dims", "3,3,3", "--method", "mcmc", "--sweeps", "50", "--format", "json",
    ]);
    assert_schema("partition.schema.json", &m);
}

#[test]
fn enumeration() {
    assert_eq!(
        ok(&["enumerate", "--dims", "2,2,2", "--count"]).trim(),
        "20"
    );
    let lines = ok(&["enumerate", "--dims", "2,2,1"]);
    assert_eq!(lines.lines().count(), 6);
    for line in lines.lines() {
        assert_schema("partition.schema.json", line);
    }
    let capped = bpp(&["enumerate", "--dims", "3,3,3", "--cap", "10", "--count"]);
    assert_eq!(capped.status.code(), Some(1));
}

#[test]
fn render_writes_svg() {
    let input = scratch("p.txt");
    let out = scratch("p.svg");
    std::fs::write(&input, "2 2 2\n2 1\n1 0\n").unwrap();
    ok(&[
        "render",
        "--in",
        input.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    let svg = std::fs::read_to_string(&out).unwrap();
    assert!(svg.starts_with("<?xml"));
    assert_eq!(svg.matches("class=\"contour\"").count(), 2);
    assert_eq!(svg.matches("class=\"sum\"").count(), 3);

    let json = scratch("p.json");
    std::fs::write(&json, r#"{"a":2,"b":2,"c":2,"z":[[2,1],[1,0]]}"#).unwrap();
    ok(&[
        "render",
        "--in",
        json.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--no-contours",
    ]);
    let svg = std::fs::read_to_string(&out).unwrap();
    assert!(!svg.contains("class=\"contour\""));
}

#[test]
fn render_rejects_invalid_partition() {
    let input = scratch("bad.txt");
    std::fs::write(&input, "2 2 2\n1 2\n0 0\n").unwrap();
    let out = bpp(&[
        "render",
        "--in",
        input.to_str().unwrap(),
        "--out",
        "/dev/null",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Monotonicity"));
}

#[test]
fn verify_small_grid() {
    let out = ok(&["verify", "--grid", "3,3,3"]);
    assert!(!out.contains("FAIL"));
    assert!(out.contains("PASS"));
}

#[test]
fn bench_reports() {
    let out = ok(&["bench", "--dims", "3,3,3", "--n", "20"]);
    assert!(out.contains("coalescence T"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(bpp(&["moments", "--dims", "2,2"]).status.code(), Some(2));
    assert_eq!(bpp(&["sample", "--dims", "0,2,2"]).status.code(), Some(2));
    assert_eq!(
        bpp(&["sample", "--dims", "2,2,2", "--seed", "0xzz"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(bpp(&["frobnicate"]).status.code(), Some(2));
}
