use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn example(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("examples")
        .join(name)
        .display()
        .to_string()
}

fn hbsep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hbsep"))
        .args(args)
        .output()
        .expect("spawn hbsep")
}

fn doc(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn temp_file(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("hbsep-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

fn strip_timings(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timings_ms");
    v
}

#[test]
fn gauge_of_example1_at_3_minus4() {
    let out = hbsep(&[
        "gauge",
        "--input",
        &example("example1.json"),
        "--point",
        "3,-4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = doc(&out)["value"]["gauge"].as_f64().unwrap();
    assert!((v - 7.0).abs() < 1e-12, "{v}");
}

#[test]
fn separate_example2_gives_the_x_axis_normal() {
    let out = hbsep(&["separate", "--input", &example("example2.json")]);
    assert_eq!(out.status.code(), Some(0));
    let d = doc(&out);
    let n: Vec<f64> = serde_json::from_value(d["normal"].clone()).unwrap();
    assert!(
        (n[0].abs() - 1.0).abs() < 1e-12 && n[1].abs() < 1e-8 && n[2].abs() < 1e-8,
        "{n:?}"
    );
    assert_eq!(d["certificate"]["valid"], Value::Bool(true));
    assert_eq!(d["status"], "ok");
}

#[test]
fn output_is_deterministic_apart_from_timings() {
    for cmd in ["separate", "extend", "roundtrip"] {
        let a = hbsep(&[cmd, "--input", &example("example1.json"), "--seed", "7"]);
        let b = hbsep(&[cmd, "--input", &example("example1.json"), "--seed", "7"]);
        assert_eq!(strip_timings(doc(&a)), strip_timings(doc(&b)), "{cmd}");
    }
}

#[test]
fn output_flag_writes_the_document() {
    let path = std::env::temp_dir().join(format!("hbsep-out-{}.json", std::process::id()));
    let out = hbsep(&[
        "separate",
        "--input",
        &example("example3_quotient.json"),
        "--output",
        &path.display().to_string(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let d: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let n: Vec<f64> = serde_json::from_value(d["normal"].clone()).unwrap();
    assert!(n[0].abs() < 1e-8 && (n[1].abs() - 1.0).abs() < 1e-12);
}

#[test]
fn conic_membership() {
    let e1 = example("example1.json");
    let inside = doc(&hbsep(&["conic", "--input", &e1, "--point", "2,1"]));
    let outside = doc(&hbsep(&["conic", "--input", &e1, "--point", "-1,0"]));
    assert_eq!(inside["value"]["member"], Value::Bool(true));
    assert_eq!(outside["value"]["member"], Value::Bool(false));
}

#[test]
fn verify_accepts_the_pinned_quotient_normal() {
    let out = hbsep(&["verify", "--input", &example("example3_quotient.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(doc(&out)["certificate"]["valid"], Value::Bool(true));
}

#[test]
fn render_writes_svg() {
    let svg = std::env::temp_dir().join(format!("hbsep-{}.svg", std::process::id()));
    let out = hbsep(&[
        "render",
        "--input",
        &example("example1.json"),
        "--svg",
        &svg.display().to_string(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") && text.contains("<circle"));
}

#[test]
fn repro_passes() {
    let out = hbsep(&["repro"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert_eq!(
        text.lines().filter(|l| l.starts_with("PASS")).count(),
        3,
        "{text}"
    );
}

// exit 2

#[test]
fn missing_input_file() {
    let out = hbsep(&["separate", "--input", "/nonexistent/problem.json"]);
    assert_eq!(out.status.code(), Some(2));
    let d = doc(&out);
    assert_eq!(d["status"], "error");
    assert_eq!(d["failure_reason"]["exit_code"], 2);
    assert!(d["certificate"].get("a_clearance").is_some());
}

// exit 3

#[test]
fn dimension_mismatch_is_a_schema_error() {
    let path = temp_file(
        "mismatch.json",
        r#"{"version": 1, "dimension": 3,
            "A": {"type": "ball", "center": [2.0, 0.0], "radius": 1.0}, "S": []}"#,
    );
    let out = hbsep(&["separate", "--input", &path]);
    assert_eq!(out.status.code(), Some(3));
    let msg = doc(&out)["failure_reason"]["message"]
        .as_str()
        .unwrap()
        .to_string();
    assert!(msg.contains("A.center"), "{msg}");
}

#[test]
fn malformed_json_reports_line_and_field() {
    let path = temp_file(
        "typo.json",
        "{\"version\": 1,\n \"dimension\": 2,\n \"A\": {\"type\": \"ball\", \"centre\": [2, 0], \"radius\": 1}}",
    );
    let out = hbsep(&["separate", "--input", &path]);
    assert_eq!(out.status.code(), Some(3));
    let msg = doc(&out)["failure_reason"]["message"]
        .as_str()
        .unwrap()
        .to_string();
    assert!(msg.contains("line 3") && msg.contains("field 'A"), "{msg}");
}

#[test]
fn usage_errors_are_schema_errors() {
    assert_eq!(hbsep(&["frobnicate"]).status.code(), Some(3));
    let out = hbsep(&[
        "gauge",
        "--input",
        &example("example1.json"),
        "--point",
        "1,2,3",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let out = hbsep(&[
        "separate",
        "--input",
        &example("example1.json"),
        "--gamma-rule",
        "widest",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(hbsep(&["--help"]).status.code(), Some(0));
}

// exit 4

#[test]
fn subspace_meeting_the_set_is_a_precondition_failure() {
    let path = temp_file(
        "meets.json",
        r#"{"version": 1, "dimension": 2,
            "A": {"type": "ball", "center": [0.0, 0.5], "radius": 1.0}, "S": [[1.0, 0.0]]}"#,
    );
    let out = hbsep(&["separate", "--input", &path]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(doc(&out)["failure_reason"]["kind"], "input");
}

#[test]
fn verify_rejects_a_crossing_hyperplane() {
    let path = temp_file(
        "crossing.json",
        r#"{"version": 1, "dimension": 2,
            "A": {"type": "ball", "center": [2.0, 0.0], "radius": 1.0}, "S": [],
            "normal": [0.0, 1.0]}"#,
    );
    let out = hbsep(&["verify", "--input", &path]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(doc(&out)["certificate"]["a_disjoint"], Value::Bool(false));
}

// exit 5

#[test]
fn domination_beyond_tolerance_is_a_solver_failure() {
    let out = hbsep(&[
        "extend",
        "--input",
        &example("example2.json"),
        "--tol",
        "1e-300",
    ]);
    assert_eq!(out.status.code(), Some(5));
    let d = doc(&out);
    assert_eq!(d["failure_reason"]["kind"], "solver");
    assert!(d["certificate"]["domination_violation"].as_f64().unwrap() > 1e-300);
}

#[test]
fn result_keys_match_the_schema() {
    let schema: Value =
        serde_json::from_str(include_str!("../../../docs/schema/result.v1.json")).unwrap();
    let required = |v: &Value| {
        let mut k: Vec<String> = v["required"]
            .as_array()
            .unwrap()
            .iter()
            .map(|s| s.as_str().unwrap().to_string())
            .collect();
        k.sort();
        k
    };
    let keys = |v: &Value| {
        let mut k: Vec<String> = v.as_object().unwrap().keys().cloned().collect();
        k.sort();
        k
    };
    let d = doc(&hbsep(&["separate", "--input", &example("example1.json")]));
    assert_eq!(keys(&d), required(&schema));
    assert_eq!(
        keys(&d["certificate"]),
        required(&schema["properties"]["certificate"])
    );
}
