use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

fn prolong(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prolong")).args(args).output().expect("binary runs")
}

fn compute(op: &str, input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_prolong"))
        .args(["compute", "--op", op, "--input", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn verify_passes_and_reports_json() {
    let out = prolong(&["verify", "--example", "circle", "--suite", "all", "--samples", "200", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["overall"], json!(true));
    assert_eq!(report["example"], json!("circle"));
    assert_eq!(report["duration_ms"], json!(0));
    for c in report["checks"].as_array().unwrap() {
        assert!(c["threshold"].is_number());
    }
}

#[test]
fn sphere_group_axioms_within_tolerance() {
    let out =
        prolong(&["verify", "--example", "sphere", "--suite", "group-axioms", "--samples", "1000", "--seed", "42"]);
    assert_eq!(out.status.code(), Some(0));
    for c in stdout_json(&out)["checks"].as_array().unwrap() {
        assert!(c["max_residual"].as_f64().unwrap() <= 1e-10, "{c}");
    }
}

#[test]
fn reports_are_byte_stable() {
    let args = ["verify", "--example", "euclidean", "--suite", "equivalence", "--samples", "30", "--seed", "5"];
    assert_eq!(prolong(&args).stdout, prolong(&args).stdout);
}

#[test]
fn corrupted_representation_exits_one() {
    let out = prolong(&[
        "verify",
        "--example",
        "sphere",
        "--suite",
        "prolongation-homomorphism",
        "--samples",
        "50",
        "--seed",
        "1",
        "--corrupt-rep",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    assert_eq!(report["overall"], json!(false));
    let worst =
        report["checks"].as_array().unwrap().iter().map(|c| c["max_residual"].as_f64().unwrap()).fold(0.0, f64::max);
    assert!(worst >= 1e-2);
}

#[test]
fn paper_variant_reports_direct_formula_gap() {
    let out = prolong(&[
        "verify",
        "--example",
        "sphere",
        "--suite",
        "prolongation-homomorphism",
        "--samples",
        "50",
        "--seed",
        "1",
        "--paper-variant",
        "--report",
        "text",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("lower_block_discrepancy_generic[so2-standard]"));
    assert!(text.contains("overall: PASS"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(prolong(&["verify", "--example", "torus"]).status.code(), Some(2));
    assert_eq!(prolong(&["verify", "--example", "circle", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(prolong(&["verify", "--example", "circle", "--tol", "bogus=1"]).status.code(), Some(2));
    assert_eq!(prolong(&["verify", "--example", "circle", "--tol", "novalue"]).status.code(), Some(2));
    assert_eq!(prolong(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn tolerance_override_can_fail_a_run() {
    let out = prolong(&[
        "verify",
        "--example",
        "circle",
        "--suite",
        "group-axioms",
        "--samples",
        "5",
        "--tol",
        "star_axioms=-1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["tolerances"]["star_axioms"], json!(-1.0));
}

#[test]
fn list_examples_catalog() {
    let out = prolong(&["list-examples"]);
    assert_eq!(out.status.code(), Some(0));
    let list = stdout_json(&out);
    let sphere = list.as_array().unwrap().iter().find(|e| e["name"] == json!("sphere")).unwrap();
    assert_eq!(sphere["dim_g"], json!(3));
    assert_eq!(sphere["dim_h"], json!(1));
    assert_eq!(sphere["fiber_dim"], json!(2));
    assert_eq!(sphere["prolonged_fiber_dim"], json!(4));
}

#[test]
fn compute_star_multiply_identity() {
    let e = json!({ "a": [0.0, 0.0, 0.0], "g": [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] });
    let out = compute("star_multiply", &json!({ "group": "so3", "p": e, "q": e }).to_string());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["result"], e);
}

#[test]
fn compute_equivalence_round_trip() {
    // p = ((0.3, -0.2, 0.5), R_z(0.4)) with fiber ((1, 2), (3, 4)); q = p.(b, h)
    let input = json!({
        "example": "sphere",
        "p": { "a": [0.3, -0.2, 0.5], "g": rz(0.4), "xi": [1.0, 2.0], "u": [3.0, 4.0] },
        "k": { "b": [0.7], "h": rz(1.1) }
    });
    let acted = compute("prolonged_action", &input.to_string());
    assert_eq!(acted.status.code(), Some(0));
    let q = stdout_json(&acted)["result"].clone();

    let query = json!({ "example": "sphere", "p": input["p"], "q": q });
    let out = compute("are_equivalent", &query.to_string());
    assert_eq!(out.status.code(), Some(0));
    let result = &stdout_json(&out)["result"];
    assert_eq!(result["equivalent"], json!(true));
    assert!((result["witness"]["b"][0].as_f64().unwrap() - 0.7).abs() <= 1e-9);
    let h = &result["witness"]["h"];
    for (i, row) in rz(1.1).iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            assert!((h[i][j].as_f64().unwrap() - x).abs() <= 1e-9);
        }
    }
}

#[test]
fn compute_errors() {
    let bad = json!({ "group": "so2", "p": { "a": [0.0], "g": [[2.0, 0.0], [0.0, 1.0]] } });
    let out = compute("star_inverse", &bad.to_string());
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["error"], json!("MembershipViolation"));

    assert_eq!(compute("star_inverse", "{").status.code(), Some(2));
    assert_eq!(compute("star_inverse", r#"{"group": "so2"}"#).status.code(), Some(2));
    assert_eq!(compute("no_such_op", "{}").status.code(), Some(2));
    assert_eq!(prolong(&["compute", "--op", "star_inverse", "--input", "/nonexistent.json"]).status.code(), Some(2));
}

fn rz(t: f64) -> Vec<Vec<f64>> {
    vec![vec![t.cos(), -t.sin(), 0.0], vec![t.sin(), t.cos(), 0.0], vec![0.0, 0.0, 1.0]]
}
