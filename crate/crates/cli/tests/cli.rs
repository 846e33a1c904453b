use std::process::{Command, Output};

use serde_json::Value;

fn entmon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entmon")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn classify_rational() {
    let out = entmon(&["classify", "--spectrum", "1/2,1/4,1/4", "--base", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "1");
    assert_eq!(v["verdict"], "rational");
    assert_eq!(v["value"], "3/2");
}

#[test]
fn classify_zero_and_transcendental() {
    let v = json(&entmon(&["classify", "--spectrum", "1,0", "--base", "e"]));
    assert_eq!(v["verdict"], "zero");
    let v = json(&entmon(&["classify", "--spectrum", "diag:1/3,1/3,1/3", "--base", "2"]));
    assert_eq!(v["verdict"], "transcendental");
}

#[test]
fn classify_validation_errors_exit_2() {
    for args in [
        &["classify", "--spectrum", "1/2,1/3", "--base", "2"][..],
        &["classify", "--spectrum", "1/2,1/2", "--base", "1"][..],
        &["classify", "--spectrum", "1/2,1/2", "--base", "sqrt2"][..],
        &["classify", "--spectrum", "1/2,-1/2,1"][..],
        &["classify", "--spectrum", r#"{"re": [[0.5, 0], [0, 0.5]]}"#][..],
        &["classify"][..],
    ] {
        let out = entmon(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn monodromy_reports_six_values_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("out.csv");
    let out = entmon(&["monodromy", "--through", "0.2,0.3", "--batches", "5", "--trace", trace.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["distinct_count"], 6);
    assert_eq!(v["f_values"].as_array().unwrap().len(), 6);
    assert_eq!(v["ledger"]["records"].as_array().unwrap().len(), 5);
    let csv = std::fs::read_to_string(&trace).unwrap();
    assert!(csv.starts_with("step,lambda1_re"));
    assert_eq!(csv.lines().count() as u64, v["tracked_states"].as_u64().unwrap() + 1);
}

#[test]
fn monodromy_zero_batches() {
    let out = entmon(&["monodromy", "--through", "0.2,0.3", "--batches", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["f_values"].as_array().unwrap().len(), 1);
    let f0 = v["ledger"]["f0"].as_f64().unwrap();
    assert!((f0 - 2.5f64.ln() / (5.0f64 / 3.0).ln()).abs() < 1e-13);
}

#[test]
fn monodromy_path_through_branch_point_exits_3() {
    let path = r#"{"kind": "polyline", "vertices": [[0.2, 0], [0.16828024153964677, 0], [0.18, 0.05]], "closed": true}"#;
    let out = entmon(&["monodromy", "--through", "0.2,0.3", "--path", path]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn monodromy_slice_document_and_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let doc = dir.path().join("slice.json");
    std::fs::write(&doc, r#"{"d": 3, "through": [0.2, 0.3], "tail": []}"#).unwrap();
    let out = entmon(&["monodromy", "--slice", doc.to_str().unwrap(), "--batches", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["distinct_count"], 3);

    assert_eq!(entmon(&["monodromy", "--through", "0.2"]).status.code(), Some(2));
    assert_eq!(entmon(&["monodromy", "--through", "0.2,0.3", "--tol-lattice", "0"]).status.code(), Some(2));
    assert_eq!(entmon(&["monodromy", "--c", "2.0"]).status.code(), Some(2));
}

#[test]
fn levelset_csv() {
    let out = entmon(&["levelset", "--through", "0.2,0.3", "--points", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 11);
    for row in &lines[1..] {
        let cols: Vec<f64> = row.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cols.len(), 10);
        // gauss ratio equals minus the slope
        assert!((cols[6] + cols[7]).abs() < 1e-9 * cols[6].abs().max(1.0));
    }
}

#[test]
fn witness_passes_and_is_deterministic() {
    let a = entmon(&["witness-d2", "--c", "0.5", "--samples", "200", "--seed", "11"]);
    let b = entmon(&["--seed", "11", "witness-d2", "--c", "0.5", "--samples", "200"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert!(v["witness"]["max_deviation"].as_f64().unwrap() <= 1e-10);
    assert_eq!(entmon(&["witness-d2", "--c", "0.9"]).status.code(), Some(2));
}

#[test]
fn monodromy_output_is_deterministic() {
    let a = entmon(&["monodromy", "--through", "0.2,0.3", "--batches", "3"]);
    let b = entmon(&["monodromy", "--through", "0.2,0.3", "--batches", "3"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn tangent_rank_examples() {
    let v = json(&entmon(&[
        "tangent-rank",
        "--rho",
        "diag:0.2,0.3,0.5",
        "--sigma",
        "diag:0.5,0.3,0.2",
        "--perturb",
        "offdiag",
    ]));
    assert_eq!(v["rank"], 3);
    assert!(v["commutator_norm"].as_f64().unwrap() > 0.0);

    let v = json(&entmon(&["tangent-rank", "--rho", "diag:0.2,0.3,0.5", "--sigma", "identity/3"]));
    assert_eq!(v["commutator_norm"].as_f64(), Some(0.0));
    assert!(v["rank"].as_u64().unwrap() < 3);

    let grad = r#"{"re": [[0, 1, 0], [1, 0, 0], [0, 0, 0]]}"#;
    let v = json(&entmon(&["tangent-rank", "--rho", "diag:0.2,0.3,0.5", "--grad", grad]));
    assert_eq!(v["rank"], 3);

    assert_eq!(entmon(&["tangent-rank", "--rho", "diag:0.2,0.3,0.5"]).status.code(), Some(2));
}

#[test]
fn chart_examples() {
    let out = entmon(&["chart", "--rho", "identity/3"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&entmon(&["chart", "--rho", "diag:0.2,0.3,0.5"]));
    assert_eq!(v["chart"]["full_rank"], true);
    assert!(v["chart"]["jacobian_condition"].as_f64().unwrap() < 1e8);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = entmon(&["--out", path.to_str().unwrap(), "classify", "--spectrum", "1/2,1/2", "--base", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["value"], "1");
}

#[test]
fn floats_use_seventeen_digits() {
    let out = entmon(&["classify", "--spectrum", "1/3,2/3", "--base", "e"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let line = text.lines().find(|l| l.contains("float_entropy")).unwrap();
    let digits: String = line.split(':').nth(1).unwrap().trim().trim_end_matches(',').split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(digits.len(), 17);
}
