//! End-to-end tests of the `delone-forge` binary: subcommand contracts,
//! exit codes, artifact round-trips, and byte determinism.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_delone-forge"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf-8 stderr")
}

fn write(dir: &Path, name: &str, contents: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

const IDENTITY_2: &str = r#"{"dim": 2, "gram": [["1", "0"], ["0", "1"]]}"#;
const SKEW_2: &str = r#"{"dim": 2, "gram": [["2", "1"], ["1", "2"]]}"#;
const TRIANGLE: &str = r#"{"points": [["0", "0"], ["1", "0"], ["0", "1"]]}"#;

#[test]
fn hadamard_instance_certifies_delone() {
    let out = run(&["hadamard", "--n", "3", "--certify"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["expected_relvol"], "2");
    assert_eq!(doc["certificate"]["verdict"], "delone");
    assert_eq!(doc["certificate"]["on_sphere"].as_array().unwrap().len(), 8);
    assert_eq!(doc["certificate"]["witness"], serde_json::Value::Null);
}

#[test]
fn hadamard_output_is_deterministic() {
    let a = run(&["hadamard", "--n", "4", "--no-certify"]);
    let b = run(&["hadamard", "--n", "4", "--no-certify"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn hadamard_rejects_out_of_range_exponent() {
    let out = run(&["hadamard", "--n", "9"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["hadamard", "--n", "0"]);
    assert_eq!(out.status.code(), Some(1));
    // n = 6 certification is refused, but the instance itself builds
    let out = run(&["hadamard", "--n", "6", "--certify"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("up to n = 5"));
}

#[test]
fn certify_not_delone_exits_two_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let form = write(dir.path(), "form.json", IDENTITY_2);
    let points = write(dir.path(), "points.json", TRIANGLE);
    let out = run(&["certify", "--form", &form, "--points", &points]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("witness (1, 1)"), "{}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["verdict"], "not_delone");
    assert_eq!(doc["witness"][0], "1");
}

#[test]
fn certify_delone_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let form = write(dir.path(), "form.json", SKEW_2);
    let points = write(dir.path(), "points.json", TRIANGLE);
    let out = run(&["certify", "--form", &form, "--points", &points]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["verdict"], "delone");
}

#[test]
fn certify_accepts_simplex_documents() {
    let dir = tempfile::tempdir().unwrap();
    let form = write(dir.path(), "form.json", SKEW_2);
    let simplex = write(
        dir.path(),
        "simplex.json",
        r#"{"vertices": [["0", "0"], ["1", "0"], ["0", "1"]]}"#,
    );
    let out = run(&["certify", "--form", &form, "--points", &simplex]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

#[test]
fn relvol_prints_integer() {
    let dir = tempfile::tempdir().unwrap();
    let simplex = write(
        dir.path(),
        "simplex.json",
        r#"{"vertices": [["1", "1", "0"], ["0", "1", "1"], ["1", "0", "1"], ["0", "0", "0"]]}"#,
    );
    let out = run(&["relvol", "--simplex", &simplex]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "2\n");
}

#[test]
fn enumerate_prints_sorted_points() {
    let dir = tempfile::tempdir().unwrap();
    let form = write(dir.path(), "form.json", IDENTITY_2);
    let out = run(&["enumerate", "--form", &form, "--center", "0,0", "--r2", "1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "-1 0\n0 -1\n0 0\n0 1\n1 0\n");
}

#[test]
fn enumerate_empty_result() {
    let dir = tempfile::tempdir().unwrap();
    let form = write(dir.path(), "form.json", IDENTITY_2);
    let out = run(&[
        "enumerate",
        "--form",
        &form,
        "--center",
        "1/2,1/2",
        "--r2",
        "1/5",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "");
}

#[test]
fn product_of_instance_and_unit_interval() {
    let dir = tempfile::tempdir().unwrap();
    let instance_path = dir.path().join("h3.json");
    let out = bin()
        .args(["hadamard", "--n", "3", "--no-certify"])
        .args(["-o", instance_path.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));

    let out = run(&[
        "product",
        "--left",
        instance_path.to_str().unwrap(),
        "--right",
        "unit",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["count"], 8);
    assert_eq!(doc["relvol_each"], "2");
    assert_eq!(doc["exhaustive"], true);
    let certs = doc["certificates"].as_array().unwrap();
    assert_eq!(certs.len(), 8);
    assert!(certs.iter().all(|c| c["verdict"] == "delone"));
    assert_eq!(doc["product_certificate"]["verdict"], "delone");
}

#[test]
fn product_emitted_artifacts_reload() {
    // hadamard -> file -> product --left file: the round trip already
    // exercises reloading; reload the report too.
    let dir = tempfile::tempdir().unwrap();
    let instance_path = dir.path().join("h2.json");
    let report_path = dir.path().join("report.json");
    let out = bin()
        .args(["hadamard", "--n", "2", "-o", instance_path.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    let out = bin()
        .args([
            "product",
            "--left",
            instance_path.to_str().unwrap(),
            "--right",
            "unit",
            "-o",
            report_path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(report["count"], 4);
    assert_eq!(report["relvol_each"], "1");
    assert!(report["epsilon"].as_str().unwrap().contains('/'));
}

#[test]
fn bounds_csv_row_values() {
    let out = run(&["bounds", "--dmax", "8", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 9); // header + 8 rows
    let d7: Vec<&str> = lines[7].split(',').collect();
    assert_eq!(d7[0], "7");
    assert_eq!(d7[1], "4");
    assert_eq!(d7[3], "187");
}

#[test]
fn bounds_json_round_trips_and_is_deterministic() {
    let a = run(&["bounds", "--dmax", "12", "--format", "json"]);
    let b = run(&["bounds", "--dmax", "12", "--format", "json"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 12);
    assert_eq!(doc["cube_upper_growth"], "0.816");
}

#[test]
fn invalid_form_is_rejected_with_pointed_message() {
    let dir = tempfile::tempdir().unwrap();
    let form = write(
        dir.path(),
        "bad.json",
        r#"{"dim": 2, "gram": [["1", "2"], ["2", "1"]]}"#,
    );
    let points = write(dir.path(), "points.json", TRIANGLE);
    let out = run(&["certify", "--form", &form, "--points", &points]);
    assert_eq!(out.status.code(), Some(1));
    assert!(
        stderr(&out).contains("not positive definite"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn rank_deficient_instance_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["hadamard", "--n", "2", "--no-certify"]);
    let mut doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    doc["lattice"]["basis"] = serde_json::json!([["1", "2", "0"], ["2", "4", "0"], ["0", "0", "1"]]);
    let path = write(dir.path(), "broken.json", &doc.to_string());
    let out = run(&["product", "--left", &path, "--right", "unit"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("rank deficient"), "{}", stderr(&out));
}

#[test]
fn degenerate_points_are_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let form = write(dir.path(), "form.json", IDENTITY_2);
    let points = write(
        dir.path(),
        "collinear.json",
        r#"{"points": [["0", "0"], ["1", "1"], ["2", "2"]]}"#,
    );
    let out = run(&["certify", "--form", &form, "--points", &points]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("degenerate"), "{}", stderr(&out));
}

#[test]
fn thread_cap_env_keeps_output_identical() {
    let base = run(&["bounds", "--dmax", "6", "--format", "csv"]);
    let capped = bin()
        .env("DELONE_FORGE_THREADS", "1")
        .args(["bounds", "--dmax", "6", "--format", "csv"])
        .output()
        .unwrap();
    assert!(capped.status.success());
    assert_eq!(base.stdout, capped.stdout);
}
