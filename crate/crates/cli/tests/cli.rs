use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name)
}

fn wblowup(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wblowup")).args(args).output().expect("binary runs")
}

fn run_fixture(name: &str, extra: &[&str]) -> (i32, Value) {
    let path = fixture(name);
    let mut args = vec!["--job", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = wblowup(&args);
    let report: Value = serde_json::from_slice(&out.stdout).expect("json report on stdout");
    (out.status.code().unwrap(), report)
}

fn strip_timing(mut v: Value) -> Value {
    for c in v["checks"].as_array_mut().unwrap() {
        c["elapsed_ms"] = Value::from(0);
    }
    v
}

#[test]
fn sod_verify_passes_with_three_summands() {
    let (code, report) = run_fixture("sod_verify_x2_y1.json", &[]);
    assert_eq!(code, 0);
    let check = &report["checks"][0];
    assert_eq!(check["name"], "sod-verify");
    assert_eq!(check["verdict"], "PASS");
    assert_eq!(check["cells"][0]["summand_count"], 3);
    assert_eq!(report["job"]["twist_window"], serde_json::json!([-3, 0]));
}

#[test]
fn koszul_check_on_repeated_entry_fails_with_witness() {
    let (code, report) = run_fixture("koszul_check_xx.json", &[]);
    assert_eq!(code, 1);
    let check = &report["checks"][0];
    assert_eq!(check["verdict"], "FAIL");
    // H_1 is cohomological index -1
    assert_eq!(check["witness"]["cohomological_index"], -1);
}

#[test]
fn proj_coh_table_matches_formula() {
    let (code, report) = run_fixture("proj_coh_1_2.json", &[]);
    assert_eq!(code, 0);
    let cells = report["checks"][0]["cells"].as_array().unwrap();
    let rows: Vec<&Value> = cells.iter().filter(|c| c.get("r").is_some()).collect();
    assert_eq!(rows.len(), 9);
    for row in rows {
        assert_eq!(row["formula"], row["cech"], "{row}");
    }
}

#[test]
fn table_format_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.txt");
    let path = fixture("proj_coh_1_2.json");
    let status = wblowup(&["--job", path.to_str().unwrap(), "--format", "table", "--out", out.to_str().unwrap()]);
    assert_eq!(status.status.code(), Some(0));
    assert!(status.stdout.is_empty());
    let text = std::fs::read_to_string(out).unwrap();
    assert!(text.contains("== proj-coh : PASS"), "{text}");
    assert!(text.contains("overall: PASS"));
}

#[test]
fn malformed_job_exits_3_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\n  \"base_ring\": {\"vars\": [\"x\"]},\n  \"centre\": [{\"poly\": \"x +\", \"weight\": 1}],\n  \"twist_window\": [0, 0],\n  \"command\": \"proj-coh\"\n}\n").unwrap();
    let out = wblowup(&["--job", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains(":3:"), "{err}");

    std::fs::write(&path, "{ \"base_ring\": ").unwrap();
    let out = wblowup(&["--job", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8(out.stderr).unwrap().contains(":1:"));

    let out = wblowup(&["--job", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn thread_count_does_not_change_the_report() {
    let (c1, a) = run_fixture("all_x1_y1.json", &["--threads", "1"]);
    let (c4, b) = run_fixture("all_x1_y1.json", &["--threads", "4"]);
    assert_eq!(c1, c4);
    assert_eq!(strip_timing(a), strip_timing(b));
}

#[test]
fn report_round_trips_through_the_library_type() {
    let (_, report) = run_fixture("blowup_coh_x2_y1.json", &[]);
    let parsed: wblowup::job::RunReport = serde_json::from_value(report.clone()).unwrap();
    assert_eq!(serde_json::to_value(&parsed).unwrap(), report);
}
