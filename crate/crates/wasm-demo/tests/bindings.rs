use serde_json::Value;
use wblowup_wasm_demo::{koszul_check, proj_cohomology, sod_summary, version};

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn version_matches_core() {
    assert_eq!(version(), wblowup::job::VERSION);
}

#[test]
fn proj_rows_agree() {
    let out = parse(&proj_cohomology("1,1,2", -5, 2));
    let cells = out["report"]["checks"][0]["cells"].as_array().unwrap();
    let rows: Vec<&Value> = cells.iter().filter(|c| c.get("r").is_some()).collect();
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|r| r["formula"] == r["cech"]));
}

#[test]
fn regular_centre_passes_koszul() {
    let out = parse(&koszul_check("x, y", "x:1, y:1"));
    assert_eq!(out["exit_code"], 0, "{out}");
}

#[test]
fn empty_centre_is_an_input_error() {
    let out = parse(&sod_summary("x", ""));
    assert_eq!(out["ok"], false);
    assert!(out["error"].is_string());
}
