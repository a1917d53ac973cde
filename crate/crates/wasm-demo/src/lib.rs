//! Browser bindings: three checks driven from a static page.
//!
//! Every entry point returns a JSON string
//! `{"ok": bool, "exit_code": int, "table": string, "report": object|null, "error": string|null}`
//! so the page never has to deal with thrown exceptions.

use serde::Serialize;
use wasm_bindgen::prelude::*;
use wblowup::job::{run_with_clock, Job, JobSpec, EXIT_INPUT_ERROR};

#[derive(Serialize)]
struct Outcome {
    ok: bool,
    exit_code: i32,
    table: String,
    report: Option<serde_json::Value>,
    error: Option<String>,
}

impl Outcome {
    fn failed(error: String) -> Outcome {
        Outcome { ok: false, exit_code: EXIT_INPUT_ERROR, table: String::new(), report: None, error: Some(error) }
    }
}

/// Parse `"x:2, y:1"` into centre entries.
fn parse_centre(text: &str) -> Result<Vec<serde_json::Value>, String> {
    text.split(',')
        .map(str::trim)
        .filter(|e| !e.is_empty())
        .map(|entry| {
            let (poly, weight) = entry.rsplit_once(':').ok_or_else(|| format!("`{entry}` should look like poly:weight"))?;
            let weight: u32 = weight.trim().parse().map_err(|_| format!("bad weight in `{entry}`"))?;
            Ok(serde_json::json!({"poly": poly.trim(), "weight": weight}))
        })
        .collect()
}

fn parse_vars(text: &str) -> Vec<String> {
    text.split(|c: char| c == ',' || c.is_whitespace()).filter(|v| !v.is_empty()).map(String::from).collect()
}

fn run_command(vars: &str, centre: &str, window: [i64; 2], command: &str) -> Outcome {
    let centre = match parse_centre(centre) {
        Ok(c) => c,
        Err(e) => return Outcome::failed(e),
    };
    let spec = serde_json::json!({
        "base_ring": {"vars": parse_vars(vars), "relations": []},
        "centre": centre,
        "twist_window": window,
        "command": command,
    });
    let text = serde_json::to_string_pretty(&spec).expect("plain json");
    let spec: JobSpec = match serde_json::from_str(&text) {
        Ok(s) => s,
        Err(e) => return Outcome::failed(e.to_string()),
    };
    let job = match Job::validate(spec, &text) {
        Ok(j) => j,
        Err(e) => return Outcome::failed(e.message),
    };
    match run_with_clock(&job, &|| 0) {
        Ok(report) => Outcome {
            ok: true,
            exit_code: report.exit_code(),
            table: report.to_table(),
            report: serde_json::to_value(&report).ok(),
            error: None,
        },
        Err(e) => Outcome::failed(e.to_string()),
    }
}

fn to_json(o: &Outcome) -> String {
    serde_json::to_string(o).expect("outcome serializes")
}

/// Cohomology of `O(r)` on `P(weights)` for `r_min ≤ r ≤ r_max`, by the
/// counting formula and by Čech complexes. `weights` is e.g. `"1, 2"`.
#[wasm_bindgen]
pub fn proj_cohomology(weights: &str, r_min: i32, r_max: i32) -> String {
    let ws: Vec<&str> = weights.split(',').map(str::trim).filter(|w| !w.is_empty()).collect();
    let names: Vec<String> = (0..ws.len()).map(|i| format!("t{i}")).collect();
    let centre: Vec<String> = names.iter().zip(&ws).map(|(n, w)| format!("{n}:{w}")).collect();
    to_json(&run_command(&names.join(","), &centre.join(","), [r_min as i64, r_max as i64], "proj-coh"))
}

/// Koszul regularity of the centre and of its deformed sequence.
#[wasm_bindgen]
pub fn koszul_check(vars: &str, centre: &str) -> String {
    to_json(&run_command(vars, centre, [-2, 0], "koszul-check"))
}

/// Full decomposition report for a centre.
#[wasm_bindgen]
pub fn sod_summary(vars: &str, centre: &str) -> String {
    to_json(&run_command(vars, centre, [0, 0], "sod-verify"))
}

#[wasm_bindgen]
pub fn version() -> String {
    wblowup::job::VERSION.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> serde_json::Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn proj_table_for_p12() {
        let out = parse(&proj_cohomology("1, 2", -4, 4));
        assert_eq!(out["ok"], true);
        assert_eq!(out["exit_code"], 0);
        assert!(out["table"].as_str().unwrap().contains("proj-coh : PASS"));
    }

    #[test]
    fn koszul_on_repeated_entry_fails() {
        let out = parse(&koszul_check("x", "x:1, x:1"));
        assert_eq!(out["exit_code"], 1);
        assert!(!out["report"]["checks"][0]["witness"].is_null());
    }

    #[test]
    fn sod_summary_counts_summands() {
        let out = parse(&sod_summary("x y", "x:2, y:1"));
        assert_eq!(out["exit_code"], 0);
        assert_eq!(out["report"]["checks"][0]["cells"][0]["summand_count"], 3);
    }

    #[test]
    fn bad_input_is_reported_not_thrown() {
        let out = parse(&sod_summary("x y", "x:two"));
        assert_eq!(out["ok"], false);
        assert_eq!(out["exit_code"], 3);
        let out = parse(&koszul_check("x", "z:1"));
        assert!(out["error"].as_str().unwrap().contains("unknown variable"));
    }
}
