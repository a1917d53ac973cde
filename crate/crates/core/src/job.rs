//! Batch jobs: a JSON job description in, a run report and an exit code out.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cohomology::{
    blowup_cohomology_cech, blowup_cohomology_spectral, pushforward_structure_check, weighted_proj_cohomology_formula,
};
use crate::error::Error;
use crate::homology::koszul_regularity_check;
use crate::piece::PieceDegree;
use crate::rees::{extended_rees_presentation, rees_generators, verify_presentation_against_rees, ReesPresentation, WeightedCentre};
use crate::ring::{Degree, GradedRing};
use crate::sod::{proj_cech_row, sod_report_with_targets, CellRole};
use crate::truncation::{StabilizedDims, Truncation, Verdict};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const COMMANDS: [&str; 7] =
    ["koszul-check", "rees-gens", "rees-verify", "proj-coh", "blowup-coh", "pushforward-check", "sod-verify"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseRingSpec {
    pub vars: Vec<String>,
    #[serde(default)]
    pub relations: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CentreSpec {
    pub poly: String,
    pub weight: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationSpec {
    pub initial: u32,
    pub step: u32,
    pub max: u32,
}

impl Default for TruncationSpec {
    fn default() -> Self {
        let t = Truncation::default();
        TruncationSpec { initial: t.bound, step: t.step, max: t.max_bound }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Table,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub base_ring: BaseRingSpec,
    pub centre: Vec<CentreSpec>,
    pub twist_window: [i64; 2],
    #[serde(default)]
    pub truncation: TruncationSpec,
    pub command: String,
    #[serde(default)]
    pub format: Format,
}

/// An input error with a 1-based position in the job text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl std::fmt::Display for JobError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for JobError {}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

/// Locate `needle` as a JSON string literal, then step `inner` characters in.
fn locate(text: &str, needle: &str, inner: usize) -> (usize, usize) {
    let quoted = serde_json::to_string(needle).unwrap_or_default();
    match text.find(&quoted) {
        Some(at) => {
            let skip: usize = needle.chars().take(inner).map(char::len_utf8).sum();
            line_col(text, at + 1 + skip)
        }
        None => (1, 1),
    }
}

fn error_position(e: &Error) -> usize {
    match e {
        Error::Syntax { position, .. } | Error::UnknownVariable { position, .. } | Error::BadExponent { position } => *position,
        _ => 0,
    }
}

/// A parsed and validated job.
#[derive(Clone, Debug)]
pub struct Job {
    pub spec: JobSpec,
    pub centre: WeightedCentre,
    pub trunc: Truncation,
}

impl Job {
    pub fn parse(text: &str) -> Result<Job, JobError> {
        let spec: JobSpec = serde_json::from_str(text)
            .map_err(|e| JobError { line: e.line().max(1), column: e.column().max(1), message: e.to_string() })?;
        Job::validate(spec, text)
    }

    /// Check a spec against its source text (used for error positions).
    pub fn validate(spec: JobSpec, text: &str) -> Result<Job, JobError> {
        let at_key = |key: &str, message: String| {
            let (line, column) = locate(text, key, 0);
            JobError { line, column, message }
        };
        if !spec.command.eq_ignore_ascii_case("all") && !COMMANDS.contains(&spec.command.as_str()) {
            return Err(at_key(&spec.command, format!("unknown command `{}`; expected one of {} or all", spec.command, COMMANDS.join(", "))));
        }
        let [lo, hi] = spec.twist_window;
        if lo > hi {
            return Err(at_key("twist_window", format!("twist window [{lo}, {hi}] is empty")));
        }
        let t = spec.truncation;
        let trunc = Truncation::new(t.initial, t.step, t.max).map_err(|e| at_key("truncation", e.to_string()))?;
        let names: Vec<&str> = spec.base_ring.vars.iter().map(String::as_str).collect();
        let bare = GradedRing::base(&names, &[]).map_err(|e| at_key("vars", e.to_string()))?;
        let mut relations = Vec::new();
        for r in &spec.base_ring.relations {
            let p = bare.parse(r).map_err(|e| {
                let (line, column) = locate(text, r, error_position(&e));
                JobError { line, column, message: format!("relation: {e}") }
            })?;
            relations.push(p);
        }
        let base = bare.with_relations(&relations).map_err(|e| at_key("relations", e.to_string()))?;
        if spec.centre.is_empty() {
            return Err(at_key("centre", "centre must have at least one entry".into()));
        }
        let mut entries = Vec::new();
        for c in &spec.centre {
            if c.weight == 0 {
                return Err(at_key(&c.poly, format!("weight of `{}` must be at least 1", c.poly)));
            }
            let p = base.parse(&c.poly).map_err(|e| {
                let (line, column) = locate(text, &c.poly, error_position(&e));
                JobError { line, column, message: format!("centre: {e}") }
            })?;
            entries.push((p, c.weight));
        }
        let centre = WeightedCentre::new(base, entries).map_err(|e| at_key("centre", e.to_string()))?;
        Ok(Job { spec, centre, trunc })
    }

    fn twists(&self) -> std::ops::RangeInclusive<i64> {
        self.spec.twist_window[0]..=self.spec.twist_window[1]
    }

    fn commands(&self) -> Vec<&'static str> {
        if self.spec.command.eq_ignore_ascii_case("all") {
            COMMANDS.to_vec()
        } else {
            COMMANDS.iter().copied().filter(|c| *c == self.spec.command).collect()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub verdict: Verdict,
    pub cells: Vec<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub version: String,
    pub job: JobSpec,
    pub checks: Vec<CheckResult>,
}

impl RunReport {
    /// `0` all PASS, `1` some FAIL, `2` otherwise (some INCONCLUSIVE).
    pub fn exit_code(&self) -> i32 {
        exit_code(self.checks.iter().map(|c| c.verdict))
    }

    pub fn verdict(&self) -> Verdict {
        Verdict::all(self.checks.iter().map(|c| c.verdict))
    }

    /// The same report with every timing field zeroed.
    pub fn without_timing(&self) -> RunReport {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.elapsed_ms = 0;
        }
        r
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Aligned plain-text tables, one per check.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "wblowup {}  command {}", self.version, self.job.command);
        for c in &self.checks {
            let _ = writeln!(out, "\n== {} : {} ({} ms)", c.name, c.verdict, c.elapsed_ms);
            out.push_str(&render_cells(&c.cells));
            if let Some(w) = &c.witness {
                let _ = writeln!(out, "witness: {}", compact(w));
            }
        }
        let _ = writeln!(out, "\noverall: {}", self.verdict());
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Table => self.to_table(),
        }
    }
}

pub fn exit_code(verdicts: impl IntoIterator<Item = Verdict>) -> i32 {
    match Verdict::all(verdicts) {
        Verdict::Pass => 0,
        Verdict::Fail => 1,
        Verdict::Inconclusive => 2,
    }
}

pub const EXIT_INPUT_ERROR: i32 = 3;

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn render_cells(cells: &[Value]) -> String {
    let mut columns: Vec<String> = Vec::new();
    for c in cells {
        if let Value::Object(m) = c {
            for k in m.keys() {
                if !columns.contains(k) {
                    columns.push(k.clone());
                }
            }
        }
    }
    if columns.is_empty() {
        return String::new();
    }
    let rows: Vec<Vec<String>> = cells
        .iter()
        .map(|c| columns.iter().map(|k| c.get(k).map_or(String::new(), compact)).collect())
        .collect();
    let widths: Vec<usize> = columns
        .iter()
        .enumerate()
        .map(|(i, k)| rows.iter().map(|r| r[i].chars().count()).max().unwrap_or(0).max(k.chars().count()))
        .collect();
    let mut out = String::new();
    let line = |cells: &[String]| {
        let parts: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
        parts.join("  ").trim_end().to_string() + "\n"
    };
    out.push_str(&line(&columns));
    out.push_str(&line(&widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>()));
    for r in &rows {
        out.push_str(&line(r));
    }
    out
}

fn dims_value(s: &StabilizedDims) -> Value {
    match s.value() {
        Some(v) => json!(v),
        None => json!(s.to_string()),
    }
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report parts serialize")
}

/// Run every selected check. Timing uses `clock`, which returns milliseconds.
pub fn run_with_clock(job: &Job, clock: &dyn Fn() -> u64) -> crate::error::Result<RunReport> {
    let mut checks = Vec::new();
    for name in job.commands() {
        let start = clock();
        let mut found = run_command(job, name)?;
        let end = clock();
        for c in &mut found {
            c.elapsed_ms = end.saturating_sub(start);
        }
        checks.extend(found);
    }
    Ok(RunReport { version: VERSION.to_string(), job: job.spec.clone(), checks })
}

#[cfg(not(target_arch = "wasm32"))]
pub fn run(job: &Job) -> crate::error::Result<RunReport> {
    let origin = std::time::Instant::now();
    run_with_clock(job, &|| origin.elapsed().as_millis() as u64)
}

fn check(name: &str, verdict: Verdict, cells: Vec<Value>, witness: Option<Value>) -> CheckResult {
    CheckResult { name: name.to_string(), verdict, cells, witness, elapsed_ms: 0 }
}

fn run_command(job: &Job, name: &str) -> crate::error::Result<Vec<CheckResult>> {
    let centre = &job.centre;
    let trunc = &job.trunc;
    Ok(match name {
        "koszul-check" => koszul_checks(job)?,
        "rees-gens" => {
            let top = centre.total_weight().max(1) as u32;
            let mut cells = Vec::new();
            let mut verdict = Verdict::Pass;
            for d in 1..=top {
                let g = rees_generators(centre, d, trunc)?;
                verdict = verdict.and(g.pruning);
                cells.push(json!({"degree": d, "generators": g.printed, "pruning": g.pruning}));
            }
            vec![check(name, verdict, cells, None)]
        }
        "rees-verify" => {
            let pres = ReesPresentation::from_rees_generators(centre, trunc)?;
            let max_degree = 2 * centre.weights().into_iter().max().unwrap_or(1);
            let v = verify_presentation_against_rees(centre, &pres, max_degree, trunc)?;
            let gens: Vec<String> = pres.generators.iter().map(|g| format!("{}={}*t^{}", g.name, centre.base.print(&g.image), g.degree)).collect();
            let mut cells = vec![json!({"generators": gens})];
            for d in &v.degrees {
                cells.push(json!({"degree": d.degree, "verdict": d.comparison.verdict}));
            }
            let witness = v.unequal_at.map(|d| json!({"unequal_at": d, "failing_relations": v.failing_relations}));
            vec![check(name, v.verdict, cells, witness)]
        }
        "proj-coh" => {
            let weights = centre.weights();
            let rows = crate::par_map(job.twists().collect(), |r| (r, weighted_proj_cohomology_formula(&weights, r), proj_cech_row(&weights, r, trunc)));
            let mut cells = Vec::new();
            let mut verdict = Verdict::Pass;
            for (r, formula, cech) in rows {
                let cech = cech?;
                let cmp = formula.as_table().compare(&cech);
                verdict = verdict.and(cmp.verdict);
                let n = formula.n;
                let f: Vec<u64> = (0..=n).map(|q| formula.get(q)).collect();
                let c: Vec<Value> = (0..=n as i32).map(|q| dims_value(&cech.get(q, Degree::twist(r)))).collect();
                cells.push(json!({"r": r, "formula": f, "cech": c, "verdict": cmp.verdict}));
            }
            let mut w = weights.clone();
            w.sort_unstable();
            vec![check(name, verdict, cells, None).with_note(json!({"weights": w}))]
        }
        "blowup-coh" => {
            let blowup = extended_rees_presentation(centre)?;
            let rows = crate::par_map(job.twists().collect(), |r| {
                (r, blowup_cohomology_cech(&blowup, r, trunc), blowup_cohomology_spectral(&blowup, r, trunc))
            });
            let mut cells = Vec::new();
            let mut verdict = Verdict::Pass;
            let mut witness = None;
            for (r, cech, spectral) in rows {
                let (rows, spec) = spectral?;
                let cmp = cech.compare(&spec);
                verdict = verdict.and(cmp.verdict).and(rows.higher_vanish);
                if witness.is_none() && !cmp.mismatches.is_empty() {
                    witness = Some(json!({"r": r, "mismatches": to_value(&cmp.mismatches)}));
                }
                let keys: std::collections::BTreeSet<(i32, Degree)> = cech.cells.keys().chain(spec.cells.keys()).copied().collect();
                for (q, d) in keys {
                    cells.push(json!({
                        "r": r, "aux": d.aux, "q": q,
                        "cech": dims_value(&cech.get(q, d)),
                        "spectral": dims_value(&spec.get(q, d)),
                    }));
                }
            }
            vec![check(name, verdict, cells, witness)]
        }
        "pushforward-check" => {
            let rep = pushforward_structure_check(centre, trunc)?;
            let mut cells = Vec::new();
            for (k, base) in &rep.base_dims {
                let d = Degree::new(0, *k);
                let higher: Vec<Value> = rep.blowup.indices().into_iter().filter(|q| *q > 0).map(|q| dims_value(&rep.blowup.get(q, d))).collect();
                cells.push(json!({
                    "aux": k,
                    "base_dim": dims_value(base),
                    "h0": dims_value(&rep.blowup.get(0, d)),
                    "higher": higher,
                    "unit_rank": rep.unit_rank.get(k),
                }));
            }
            vec![check(name, rep.verdict, cells, None)]
        }
        "sod-verify" => {
            let extra: Vec<i64> = job.twists().collect();
            let rep = sod_report_with_targets(centre, &extra, trunc)?;
            let blocks: Vec<String> = rep.blocks.iter().map(|b| b.label()).collect();
            let mut cells = vec![json!({"part": "summary", "summand_count": rep.summand_count, "blocks": blocks, "verdict": rep.verdict})];
            cells.push(json!({"part": "regularity", "verdict": rep.regularity.verdict}));
            if let Some(p) = rep.pushforward {
                cells.push(json!({"part": "pushforward", "verdict": p}));
            }
            let mut witness = rep.regularity.centre.witness.as_ref().or(rep.regularity.deformed.witness.as_ref()).map(to_value);
            if let Some(m) = &rep.matrix {
                for c in m.cells.iter().filter(|c| c.role != CellRole::Unconstrained) {
                    let dims: Vec<Value> = c.table.as_ref().map_or(vec![], |t| {
                        t.cells.iter().map(|(&(q, d), s)| json!([q, d.aux, dims_value(s)])).collect()
                    });
                    cells.push(json!({
                        "part": "hom",
                        "from": c.from.label(),
                        "to": c.to.label(),
                        "role": c.role,
                        "dims": dims,
                        "verdict": c.verdict,
                    }));
                    if witness.is_none() {
                        witness = c.witness.as_ref().map(to_value);
                    }
                }
            }
            for t in &rep.triangles {
                cells.push(json!({"part": "triangle", "r": t.r, "verdict": t.verdict}));
            }
            for w in &rep.witnesses {
                cells.push(json!({"part": "witness", "s": w.target, "steps": w.steps.len(), "verdict": w.verdict}));
                if witness.is_none() {
                    witness = w.failed_step.map(|i| json!({"target": w.target, "failed_step": i, "step": to_value(&w.steps[i])}));
                }
            }
            vec![check(name, rep.verdict, cells, witness)]
        }
        other => return Err(Error::Invalid(format!("unknown command `{other}`"))),
    })
}

impl CheckResult {
    fn with_note(mut self, note: Value) -> Self {
        self.cells.insert(0, note);
        self
    }
}

fn koszul_checks(job: &Job) -> crate::error::Result<Vec<CheckResult>> {
    let centre = &job.centre;
    let trunc = &job.trunc;
    let base = &centre.base;
    let top = centre.entries().iter().map(|e| e.aux).sum::<i64>() + crate::rees::DEFAULT_AUX_SPAN;
    let window: Vec<PieceDegree> = if base.has_aux_grading() { (0..=top).map(PieceDegree::aux).collect() } else { vec![PieceDegree::aux(0)] };
    let rep = koszul_regularity_check(base, &centre.sequence(), &window, trunc)?;
    let cells: Vec<Value> = rep
        .table
        .cells
        .iter()
        .map(|(&(i, d), s)| json!({"sequence": "centre", "index": i, "aux": d.aux, "dim": dims_value(s)}))
        .collect();
    let mut verdict = rep.verdict;
    let mut witness = rep.witness.as_ref().map(to_value);

    let blowup = extended_rees_presentation(centre)?;
    let mut deg_window = Vec::new();
    for r in job.twists() {
        for k in centre.aux_window(r) {
            deg_window.push(PieceDegree::from(Degree::new(r, k)));
        }
    }
    let deformed = koszul_regularity_check(&blowup.ambient, &blowup.deformed_sequence(), &deg_window, trunc)?;
    let mut cells = cells;
    for (&(i, d), s) in &deformed.table.cells {
        cells.push(json!({"sequence": "deformed", "index": i, "r": d.weight, "aux": d.aux, "dim": dims_value(s)}));
    }
    verdict = verdict.and(deformed.verdict);
    if witness.is_none() {
        witness = deformed.witness.as_ref().map(to_value);
    }
    Ok(vec![check("koszul-check", verdict, cells, witness)])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn job(body: &str) -> Result<Job, JobError> {
        Job::parse(body)
    }

    const OK: &str = r#"{
  "base_ring": {"vars": ["x", "y"], "relations": []},
  "centre": [{"poly": "x", "weight": 2}, {"poly": "y", "weight": 1}],
  "twist_window": [-3, 0],
  "truncation": {"initial": 4, "step": 2, "max": 12},
  "command": "proj-coh",
  "format": "json"
}"#;

    #[test]
    fn parses_valid_job() {
        let j = job(OK).unwrap();
        assert_eq!(j.centre.total_weight(), 3);
        assert_eq!(j.trunc, Truncation::new(4, 2, 12).unwrap());
    }

    #[test]
    fn syntax_error_has_position() {
        let bad = OK.replace("\"twist_window\": [-3, 0],", "\"twist_window\": [-3 0],");
        let e = job(&bad).unwrap_err();
        assert_eq!(e.line, 4);
        assert!(e.column > 1);
    }

    #[test]
    fn bad_polynomial_points_into_string() {
        let bad = OK.replace("\"poly\": \"y\"", "\"poly\": \"y + z\"");
        let e = job(&bad).unwrap_err();
        assert_eq!(e.line, 3);
        let col = bad.lines().nth(2).unwrap().find("y + z").unwrap() + 1;
        assert_eq!(e.column, col + 4, "{e}");
    }

    #[test]
    fn semantic_errors() {
        assert!(job(&OK.replace("[-3, 0]", "[1, 0]")).unwrap_err().message.contains("empty"));
        assert!(job(&OK.replace("\"weight\": 1", "\"weight\": 0")).is_err());
        assert!(job(&OK.replace("proj-coh", "frobnicate")).unwrap_err().message.contains("unknown command"));
        assert!(job(&OK.replace("\"initial\": 4", "\"initial\": 40")).is_err());
        assert!(job(&OK.replace("\"format\": \"json\"", "\"format\": \"xml\"")).is_err());
        assert!(job(&OK.replace("\"command\"", "\"colour\": 1, \"command\"")).is_err());
    }

    #[test]
    fn exit_codes() {
        use Verdict::*;
        assert_eq!(exit_code([Pass, Pass]), 0);
        assert_eq!(exit_code([Pass, Inconclusive]), 2);
        assert_eq!(exit_code([Inconclusive, Fail]), 1);
        assert_eq!(exit_code([]), 0);
    }

    #[test]
    fn proj_coh_report_round_trips() {
        let j = job(&OK.replace("[-3, 0]", "[-4, 4]")).unwrap();
        let rep = run(&j).unwrap();
        assert_eq!(rep.exit_code(), 0);
        let back: RunReport = serde_json::from_str(&rep.to_json()).unwrap();
        assert_eq!(back, rep);
        let table = rep.to_table();
        assert!(table.contains("proj-coh : PASS"), "{table}");
        // P(1,2) at r = -3: H^1 = 1
        let cell = rep.checks[0].cells.iter().find(|c| c["r"] == json!(-3)).unwrap();
        assert_eq!(cell["formula"], json!([0, 1]));
    }
}
