//! Semi-orthogonal decomposition checks at one weighted centre.
//!
//! Blocks are ordered `Φ_{1-|d|}, ..., Φ_{-1}, Φ_0`. `Φ_0` is represented by
//! `O` and `Φ_r` by the two-term complex `[O(r+1) --s--> O(r)]`, which
//! represents the pushforward of `O_E(r)` from the exceptional divisor.
//! Categorical statements are checked on these representatives and on line
//! bundle twists only.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::cohomology::{
    blowup_complex_cohomology, exceptional_cohomology, pushforward_structure_check, weighted_proj_cohomology_formula,
    weighted_proj_ring, BlowupComplex, CechCover, CechRoute, CohomologyTable,
};
use crate::complex::{cone, hom_complex, koszul_complex, koszul_complex_of, ChainMap, GradedComplex};
use crate::engine::{hypercohomology, ClassWitness, Cover, PieceCache, TotalComplex};
use crate::error::{Error, Result};
use crate::homology::{regularity_of, RegularityReport};
use crate::piece::{stabilized_dim, PieceDegree};
use crate::poly::{Monomial, Polynomial};
use crate::rees::{extended_rees_presentation, BlowupPresentation, WeightedCentre, DEFAULT_AUX_SPAN};
use crate::ring::{Degree, GradedRing};
use crate::truncation::{StabilizedDims, Truncation, Verdict};

/// Koszul complex of `(x_0..x_n)` on `P(weights)`:
/// `0 -> O(-Σd) -> ... -> ⊕ O(-d_i) -> O -> 0`.
pub fn beilinson_resolution(weights: &[u32]) -> Result<GradedComplex> {
    if weights.is_empty() {
        return Err(Error::Invalid("weights must be nonempty".into()));
    }
    let (ring, vars) = weighted_proj_ring(&GradedRing::free(vec![])?, &weights.iter().map(|&d| (d, 0)).collect::<Vec<_>>())?;
    let seq: Vec<(Polynomial, Degree)> = vars.iter().zip(weights).map(|(&v, &d)| (ring.var(v), Degree::twist(d as i64))).collect();
    koszul_complex(&ring, &seq)
}

/// One homology class that some chart variable fails to annihilate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportWitness {
    pub homological_index: i32,
    pub degree: i64,
    pub variable: String,
    pub class: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportReport {
    pub verdict: Verdict,
    /// Number of (class, variable) pairs left unannihilated at each probed bound.
    pub unannihilated: Vec<(u32, usize)>,
    pub witness: Option<SupportWitness>,
}

/// Koszul homology of `(x_0..x_n)` on `P(weights)` is supported on the
/// irrelevant locus: each class dies under some power `x_i^k`, `k ≤ trunc.bound`.
pub fn resolution_support_check(weights: &[u32], degree_window: &[i64], trunc: &Truncation) -> Result<SupportReport> {
    let k = beilinson_resolution(weights)?;
    let charts: Vec<usize> = (0..weights.len()).collect();
    Ok(support_check(&k, &charts, degree_window, trunc))
}

/// The same check for an arbitrary sequence: `ring` graded by weight only.
pub fn resolution_support_check_sequence(
    ring: &GradedRing,
    sequence: &[Polynomial],
    chart_vars: &[usize],
    degree_window: &[i64],
    trunc: &Truncation,
) -> Result<SupportReport> {
    let k = koszul_complex_of(ring, sequence)?;
    Ok(support_check(&k, chart_vars, degree_window, trunc))
}

fn support_check(k: &GradedComplex, chart_vars: &[usize], window: &[i64], trunc: &Truncation) -> SupportReport {
    let ring = k.ring();
    let schedule = trunc.schedule();
    let probe: Vec<u32> = schedule.iter().rev().take(2).rev().copied().collect();
    let mut counts = Vec::new();
    let mut witness = None;
    for &bound in &probe {
        let per = crate::par_map(window.to_vec(), |r| unannihilated(k, chart_vars, r, bound, trunc.bound));
        let mut n = 0;
        for list in per {
            n += list.len();
            if witness.is_none() {
                witness = list.into_iter().next();
            }
        }
        counts.push((bound, n));
    }
    let verdict = match counts.as_slice() {
        [.., (_, a), (_, b)] if *a == 0 && *b == 0 => Verdict::Pass,
        [.., (_, a), (_, b)] if a == b => Verdict::Fail,
        [(_, 0)] => Verdict::Pass,
        _ => Verdict::Inconclusive,
    };
    if verdict == Verdict::Pass {
        witness = None;
    }
    let _ = ring;
    SupportReport { verdict, unannihilated: counts, witness }
}

/// Classes at degree `r` not killed by `x^k` for some chart variable `x`.
fn unannihilated(k: &GradedComplex, chart_vars: &[usize], r: i64, bound: u32, max_power: u32) -> Vec<SupportWitness> {
    let ring = k.ring();
    let mut cache = PieceCache::default();
    let here = TotalComplex::build(k, &Cover::trivial(), PieceDegree::weight(r), bound, &mut cache);
    let mut out = Vec::new();
    for &q in here.dims().keys() {
        for z in here.classes(q) {
            let parts = here.components(q, &z);
            for &v in chart_vars {
                let w = ring.vars()[v].weight;
                let killed = (1..=max_power).any(|p| {
                    let target = TotalComplex::build(k, &Cover::trivial(), PieceDegree::weight(r + p as i64 * w), bound + p, &mut cache);
                    let m = Monomial::var(ring.arity(), v, p as i32);
                    let moved: Vec<_> = parts.iter().map(|(key, poly)| (*key, poly.mul_monomial(&m))).collect();
                    match target.assemble(q, &moved) {
                        Some(vec) => target.is_coboundary(q, &vec),
                        None => false,
                    }
                });
                if !killed {
                    out.push(SupportWitness {
                        homological_index: -q,
                        degree: r,
                        variable: ring.vars()[v].name.clone(),
                        class: here.describe(q, &z),
                    });
                }
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", content = "twist", rename_all = "lowercase")]
pub enum BlockKind {
    /// `Φ_r`, `1 - |d| ≤ r ≤ -1`.
    Exceptional(i64),
    /// `Φ_0`.
    Pullback,
}

impl BlockKind {
    pub fn label(&self) -> String {
        match self {
            BlockKind::Exceptional(r) => format!("Phi_{r}"),
            BlockKind::Pullback => "Phi_0".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TwistBlock {
    pub kind: BlockKind,
    pub representative: GradedComplex,
}

/// Blocks in order `Φ_{1-|d|}, ..., Φ_{-1}, Φ_0`.
pub fn twist_blocks(blowup: &BlowupPresentation) -> Result<Vec<TwistBlock>> {
    let total = blowup.centre.total_weight();
    let ring = &blowup.ring;
    let s = ring.var(blowup.s);
    let mut out = Vec::new();
    for r in (1 - total)..=-1 {
        let rep = GradedComplex::two_term(ring, Degree::twist(r + 1), Degree::twist(r), s.clone())?;
        out.push(TwistBlock { kind: BlockKind::Exceptional(r), representative: rep });
    }
    out.push(TwistBlock { kind: BlockKind::Pullback, representative: GradedComplex::line_bundle(ring, Degree::ZERO) });
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CellRole {
    /// `Hom(later, earlier)`: must vanish.
    Forbidden,
    /// `Hom(B, B)`: concentrated in index 0.
    Diagonal,
    /// `Hom(earlier, later)`: no requirement, not computed.
    Unconstrained,
}

#[derive(Clone, Debug, Serialize)]
pub struct HomCell {
    pub from: BlockKind,
    pub to: BlockKind,
    pub role: CellRole,
    pub table: Option<CohomologyTable>,
    /// Expected index-0 dims for diagonal cells, per auxiliary degree.
    pub expected: BTreeMap<i64, StabilizedDims>,
    pub verdict: Verdict,
    pub witness: Option<ClassWitness>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HomVanishingMatrix {
    pub blocks: Vec<BlockKind>,
    /// Row-major over `blocks x blocks`, `from` = row.
    pub cells: Vec<HomCell>,
    pub verdict: Verdict,
}

impl HomVanishingMatrix {
    pub fn cell(&self, from: BlockKind, to: BlockKind) -> Option<&HomCell> {
        self.cells.iter().find(|c| c.from == from && c.to == to)
    }
}

/// Smallest twist weight in a complex.
fn min_twist(c: &GradedComplex) -> i64 {
    c.modules().values().flat_map(|m| m.twists.iter().map(|t| t.weight)).min().unwrap_or(0)
}

fn degrees_for(centre: &WeightedCentre, c: &GradedComplex, weight: i64) -> Vec<Degree> {
    centre.aux_window(min_twist(c).min(0) + weight.min(0)).into_iter().map(|k| Degree::new(weight, k)).collect()
}

/// Hom complexes between block representatives, hypercohomology in graded
/// degree 0. Forbidden cells must vanish; diagonal cells must be
/// concentrated in index 0 with the dims of `R` (for `Φ_0`) or `R/(f)`.
pub fn hom_vanishing_matrix(blowup: &BlowupPresentation, trunc: &Truncation) -> Result<HomVanishingMatrix> {
    let blocks = twist_blocks(blowup)?;
    let centre = &blowup.centre;
    let base = &centre.base;
    let quotient = base.with_relations(&centre.polys())?;
    let mut jobs = Vec::new();
    for (i, a) in blocks.iter().enumerate() {
        for (j, b) in blocks.iter().enumerate() {
            let role = match i.cmp(&j) {
                std::cmp::Ordering::Greater => CellRole::Forbidden,
                std::cmp::Ordering::Equal => CellRole::Diagonal,
                std::cmp::Ordering::Less => CellRole::Unconstrained,
            };
            jobs.push((a.clone(), b.clone(), role));
        }
    }
    let cells: Vec<Result<HomCell>> = crate::par_map(jobs, |(a, b, role)| {
        if role == CellRole::Unconstrained {
            return Ok(HomCell { from: a.kind, to: b.kind, role, table: None, expected: BTreeMap::new(), verdict: Verdict::Pass, witness: None });
        }
        let h = hom_complex(&a.representative, &b.representative)?;
        let degrees = degrees_for(centre, &h, 0);
        let table = blowup_complex_cohomology(blowup, &BlowupComplex::Complex(Box::new(h.clone())), &degrees, trunc, CechRoute::Simplified);
        let mut expected = BTreeMap::new();
        let verdict = match role {
            CellRole::Forbidden => table.vanishing(),
            _ => {
                let ring = if a.kind == BlockKind::Pullback { base } else { &quotient };
                let mut v = Verdict::Pass;
                for d in &degrees {
                    let e = stabilized_dim(ring, PieceDegree::aux(d.aux), trunc);
                    for q in table.indices() {
                        let got = table.value(q, *d);
                        let want = if q == 0 { e.value() } else { Some(0) };
                        v = v.and(match (got, want) {
                            (Some(x), Some(y)) if x == y => Verdict::Pass,
                            (Some(_), Some(_)) => Verdict::Fail,
                            _ => Verdict::Inconclusive,
                        });
                    }
                    expected.insert(d.aux, e);
                }
                v
            }
        };
        let witness = if verdict == Verdict::Fail && role == CellRole::Forbidden {
            first_nonzero(&table).and_then(|(q, d)| {
                let sb = blowup.simplified();
                let moved = crate::cohomology::transport(&h, &sb.simp);
                crate::engine::class_witness(&moved, &sb.cover(), PieceDegree::from(d), q, trunc)
            })
        } else {
            None
        };
        Ok(HomCell { from: a.kind, to: b.kind, role, table: Some(table), expected, verdict, witness })
    });
    let cells = cells.into_iter().collect::<Result<Vec<_>>>()?;
    let verdict = Verdict::all(cells.iter().map(|c| c.verdict));
    Ok(HomVanishingMatrix { blocks: blocks.iter().map(|b| b.kind).collect(), cells, verdict })
}

fn first_nonzero(t: &CohomologyTable) -> Option<(i32, Degree)> {
    t.cells.iter().find(|(_, s)| matches!(s.value(), Some(v) if v > 0)).map(|(&(q, d), _)| (q, d))
}

#[derive(Clone, Debug, Serialize)]
pub struct TriangleReport {
    pub r: i64,
    pub verdict: Verdict,
    /// Hypercohomology of `[O(r+1) -> O(r)]` at `(r, k)` relative to twists `(1, 0)`.
    pub cone: CohomologyTable,
    /// `RΓ(E, O_E(r))`.
    pub divisor: CohomologyTable,
}

/// The cone of `s : O(r+1) -> O(r)` against `RΓ(E, O_E(r))`.
pub fn exceptional_triangle_check(blowup: &BlowupPresentation, r: i64, trunc: &Truncation) -> Result<TriangleReport> {
    let cone_table = cone_of_s(blowup, r, trunc)?;
    let divisor = exceptional_cohomology(&blowup.centre, r, trunc)?;
    let verdict = cone_table.compare(&divisor).verdict;
    Ok(TriangleReport { r, verdict, cone: cone_table, divisor })
}

fn cone_of_s(blowup: &BlowupPresentation, r: i64, trunc: &Truncation) -> Result<CohomologyTable> {
    let ring = &blowup.ring;
    let src = GradedComplex::line_bundle(ring, Degree::twist(1));
    let tgt = GradedComplex::line_bundle(ring, Degree::ZERO);
    let phi = ChainMap::scalar(src, tgt, &ring.var(blowup.s))?;
    let c = cone(&phi)?;
    let degrees: Vec<Degree> = blowup.centre.aux_window(r).into_iter().map(|k| Degree::new(r, k)).collect();
    Ok(blowup_complex_cohomology(blowup, &BlowupComplex::Complex(Box::new(c)), &degrees, trunc, CechRoute::Simplified))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepKind {
    /// A twisted Koszul complex of the chart coordinates.
    Koszul,
    /// The triangle `O(r+1) -> O(r) -> j_* O_E(r)`.
    Exceptional,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessStep {
    pub kind: StepKind,
    pub produces: i64,
    /// Twists of the other terms (with multiplicity).
    pub from: Vec<i64>,
    /// Per auxiliary degree: `(lhs, rhs)` of the Euler characteristic identity.
    pub euler: Vec<(i64, i64, i64)>,
    /// Cone cohomology vs the expected third term, or acyclicity.
    pub consistency: Verdict,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct GenerationWitness {
    pub target: i64,
    pub window: (i64, i64),
    pub steps: Vec<WitnessStep>,
    pub verdict: Verdict,
    /// Index of the first step whose bookkeeping failed.
    pub failed_step: Option<usize>,
}

/// Where a generation witness lives.
#[derive(Clone, Debug)]
pub enum WitnessSpace<'a> {
    Proj(&'a [u32]),
    Blowup(&'a BlowupPresentation),
}

/// Order in which twists must be produced to reach `target` from the
/// window `[1-|d|, 0]`.
fn twist_path(total: i64, target: i64) -> Vec<i64> {
    if target < 1 - total {
        (target..=-total).rev().collect()
    } else if target > 0 {
        (1..=target).collect()
    } else {
        vec![]
    }
}

fn euler(t: &CohomologyTable, deg: Degree) -> Option<i64> {
    let mut acc = 0i64;
    for q in t.indices() {
        let v = t.value(q, deg)? as i64;
        acc += if q.rem_euclid(2) == 0 { v } else { -v };
    }
    Some(acc)
}

/// Build and verify a chain of triangles producing `O(target)` from the
/// window twists.
pub fn generation_witness(space: &WitnessSpace<'_>, target: i64, trunc: &Truncation) -> Result<GenerationWitness> {
    let weights: Vec<u32> = match space {
        WitnessSpace::Proj(w) => w.to_vec(),
        WitnessSpace::Blowup(b) => b.centre.weights(),
    };
    let total: i64 = weights.iter().map(|&d| d as i64).sum();
    let window = (1 - total, 0);
    let mut steps = Vec::new();
    // blowup twists inside the window come from the exceptional triangles
    if let WitnessSpace::Blowup(b) = space {
        let lo = target.max(1 - total);
        for r in (lo..=-1).rev() {
            steps.push(exceptional_step(b, r, trunc)?);
        }
    }
    for s in twist_path(total, target) {
        steps.push(koszul_step(space, &weights, s, trunc)?);
    }
    let failed_step = steps.iter().position(|s| s.verdict == Verdict::Fail);
    let verdict = Verdict::all(steps.iter().map(|s| s.verdict));
    Ok(GenerationWitness { target, window, steps, verdict, failed_step })
}

fn exceptional_step(b: &BlowupPresentation, r: i64, trunc: &Truncation) -> Result<WitnessStep> {
    let tri = exceptional_triangle_check(b, r, trunc)?;
    let auxes = b.centre.aux_window(r);
    let deg_r: Vec<Degree> = auxes.iter().map(|&k| Degree::new(r, k)).collect();
    let deg_r1: Vec<Degree> = auxes.iter().map(|&k| Degree::new(r + 1, k)).collect();
    let o_r = blowup_complex_cohomology(b, &BlowupComplex::Twist(Degree::ZERO), &deg_r, trunc, CechRoute::Simplified);
    let o_r1 = blowup_complex_cohomology(b, &BlowupComplex::Twist(Degree::ZERO), &deg_r1, trunc, CechRoute::Simplified);
    let mut euler_rows = Vec::new();
    let mut ok = Verdict::Pass;
    for &k in &auxes {
        let lhs = euler(&tri.cone, Degree::new(r, k));
        let a = euler(&o_r, Degree::new(r, k));
        let c = euler(&o_r1, Degree::new(r + 1, k));
        match (lhs, a, c) {
            (Some(l), Some(a), Some(c)) => {
                euler_rows.push((k, l, a - c));
                if l != a - c {
                    ok = Verdict::Fail;
                }
            }
            _ => ok = ok.and(Verdict::Inconclusive),
        }
    }
    Ok(WitnessStep {
        kind: StepKind::Exceptional,
        produces: r,
        from: vec![r + 1],
        euler: euler_rows,
        consistency: tri.verdict,
        verdict: ok.and(tri.verdict),
    })
}

/// Auxiliary degrees to probe for a given twist.
type AuxDegrees = Box<dyn Fn(i64) -> Vec<i64>>;

fn koszul_step(space: &WitnessSpace<'_>, weights: &[u32], s: i64, trunc: &Truncation) -> Result<WitnessStep> {
    let total: i64 = weights.iter().map(|&d| d as i64).sum();
    // Koszul complex of the coordinates twisted so that O(s) is an end term
    let shift = if s < 0 { s + total } else { s };
    let (ring, coords, cover, aux_of): (GradedRing, Vec<usize>, Cover, AuxDegrees) = match space {
        WitnessSpace::Proj(_) => {
            let (ring, vars) = weighted_proj_ring(&GradedRing::free(vec![])?, &weights.iter().map(|&d| (d, 0)).collect::<Vec<_>>())?;
            let cover = Cover::by_variables(&vars);
            (ring, vars, cover, Box::new(|_| vec![0]))
        }
        WitnessSpace::Blowup(b) => {
            let sb = b.simplified();
            let centre = b.centre.clone();
            (sb.ring().clone(), sb.u.clone(), sb.cover(), Box::new(move |t| centre.aux_window(t)))
        }
    };
    let seq: Vec<(Polynomial, Degree)> = coords.iter().map(|&v| (ring.var(v), ring.monomial_degree(&Monomial::var(ring.arity(), v, 1)))).collect();
    let k = koszul_complex(&ring, &seq)?.twisted(Degree::twist(shift));
    let lowest = min_twist(&k);
    let auxes = aux_of(lowest);
    // acyclicity of the twisted Koszul complex on the punctured space
    let mut consistency = Verdict::Pass;
    let per = crate::par_map(auxes.clone(), |a| hypercohomology(&k, &cover, PieceDegree::from(Degree::new(0, a)), trunc));
    for h in &per {
        for d in h.values() {
            consistency = consistency.and(match d.value() {
                Some(0) => Verdict::Pass,
                Some(_) => Verdict::Fail,
                None => Verdict::Inconclusive,
            });
        }
    }
    // Euler characteristics term by term; `O(τ)` at total degree `(0, a)`
    // contributes `RΓ(O)` at `τ + (0, a)`
    let mut twists: Vec<(i32, Degree)> = Vec::new();
    for (&i, m) in k.modules() {
        twists.extend(m.twists.iter().map(|t| (i, *t)));
    }
    let mut distinct: Vec<Degree> = twists.iter().map(|(_, t)| *t).collect();
    distinct.sort_unstable();
    distinct.dedup();
    let tables: BTreeMap<Degree, CohomologyTable> = crate::par_map(distinct, |t| {
        let table = match space {
            WitnessSpace::Proj(w) => weighted_proj_cohomology_formula(w, t.weight).as_table(),
            WitnessSpace::Blowup(b) => {
                let degs: Vec<Degree> = auxes.iter().map(|&a| Degree::new(t.weight, t.aux + a)).collect();
                blowup_complex_cohomology(b, &BlowupComplex::Twist(Degree::ZERO), &degs, trunc, CechRoute::Simplified)
            }
        };
        (t, table)
    })
    .into_iter()
    .collect();
    let mut euler_rows = Vec::new();
    let mut ok = Verdict::Pass;
    for &a in &auxes {
        let mut produced = None;
        let mut rest = Some(0i64);
        for &(i, t) in &twists {
            let chi = euler(&tables[&t], Degree::new(t.weight, t.aux + a));
            if t.weight == s && produced.is_none() {
                produced = chi.map(|c| (i, c));
                continue;
            }
            rest = match (rest, chi) {
                (Some(acc), Some(c)) => Some(acc + if i % 2 == 0 { c } else { -c }),
                _ => None,
            };
        }
        match (produced, rest) {
            (Some((i, c)), Some(rest)) => {
                // Σ (-1)^i χ(K_i) = 0, solved for the produced term
                let rhs = if i % 2 == 0 { -rest } else { rest };
                euler_rows.push((a, c, rhs));
                if c != rhs {
                    ok = Verdict::Fail;
                }
            }
            _ => ok = ok.and(Verdict::Inconclusive),
        }
    }
    let mut from: Vec<i64> = twists.iter().filter(|(_, t)| t.weight != s).map(|(_, t)| t.weight).collect();
    from.sort_unstable();
    Ok(WitnessStep { kind: StepKind::Koszul, produces: s, from, euler: euler_rows, consistency, verdict: ok.and(consistency) })
}

#[derive(Clone, Debug, Serialize)]
pub struct RegularitySummary {
    pub verdict: Verdict,
    /// Koszul complex of the centre over the base.
    pub centre: RegularityReport,
    /// Koszul complex of the deformed sequence over the ambient ring.
    pub deformed: RegularityReport,
}

/// Both Koszul complexes must be acyclic in positive degree.
pub fn centre_regularity(centre: &WeightedCentre, trunc: &Truncation) -> Result<RegularitySummary> {
    let base_k = koszul_complex(&centre.base, &centre.sequence())?;
    let top = centre.entries().iter().map(|e| e.aux).sum::<i64>() + DEFAULT_AUX_SPAN;
    let base_window: Vec<PieceDegree> = if centre.base.has_aux_grading() {
        (0..=top).map(PieceDegree::aux).collect()
    } else {
        vec![PieceDegree::aux(0)]
    };
    let c = regularity_of(&base_k, &base_window, trunc);
    let blowup = extended_rees_presentation(centre)?;
    let dk = blowup.deformed_koszul()?;
    let total = centre.total_weight();
    let mut window = Vec::new();
    for r in (-total - 1)..=1 {
        for k in centre.aux_window(r) {
            window.push(PieceDegree::from(Degree::new(r, k)));
        }
    }
    let d = regularity_of(&dk, &window, trunc);
    Ok(RegularitySummary { verdict: c.verdict.and(d.verdict), centre: c, deformed: d })
}

#[derive(Clone, Debug, Serialize)]
pub struct SodReport {
    pub centre: String,
    pub summand_count: i64,
    pub blocks: Vec<BlockKind>,
    pub regularity: RegularitySummary,
    pub pushforward: Option<Verdict>,
    pub matrix: Option<HomVanishingMatrix>,
    pub triangles: Vec<TriangleReport>,
    pub witnesses: Vec<GenerationWitness>,
    pub verdict: Verdict,
    pub scope: &'static str,
}

const SCOPE: &str = "checked on the block representatives O and [O(r+1) -> O(r)] and on line bundle twists";

/// Run every check for one centre. Witness targets are the window twists
/// plus `extra_targets`. Later checks are skipped when regularity fails.
pub fn sod_report(centre: &WeightedCentre, trunc: &Truncation) -> Result<SodReport> {
    sod_report_with_targets(centre, &[], trunc)
}

pub fn sod_report_with_targets(centre: &WeightedCentre, extra_targets: &[i64], trunc: &Truncation) -> Result<SodReport> {
    let total = centre.total_weight();
    let regularity = centre_regularity(centre, trunc)?;
    let blowup = extended_rees_presentation(centre)?;
    let blocks: Vec<BlockKind> = twist_blocks(&blowup)?.iter().map(|b| b.kind).collect();
    let mut report = SodReport {
        centre: centre.describe(),
        summand_count: total,
        blocks,
        pushforward: None,
        matrix: None,
        triangles: vec![],
        witnesses: vec![],
        verdict: regularity.verdict,
        regularity,
        scope: SCOPE,
    };
    if report.verdict == Verdict::Fail {
        return Ok(report);
    }
    let push = pushforward_structure_check(centre, trunc)?.verdict;
    let matrix = hom_vanishing_matrix(&blowup, trunc)?;
    let triangles = ((1 - total)..=-1).map(|r| exceptional_triangle_check(&blowup, r, trunc)).collect::<Result<Vec<_>>>()?;
    let mut targets: Vec<i64> = ((1 - total)..=0).chain(extra_targets.iter().copied()).collect();
    targets.sort_unstable();
    targets.dedup();
    let witnesses = targets
        .iter()
        .map(|&t| generation_witness(&WitnessSpace::Blowup(&blowup), t, trunc))
        .collect::<Result<Vec<_>>>()?;
    let verdict = Verdict::all(
        [report.verdict, push, matrix.verdict]
            .into_iter()
            .chain(triangles.iter().map(|t| t.verdict))
            .chain(witnesses.iter().map(|w| w.verdict)),
    );
    report.pushforward = Some(push);
    report.matrix = Some(matrix);
    report.triangles = triangles;
    report.witnesses = witnesses;
    report.verdict = verdict;
    Ok(report)
}

impl SodReport {
    /// Aligned plain-text rendering.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "centre          {}", self.centre);
        let _ = writeln!(out, "summand count   {}", self.summand_count);
        let _ = writeln!(out, "regularity      {}", self.regularity.verdict);
        if let Some(p) = self.pushforward {
            let _ = writeln!(out, "pushforward     {p}");
        }
        if let Some(m) = &self.matrix {
            let labels: Vec<String> = m.blocks.iter().map(|b| b.label()).collect();
            let w = labels.iter().map(|l| l.len()).max().unwrap_or(4).max(12);
            let _ = write!(out, "\n{:<w$}", "Hom(row,col)");
            for l in &labels {
                let _ = write!(out, "  {l:>w$}");
            }
            out.push('\n');
            for (i, from) in m.blocks.iter().enumerate() {
                let _ = write!(out, "{:<w$}", labels[i]);
                for to in &m.blocks {
                    let cell = m.cell(*from, *to).expect("full matrix");
                    let text = match cell.role {
                        CellRole::Unconstrained => "-".to_string(),
                        CellRole::Forbidden => format!("{} {}", "zero", cell.verdict),
                        CellRole::Diagonal => format!("diag {}", cell.verdict),
                    };
                    let _ = write!(out, "  {text:>w$}");
                }
                out.push('\n');
            }
        }
        if !self.triangles.is_empty() {
            out.push('\n');
            for t in &self.triangles {
                let _ = writeln!(out, "triangle r={:<4} {}", t.r, t.verdict);
            }
        }
        if !self.witnesses.is_empty() {
            out.push('\n');
            for w in &self.witnesses {
                let _ = writeln!(out, "witness  s={:<4} steps={:<3} {}", w.target, w.steps.len(), w.verdict);
            }
        }
        let _ = writeln!(out, "\noverall         {}", self.verdict);
        out
    }
}

/// Cohomology of `O(r)` on `P(weights)` over the rationals by the Čech route.
pub fn proj_cech_row(weights: &[u32], r: i64, trunc: &Truncation) -> Result<CohomologyTable> {
    let (ring, vars) = weighted_proj_ring(&GradedRing::free(vec![])?, &weights.iter().map(|&d| (d, 0)).collect::<Vec<_>>())?;
    Ok(crate::cohomology::cech_cohomology(&CechCover::new(ring, &vars), &[Degree::twist(r)], trunc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Variable;

    fn trunc() -> Truncation {
        Truncation::new(4, 2, 12).unwrap()
    }

    fn qxy() -> GradedRing {
        GradedRing::base(&["x", "y"], &[]).unwrap()
    }

    fn tw(c: &GradedComplex, i: i32) -> Vec<i64> {
        c.module(i).unwrap().twists.iter().map(|d| d.weight).collect()
    }

    #[test]
    fn beilinson_shapes() {
        let k = beilinson_resolution(&[1, 2]).unwrap();
        assert_eq!(tw(&k, 2), vec![-3]);
        assert_eq!(tw(&k, 1), vec![-1, -2]);
        assert_eq!(tw(&k, 0), vec![0]);
        let k = beilinson_resolution(&[2, 3]).unwrap();
        assert_eq!((tw(&k, 2), tw(&k, 1), tw(&k, 0)), (vec![-5], vec![-2, -3], vec![0]));
    }

    #[test]
    fn support_regular_and_adversarial() {
        let window: Vec<i64> = (-4..=4).collect();
        assert_eq!(resolution_support_check(&[1, 1], &window, &trunc()).unwrap().verdict, Verdict::Pass);
        let ring = GradedRing::free(vec![Variable::new("x_0", 1, 0), Variable::new("x_1", 1, 0)]).unwrap();
        let x0 = ring.parse("x_0").unwrap();
        let rep = resolution_support_check_sequence(&ring, &[x0.clone(), x0], &[0, 1], &window, &trunc()).unwrap();
        assert_eq!(rep.verdict, Verdict::Fail);
        assert_eq!(rep.witness.unwrap().variable, "x_1");
    }

    #[test]
    fn ordinary_blowup_matrix() {
        let c = WeightedCentre::parse(qxy(), &[("x", 1), ("y", 1)]).unwrap();
        let b = extended_rees_presentation(&c).unwrap();
        let m = hom_vanishing_matrix(&b, &trunc()).unwrap();
        assert_eq!(m.blocks, vec![BlockKind::Exceptional(-1), BlockKind::Pullback]);
        let f = m.cell(BlockKind::Pullback, BlockKind::Exceptional(-1)).unwrap();
        assert_eq!(f.verdict, Verdict::Pass);
        let d = m.cell(BlockKind::Exceptional(-1), BlockKind::Exceptional(-1)).unwrap();
        let t = d.table.as_ref().unwrap();
        assert_eq!(t.value(0, Degree::new(0, 0)), Some(1));
        assert_eq!(d.verdict, Verdict::Pass, "{:?}", t);
        assert_eq!(m.verdict, Verdict::Pass);
    }

    #[test]
    fn triangles() {
        let c = WeightedCentre::parse(qxy(), &[("x", 1), ("y", 1)]).unwrap();
        let b = extended_rees_presentation(&c).unwrap();
        let t = exceptional_triangle_check(&b, -1, &trunc()).unwrap();
        assert_eq!(t.verdict, Verdict::Pass);
        assert_eq!(t.cone.vanishing(), Verdict::Pass);
        let t0 = exceptional_triangle_check(&b, 0, &trunc()).unwrap();
        assert_eq!(t0.verdict, Verdict::Pass);
        assert_eq!(t0.cone.value(0, Degree::new(0, 0)), Some(1));
        assert_eq!(t0.cone.value(1, Degree::new(0, 0)), Some(0));
    }

    #[test]
    fn proj_witnesses() {
        let w = generation_witness(&WitnessSpace::Proj(&[1, 1]), -2, &trunc()).unwrap();
        assert_eq!(w.steps.len(), 1);
        assert_eq!(w.steps[0].from, vec![-1, -1, 0]);
        assert_eq!(w.verdict, Verdict::Pass);
        let w = generation_witness(&WitnessSpace::Proj(&[1, 2]), 1, &trunc()).unwrap();
        assert_eq!(w.verdict, Verdict::Pass);
        assert_eq!(w.steps[0].produces, 1);
    }

    #[test]
    fn blowup_witness_uses_exceptional_triangles() {
        let c = WeightedCentre::parse(qxy(), &[("x", 2), ("y", 1)]).unwrap();
        let b = extended_rees_presentation(&c).unwrap();
        let w = generation_witness(&WitnessSpace::Blowup(&b), -2, &trunc()).unwrap();
        let kinds: Vec<(StepKind, i64)> = w.steps.iter().map(|s| (s.kind, s.produces)).collect();
        assert_eq!(kinds, vec![(StepKind::Exceptional, -1), (StepKind::Exceptional, -2)]);
        assert_eq!(w.verdict, Verdict::Pass, "{w:?}");
    }

    #[test]
    fn non_regular_centre_fails_early() {
        let base = GradedRing::base(&["x"], &[]).unwrap();
        let c = WeightedCentre::parse(base, &[("x", 1), ("x", 1)]).unwrap();
        let rep = sod_report(&c, &trunc()).unwrap();
        assert_eq!(rep.verdict, Verdict::Fail);
        assert!(rep.regularity.centre.witness.is_some());
        assert!(rep.matrix.is_none());
    }
}
