//! Cohomology of twists `O(r)` on punctured affine spaces, weighted
//! projective stacks and weighted blowups.
//!
//! Two routes are provided and cross-checked: the Čech complex of the chart
//! cover `D(x_i)` on truncated graded pieces, and closed forms (monomial
//! counts for weighted projective stacks, the two Koszul rows for blowups).
//! Cells are keyed by cohomological index and bidegree `(r, k)`, where `k`
//! is the auxiliary degree over the base.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::complex::{koszul_complex, GradedComplex};
use crate::engine::{hypercohomology, BlockKey, Cover, PieceCache, TotalComplex};
use crate::error::Result;
use crate::homology::{homology, HomologyTable};
use crate::linalg::Echelon;
use crate::piece::{stabilized_dim, GradedPieceBasis, PieceDegree};
use crate::rees::{exceptional_ring, BlowupPresentation, WeightedCentre, DEFAULT_AUX_SPAN};
use crate::ring::{Degree, GradedRing, Variable};
use crate::truncation::{StabilizedDims, Truncation, Verdict};

/// A ring with a chart cover and the twist whose cohomology is wanted.
#[derive(Clone, Debug)]
pub struct CechCover {
    pub ring: GradedRing,
    pub cover: Cover,
    pub twist: Degree,
}

impl CechCover {
    /// Charts `D(x)` for the listed variables, untwisted.
    pub fn new(ring: GradedRing, chart_vars: &[usize]) -> Self {
        CechCover { ring, cover: Cover::by_variables(chart_vars), twist: Degree::ZERO }
    }
}

/// `dim H^q` per cohomological index and bidegree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CohomologyTable {
    #[serde(serialize_with = "crate::truncation::cells_as_list")]
    pub cells: BTreeMap<(i32, Degree), StabilizedDims>,
}

impl CohomologyTable {
    pub fn get(&self, q: i32, deg: Degree) -> StabilizedDims {
        self.cells.get(&(q, deg)).cloned().unwrap_or_else(|| StabilizedDims::exact(0))
    }

    pub fn value(&self, q: i32, deg: Degree) -> Option<usize> {
        self.get(q, deg).value()
    }

    pub fn degrees(&self) -> BTreeSet<Degree> {
        self.cells.keys().map(|(_, d)| *d).collect()
    }

    pub fn indices(&self) -> BTreeSet<i32> {
        self.cells.keys().map(|(q, _)| *q).collect()
    }

    pub fn all_stable(&self) -> bool {
        self.cells.values().all(|s| s.stable)
    }

    pub fn merge(&mut self, other: CohomologyTable) {
        self.cells.extend(other.cells);
    }

    /// PASS when every cell is stably zero.
    pub fn vanishing(&self) -> Verdict {
        Verdict::all(self.cells.values().map(|s| match s.value() {
            Some(0) => Verdict::Pass,
            Some(_) => Verdict::Fail,
            None => Verdict::Inconclusive,
        }))
    }

    /// Cellwise comparison over the union of both key sets.
    pub fn compare(&self, other: &CohomologyTable) -> TableComparison {
        let keys: BTreeSet<(i32, Degree)> = self.cells.keys().chain(other.cells.keys()).copied().collect();
        let mut mismatches = Vec::new();
        let mut verdict = Verdict::Pass;
        for (q, d) in keys {
            let (a, b) = (self.get(q, d), other.get(q, d));
            match (a.value(), b.value()) {
                (Some(x), Some(y)) if x == y => {}
                (Some(x), Some(y)) => {
                    verdict = Verdict::Fail;
                    mismatches.push(Mismatch { q, degree: d, left: x, right: y });
                }
                _ => verdict = verdict.and(Verdict::Inconclusive),
            }
        }
        TableComparison { verdict, mismatches }
    }

    /// Sum of the stabilized values over auxiliary degrees, per `(q, r)`.
    pub fn totals_by_twist(&self) -> BTreeMap<(i32, i64), Option<usize>> {
        let mut out: BTreeMap<(i32, i64), Option<usize>> = BTreeMap::new();
        for (&(q, d), s) in &self.cells {
            let e = out.entry((q, d.weight)).or_insert(Some(0));
            *e = match (*e, s.value()) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            };
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub q: i32,
    pub degree: Degree,
    pub left: usize,
    pub right: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableComparison {
    pub verdict: Verdict,
    pub mismatches: Vec<Mismatch>,
}

fn table_from(complex: &GradedComplex, cover: &Cover, degrees: &[Degree], trunc: &Truncation) -> CohomologyTable {
    let per = crate::par_map(degrees.to_vec(), |d| (d, hypercohomology(complex, cover, PieceDegree::from(d), trunc)));
    let mut cells = BTreeMap::new();
    for (d, h) in per {
        for (q, s) in h {
            cells.insert((q, d), s);
        }
    }
    CohomologyTable { cells }
}

/// Čech cohomology of `O(twist)` over the cover at each bidegree.
pub fn cech_cohomology(cover: &CechCover, degrees: &[Degree], trunc: &Truncation) -> CohomologyTable {
    let o = GradedComplex::line_bundle(&cover.ring, cover.twist);
    table_from(&o, &cover.cover, degrees, trunc)
}

/// Closed-form dimensions of `H^0` and `H^n` of `O(r)` on `P(weights)` over
/// the rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FormulaRow {
    pub r: i64,
    /// `n` = number of weights minus one.
    pub n: usize,
    pub h0: u64,
    pub hn: u64,
}

impl FormulaRow {
    /// `dim H^q`, zero outside `{0, n}`; for `n = 0` both counts land in `H^0`.
    pub fn get(&self, q: usize) -> u64 {
        match (q, self.n) {
            (0, 0) => self.h0 + self.hn,
            (0, _) => self.h0,
            (q, n) if q == n => self.hn,
            _ => 0,
        }
    }

    pub fn as_table(&self) -> CohomologyTable {
        let mut cells = BTreeMap::new();
        for q in 0..=self.n {
            cells.insert((q as i32, Degree::new(self.r, 0)), StabilizedDims::exact(self.get(q) as usize));
        }
        CohomologyTable { cells }
    }
}

/// Number of `a ∈ Z_{≥0}^len` with `Σ a_i w_i = target`.
fn count_solutions(weights: &[u32], target: i64) -> u64 {
    if target < 0 {
        return 0;
    }
    let t = target as usize;
    let mut ways = vec![0u64; t + 1];
    ways[0] = 1;
    for &w in weights {
        let w = w as usize;
        for v in w..=t {
            ways[v] += ways[v - w];
        }
    }
    ways[t]
}

/// `H^0 = #{a ≥ 0 : Σ a_i d_i = r}`, `H^n = #{a ≥ 1 : Σ a_i d_i = -r}`.
pub fn weighted_proj_cohomology_formula(weights: &[u32], r: i64) -> FormulaRow {
    assert!(!weights.is_empty(), "weights must be nonempty");
    let total: i64 = weights.iter().map(|&d| d as i64).sum();
    FormulaRow {
        r,
        n: weights.len() - 1,
        h0: count_solutions(weights, r),
        hn: count_solutions(weights, -r - total),
    }
}

/// `base[x_0..x_n]` with `x_i` of bidegree `(d_i, a_i)`, fresh names `x_i`.
pub fn weighted_proj_ring(base: &GradedRing, vars: &[(u32, i64)]) -> Result<(GradedRing, Vec<usize>)> {
    let mut taken = BTreeSet::new();
    let mut extra = Vec::new();
    for (i, &(d, a)) in vars.iter().enumerate() {
        let name = base.fresh_name(&format!("x_{i}"), &taken);
        taken.insert(name.clone());
        extra.push(Variable::new(name, d as i64, a));
    }
    let ring = base.extend(extra)?;
    let charts = (base.arity()..ring.arity()).collect();
    Ok((ring, charts))
}

fn aux_range(base: &GradedRing) -> Vec<i64> {
    if base.has_aux_grading() {
        (0..=DEFAULT_AUX_SPAN).collect()
    } else {
        vec![0]
    }
}

/// Čech cohomology of `O(r)` on `P(weights)` over `base`, with the
/// coordinates in auxiliary degree 0. Over a graded base, cells cover
/// `k ∈ 0..=DEFAULT_AUX_SPAN`.
pub fn weighted_proj_cohomology_cech(base: &GradedRing, weights: &[u32], r: i64, trunc: &Truncation) -> Result<CohomologyTable> {
    let vars: Vec<(u32, i64)> = weights.iter().map(|&d| (d, 0)).collect();
    weighted_proj_cohomology_graded(base, &vars, r, &aux_range(base), trunc)
}

/// Same with explicit coordinate bidegrees and auxiliary degrees.
pub fn weighted_proj_cohomology_graded(
    base: &GradedRing,
    vars: &[(u32, i64)],
    r: i64,
    auxes: &[i64],
    trunc: &Truncation,
) -> Result<CohomologyTable> {
    let (ring, charts) = weighted_proj_ring(base, vars)?;
    let cover = CechCover::new(ring, &charts);
    let degrees: Vec<Degree> = auxes.iter().map(|&k| Degree::new(r, k)).collect();
    Ok(cech_cohomology(&cover, &degrees, trunc))
}

/// How the blowup ring is presented to the Čech route.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CechRoute {
    /// Base variables solved by the relations are eliminated first.
    #[default]
    Simplified,
    /// The presentation as given.
    Unsimplified,
}

/// `RΓ(X̃, O(r))` by the Čech complex on the charts `D(u_i)`, at every
/// auxiliary degree of the centre's window for `r`.
pub fn blowup_cohomology_cech(blowup: &BlowupPresentation, r: i64, trunc: &Truncation) -> CohomologyTable {
    blowup_cohomology_cech_with(blowup, r, trunc, CechRoute::Simplified)
}

pub fn blowup_cohomology_cech_with(blowup: &BlowupPresentation, r: i64, trunc: &Truncation, route: CechRoute) -> CohomologyTable {
    let degrees: Vec<Degree> = blowup.centre.aux_window(r).into_iter().map(|k| Degree::new(r, k)).collect();
    blowup_complex_cohomology(blowup, &BlowupComplex::Twist(Degree::ZERO), &degrees, trunc, route)
}

/// Complexes on the blowup handed to the Čech engine.
#[derive(Clone, Debug)]
pub enum BlowupComplex {
    /// `O(t)`.
    Twist(Degree),
    /// A complex over the unsimplified ring.
    Complex(Box<GradedComplex>),
}

/// Hypercohomology of a complex on the blowup at the given bidegrees.
pub fn blowup_complex_cohomology(
    blowup: &BlowupPresentation,
    what: &BlowupComplex,
    degrees: &[Degree],
    trunc: &Truncation,
    route: CechRoute,
) -> CohomologyTable {
    let complex = match what {
        BlowupComplex::Twist(t) => GradedComplex::line_bundle(&blowup.ring, *t),
        BlowupComplex::Complex(c) => (**c).clone(),
    };
    match route {
        CechRoute::Unsimplified => table_from(&complex, &blowup.cover(), degrees, trunc),
        CechRoute::Simplified => {
            let sb = blowup.simplified();
            let moved = transport(&complex, &sb.simp);
            table_from(&moved, &sb.cover(), degrees, trunc)
        }
    }
}

/// Carry a complex across a linear elimination.
pub(crate) fn transport(c: &GradedComplex, simp: &crate::ring::Simplified) -> GradedComplex {
    let ring = simp.ring.clone();
    let mut diffs = BTreeMap::new();
    for &i in c.modules().keys() {
        if let Some(d) = c.differential(i) {
            let mut m = crate::complex::PolyMatrix::zero(ring.arity(), d.rows, d.cols);
            for r in 0..d.rows {
                for k in 0..d.cols {
                    m.set(r, k, simp.map(d.get(r, k)));
                }
            }
            diffs.insert(i, m);
        }
    }
    GradedComplex::new(ring, c.modules().clone(), diffs).expect("elimination preserves complexes")
}

/// The two rows of the hypercohomology spectral sequence.
#[derive(Clone, Debug, Serialize)]
pub struct SpectralRows {
    /// Koszul homology of the deformed sequence over the ambient ring.
    pub row_q0: HomologyTable,
    /// Koszul homology of the centre over the base, per auxiliary degree.
    pub row_qn: HomologyTable,
    /// Top-row monomials `s^c u^{-a-1}` used at this twist, printed.
    pub top_monomials: Vec<String>,
    /// `E_2^{0,0}` dims per bidegree.
    #[serde(serialize_with = "crate::truncation::cells_as_list")]
    pub e2_q0: BTreeMap<Degree, StabilizedDims>,
    /// `E_2^{0,n}` dims per bidegree.
    #[serde(serialize_with = "crate::truncation::cells_as_list")]
    pub e2_qn: BTreeMap<Degree, StabilizedDims>,
    /// PASS when all higher Koszul homology in both rows is stably zero.
    pub higher_vanish: Verdict,
}

/// Exponent data of the top-row monomials `s^c ∏ u_i^{-a_i-1}` of weight `r`:
/// `(c, a, aux)`.
fn top_row_monomials(centre: &WeightedCentre, r: i64) -> Vec<(i64, Vec<i64>, i64)> {
    let weights: Vec<i64> = centre.weights().iter().map(|&d| d as i64).collect();
    let auxes: Vec<i64> = centre.entries().iter().map(|e| e.aux).collect();
    // -c - Σ (a_i + 1) d_i = r
    let budget = -r - weights.iter().sum::<i64>();
    let mut out = Vec::new();
    if budget < 0 {
        return out;
    }
    fn rec(w: &[i64], i: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<(i64, Vec<i64>)>) {
        if i == w.len() {
            out.push((left, cur.clone()));
            return;
        }
        let mut a = 0;
        while a * w[i] <= left {
            cur.push(a);
            rec(w, i + 1, left - a * w[i], cur, out);
            cur.pop();
            a += 1;
        }
    }
    let mut raw = Vec::new();
    rec(&weights, 0, budget, &mut Vec::new(), &mut raw);
    for (c, a) in raw {
        let aux = -a.iter().zip(&auxes).map(|(ai, x)| (ai + 1) * x).sum::<i64>();
        out.push((c, a, aux));
    }
    out
}

/// `RΓ(X̃, O(r))` from the two Koszul rows, assuming two-row degeneration.
pub fn blowup_cohomology_spectral(blowup: &BlowupPresentation, r: i64, trunc: &Truncation) -> Result<(SpectralRows, CohomologyTable)> {
    let centre = &blowup.centre;
    let n = centre.len() as i32 - 1;
    let auxes = centre.aux_window(r);
    // row 0
    let k0 = blowup.deformed_koszul()?;
    let row0_degrees: Vec<PieceDegree> = auxes.iter().map(|&k| PieceDegree::from(Degree::new(r, k))).collect();
    let row_q0 = homology(&k0, &row0_degrees, trunc);
    // row n
    let kn = koszul_complex(&centre.base, &centre.sequence())?;
    let tops = top_row_monomials(centre, r);
    let needed: BTreeSet<i64> = tops.iter().flat_map(|(_, _, a)| auxes.iter().map(move |&k| k - a)).collect();
    let rown_degrees: Vec<PieceDegree> = needed.iter().map(|&k| PieceDegree::aux(k)).collect();
    let row_qn = homology(&kn, &rown_degrees, trunc);

    let higher_of = |t: &HomologyTable| {
        Verdict::all(t.higher().map(|(_, s)| match s.value() {
            Some(0) => Verdict::Pass,
            Some(_) => Verdict::Fail,
            None => Verdict::Inconclusive,
        }))
    };
    let higher_vanish = higher_of(&row_q0).and(higher_of(&row_qn));

    let mut e2_q0 = BTreeMap::new();
    let mut e2_qn = BTreeMap::new();
    let mut table = CohomologyTable::default();
    for &k in &auxes {
        let deg = Degree::new(r, k);
        let h00 = row_q0.get(0, PieceDegree::from(deg)).cloned().unwrap_or_else(|| StabilizedDims::exact(0));
        let parts: Vec<StabilizedDims> = tops
            .iter()
            .map(|(_, _, a)| row_qn.get(0, PieceDegree::aux(k - a)).cloned().unwrap_or_else(|| StabilizedDims::exact(0)))
            .collect();
        let h0n = StabilizedDims::sum(parts.iter());
        e2_q0.insert(deg, h00.clone());
        e2_qn.insert(deg, h0n.clone());
        if n == 0 {
            table.cells.insert((0, deg), StabilizedDims::sum([&h00, &h0n]));
        } else {
            table.cells.insert((0, deg), h00);
            for q in 1..n {
                table.cells.insert((q, deg), StabilizedDims::exact(0));
            }
            table.cells.insert((n, deg), h0n);
        }
    }
    let names = blowup.ring.names();
    let top_monomials = tops
        .iter()
        .map(|(c, a, _)| {
            let mut parts = Vec::new();
            if *c > 0 {
                parts.push(format!("{}^{c}", names[blowup.s]));
            }
            for (ai, &ui) in a.iter().zip(&blowup.u) {
                parts.push(format!("{}^{}", names[ui], -ai - 1));
            }
            parts.join("*")
        })
        .collect();
    Ok((SpectralRows { row_q0, row_qn, top_monomials, e2_q0, e2_qn, higher_vanish }, table))
}

#[derive(Clone, Debug, Serialize)]
pub struct PushforwardReport {
    pub verdict: Verdict,
    /// `H^q(X̃, O)` per auxiliary degree.
    pub blowup: CohomologyTable,
    /// `dim R_k` per auxiliary degree.
    pub base_dims: BTreeMap<i64, StabilizedDims>,
    /// Rank of `R_k -> C^0` at the largest bound, per auxiliary degree.
    pub unit_rank: BTreeMap<i64, usize>,
}

/// `O_X -> π_* O_X̃` is an isomorphism and higher direct images vanish,
/// checked in auxiliary degrees `0..=DEFAULT_AUX_SPAN`.
pub fn pushforward_structure_check(centre: &WeightedCentre, trunc: &Truncation) -> Result<PushforwardReport> {
    let blowup = crate::rees::extended_rees_presentation(centre)?;
    let table = blowup_cohomology_cech(&blowup, 0, trunc);
    let auxes = centre.aux_window(0);
    let base = &centre.base;
    let sb = blowup.simplified();
    let last = *trunc.schedule().last().expect("nonempty schedule");
    let o = GradedComplex::line_bundle(sb.ring(), Degree::ZERO);

    let per = crate::par_map(auxes.clone(), |k| {
        let dims = stabilized_dim(base, PieceDegree::aux(k), trunc);
        // unit map on the basis of R_k
        let rk = GradedPieceBasis::compute(base, PieceDegree::aux(k), last);
        let mut cache = PieceCache::default();
        let tc = TotalComplex::build(&o, &sb.cover(), PieceDegree::from(Degree::new(0, k)), last, &mut cache);
        let c0 = tc.dims().get(&0).copied().unwrap_or(0);
        let mut image = Echelon::new(c0);
        for m in rk.basis() {
            let p = crate::poly::Polynomial::monomial(m.clone(), crate::poly::rational(1));
            let lifted = sb.simp.map(&base.embed(&p, blowup.ring.arity()));
            let mut v = crate::linalg::SparseVec::new();
            for c in 0..sb.u.len() {
                let key = BlockKey { index: 0, basis: 0, charts: 1 << c };
                if let Some((_, part)) = tc.embed(key, &lifted) {
                    v = v.axpy(&crate::poly::rational(1), &part);
                }
            }
            image.insert(&v);
        }
        (k, dims, image.rank(), rk.dim())
    });

    let mut verdict = Verdict::Pass;
    let mut base_dims = BTreeMap::new();
    let mut unit_rank = BTreeMap::new();
    for (k, dims, rank, dim_at_last) in per {
        let deg = Degree::new(0, k);
        let h0 = table.get(0, deg);
        verdict = verdict.and(match (h0.value(), dims.value()) {
            (Some(a), Some(b)) if a == b && rank == dim_at_last => Verdict::Pass,
            (Some(_), Some(_)) => Verdict::Fail,
            _ => Verdict::Inconclusive,
        });
        for q in table.indices().into_iter().filter(|&q| q > 0) {
            verdict = verdict.and(match table.value(q, deg) {
                Some(0) => Verdict::Pass,
                Some(_) => Verdict::Fail,
                None => Verdict::Inconclusive,
            });
        }
        base_dims.insert(k, dims);
        unit_rank.insert(k, rank);
    }
    Ok(PushforwardReport { verdict, blowup: table, base_dims, unit_rank })
}

/// `RΓ(E, O_E(r))` on the exceptional divisor `(R/(f))[u]`, at the
/// auxiliary degrees of the centre's window for `r`.
pub fn exceptional_cohomology(centre: &WeightedCentre, r: i64, trunc: &Truncation) -> Result<CohomologyTable> {
    let ring = exceptional_ring(centre)?;
    let charts: Vec<usize> = (centre.base.arity()..ring.arity()).collect();
    let cover = CechCover::new(ring, &charts);
    let degrees: Vec<Degree> = centre.aux_window(r).into_iter().map(|k| Degree::new(r, k)).collect();
    Ok(cech_cohomology(&cover, &degrees, trunc))
}
