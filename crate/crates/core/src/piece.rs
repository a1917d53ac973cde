//! Truncated graded pieces of presented rings.
//!
//! A piece is the span of the monomials of a given degree whose exponents lie
//! in `[-B, B]` (`[0, B]` for non-invertible variables), modulo the span of
//! the relation multiples `g*m` that fit entirely inside the same window.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseVec};
use crate::poly::{Monomial, Polynomial};
use crate::ring::{Degree, GradedRing};
use crate::truncation::{StabilizedDims, Truncation, Verdict};

/// Which monomials a piece collects. `None` leaves that grading unconstrained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PieceDegree {
    pub weight: Option<i64>,
    pub aux: Option<i64>,
}

impl PieceDegree {
    pub fn weight(w: i64) -> Self {
        PieceDegree { weight: Some(w), aux: None }
    }

    pub fn aux(k: i64) -> Self {
        PieceDegree { weight: None, aux: Some(k) }
    }

    pub fn shifted_down(self, d: Degree) -> Self {
        PieceDegree { weight: self.weight.map(|w| w - d.weight), aux: self.aux.map(|a| a - d.aux) }
    }
}

impl From<Degree> for PieceDegree {
    fn from(d: Degree) -> Self {
        PieceDegree { weight: Some(d.weight), aux: Some(d.aux) }
    }
}

/// All monomials of `ring` in the window of `bound` with the requested
/// degree, in ascending graded-lexicographic order.
pub fn window_monomials(ring: &GradedRing, degree: PieceDegree, bound: u32) -> Vec<Monomial> {
    let vars = ring.vars();
    let n = vars.len();
    let b = bound as i64;
    let ranges: Vec<(i64, i64)> = vars.iter().map(|v| (if v.invertible { -b } else { 0 }, b)).collect();
    // suffix extremes of the achievable contributions
    let mut wmin = vec![0i64; n + 1];
    let mut wmax = vec![0i64; n + 1];
    let mut amin = vec![0i64; n + 1];
    let mut amax = vec![0i64; n + 1];
    for i in (0..n).rev() {
        let (lo, hi) = ranges[i];
        let (w, a) = (vars[i].weight, vars[i].aux_weight);
        wmin[i] = wmin[i + 1] + (w * lo).min(w * hi);
        wmax[i] = wmax[i + 1] + (w * lo).max(w * hi);
        amin[i] = amin[i + 1] + (a * lo).min(a * hi);
        amax[i] = amax[i + 1] + (a * lo).max(a * hi);
    }
    let mut out = Vec::new();
    let mut cur = vec![0i32; n];

    #[allow(clippy::too_many_arguments)]
    fn rec(
        i: usize,
        w_left: i64,
        a_left: i64,
        ctx: (&[(i64, i64)], &[crate::ring::Variable], PieceDegree),
        ext: (&[i64], &[i64], &[i64], &[i64]),
        cur: &mut Vec<i32>,
        out: &mut Vec<Monomial>,
    ) {
        let (ranges, vars, deg) = ctx;
        let (wmin, wmax, amin, amax) = ext;
        if deg.weight.is_some() && (w_left < wmin[i] || w_left > wmax[i]) {
            return;
        }
        if deg.aux.is_some() && (a_left < amin[i] || a_left > amax[i]) {
            return;
        }
        if i == vars.len() {
            out.push(Monomial(cur.clone()));
            return;
        }
        let (lo, hi) = ranges[i];
        for e in lo..=hi {
            cur[i] = e as i32;
            rec(
                i + 1,
                w_left - vars[i].weight * e,
                a_left - vars[i].aux_weight * e,
                ctx,
                ext,
                cur,
                out,
            );
        }
        cur[i] = 0;
    }

    rec(
        0,
        degree.weight.unwrap_or(0),
        degree.aux.unwrap_or(0),
        (&ranges, vars, degree),
        (&wmin, &wmax, &amin, &amax),
        &mut cur,
        &mut out,
    );
    out.sort();
    out
}

fn in_window(ring: &GradedRing, m: &Monomial, bound: u32) -> bool {
    m.0.iter().zip(ring.vars()).all(|(&e, v)| {
        let e = e as i64;
        e <= bound as i64 && (e >= 0 || (v.invertible && -e <= bound as i64))
    })
}

/// A truncated graded piece with its reduction onto a monomial basis.
#[derive(Clone, Debug)]
pub struct GradedPieceBasis {
    pub degree: PieceDegree,
    pub bound: u32,
    /// Every window monomial, ascending.
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    relations: Echelon,
    /// Surviving monomials: the quotient basis, ascending.
    basis: Vec<Monomial>,
    /// column -> basis position
    basis_pos: Vec<Option<usize>>,
}

impl GradedPieceBasis {
    pub fn compute(ring: &GradedRing, degree: PieceDegree, bound: u32) -> Self {
        let monomials = window_monomials(ring, degree, bound);
        let n = monomials.len();
        // Column c holds monomials[n - 1 - c]: large monomials pivot first.
        let col = |i: usize| n - 1 - i;
        let index: HashMap<Monomial, usize> =
            monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let mut relations = Echelon::new(n);
        if n > 0 {
            for g in ring.relations() {
                let dg = ring.homogeneous_degree(g).ok().flatten().unwrap_or(Degree::ZERO);
                for m in window_monomials(ring, degree.shifted_down(dg), bound) {
                    let prod = g.mul_monomial(&m);
                    if !prod.terms().all(|(t, _)| in_window(ring, t, bound)) {
                        continue;
                    }
                    let row = SparseVec::from_entries(
                        prod.terms().map(|(t, c)| (col(index[t]), c.clone())),
                    );
                    relations.insert(&row);
                }
            }
        }
        let mut basis_pos = vec![None; n];
        let mut basis = Vec::new();
        // ascending monomial order = descending column order
        for i in 0..n {
            if !relations.is_pivot(col(i)) {
                basis_pos[col(i)] = Some(basis.len());
                basis.push(monomials[i].clone());
            }
        }
        GradedPieceBasis { degree, bound, monomials, index, relations, basis, basis_pos }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn ambient_dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn ambient_is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn relation_rank(&self) -> usize {
        self.relations.rank()
    }

    pub fn contains_monomial(&self, m: &Monomial) -> bool {
        self.index.contains_key(m)
    }

    /// Coordinates of a monomial in the quotient basis; `None` when the
    /// monomial lies outside the window or has the wrong degree.
    pub fn reduce_monomial(&self, m: &Monomial) -> Option<SparseVec> {
        let i = *self.index.get(m)?;
        let n = self.monomials.len();
        let red = self.relations.reduce(&SparseVec::unit(n - 1 - i));
        Some(self.to_basis(&red))
    }

    pub fn reduce(&self, p: &Polynomial) -> Option<SparseVec> {
        let mut acc = SparseVec::new();
        for (m, c) in p.terms() {
            acc = acc.axpy(c, &self.reduce_monomial(m)?);
        }
        Some(acc)
    }

    fn to_basis(&self, reduced: &SparseVec) -> SparseVec {
        SparseVec::from_entries(
            reduced
                .entries()
                .iter()
                .map(|(c, v)| (self.basis_pos[*c].expect("reduced vector on pivot column"), v.clone())),
        )
    }
}

/// The truncated graded piece of `ring` at `degree`, using `trunc.bound`.
pub fn graded_piece(ring: &GradedRing, degree: PieceDegree, trunc: &Truncation) -> Result<GradedPieceBasis> {
    if trunc.bound > trunc.max_bound {
        return Err(Error::Truncation(format!(
            "bound {} exceeds max_bound {}",
            trunc.bound, trunc.max_bound
        )));
    }
    Ok(GradedPieceBasis::compute(ring, degree, trunc.bound))
}

/// Degree used to slice ideals: the auxiliary grading when the ring has one.
fn ideal_degree(ring: &GradedRing, p: &Polynomial) -> Result<Option<i64>> {
    let d = ring.homogeneous_degree(p)?;
    Ok(d.map(|d| if ring.has_aux_grading() { d.aux } else { d.weight }))
}

fn slice(ring: &GradedRing, k: i64) -> PieceDegree {
    if ring.has_aux_grading() {
        PieceDegree::aux(k)
    } else {
        PieceDegree::weight(k)
    }
}

/// Rank of the span of `{g*m}` inside a piece.
fn ideal_span(ring: &GradedRing, piece: &GradedPieceBasis, gens: &[(Polynomial, i64)], k: i64) -> Echelon {
    let mut e = Echelon::new(piece.dim());
    for (g, dg) in gens {
        for m in window_monomials(ring, slice(ring, k - dg), piece.bound) {
            if let Some(v) = piece.reduce(&g.mul_monomial(&m)) {
                e.insert(&v);
            }
        }
    }
    e
}

fn graded_gens(ring: &GradedRing, gens: &[Polynomial]) -> Result<Vec<(Polynomial, i64)>> {
    let mut out = Vec::new();
    for g in gens {
        if let Some(d) = ideal_degree(ring, g)? {
            out.push((g.clone(), d));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeComparison {
    pub degree: i64,
    /// `(bound, dim span a, dim span b, dim span a+b)` per probed bound.
    pub ranks: Vec<(u32, usize, usize, usize)>,
    pub stable: bool,
}

impl DegreeComparison {
    fn last(&self) -> (usize, usize, usize) {
        let &(_, a, b, ab) = self.ranks.last().expect("at least one bound");
        (a, b, ab)
    }

    pub fn equal(&self) -> bool {
        let (a, b, ab) = self.last();
        a == ab && b == ab
    }

    /// span a is contained in span b
    pub fn a_in_b(&self) -> bool {
        let (_, b, ab) = self.last();
        b == ab
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdealComparison {
    pub degrees: Vec<DegreeComparison>,
    pub verdict: Verdict,
    /// Smallest degree where the spans differ, once stabilized.
    pub first_difference: Option<i64>,
}

fn compare_spans(
    gens_a: &[Polynomial],
    gens_b: &[Polynomial],
    ring: &GradedRing,
    max_degree: i64,
    trunc: &Truncation,
    containment_only: bool,
) -> Result<IdealComparison> {
    let a = graded_gens(ring, gens_a)?;
    let b = graded_gens(ring, gens_b)?;
    let mut degrees: Vec<DegreeComparison> = (0..=max_degree)
        .map(|k| DegreeComparison { degree: k, ranks: Vec::new(), stable: false })
        .collect();
    for dc in degrees.iter_mut() {
        let start = trunc.bound.max(section_bound(ring, slice(ring, dc.degree), trunc.max_bound));
        for bound in trunc.at(start).expect("start stays below max_bound").schedule() {
            let piece = GradedPieceBasis::compute(ring, slice(ring, dc.degree), bound);
            let ea = ideal_span(ring, &piece, &a, dc.degree);
            let eb = ideal_span(ring, &piece, &b, dc.degree);
            let mut eab = eb.clone();
            for (g, dg) in &a {
                for m in window_monomials(ring, slice(ring, dc.degree - dg), bound) {
                    if let Some(v) = piece.reduce(&g.mul_monomial(&m)) {
                        eab.insert(&v);
                    }
                }
            }
            let entry = (bound, ea.rank(), eb.rank(), eab.rank());
            let n = dc.ranks.len();
            dc.stable = n >= 1 && {
                let (_, a0, b0, ab0) = dc.ranks[n - 1];
                (a0, b0, ab0) == (entry.1, entry.2, entry.3)
            };
            dc.ranks.push(entry);
            if dc.stable {
                break;
            }
        }
    }
    let stable = degrees.iter().all(|d| d.stable);
    let first_difference = degrees
        .iter()
        .find(|d| d.stable && !(if containment_only { d.a_in_b() } else { d.equal() }))
        .map(|d| d.degree);
    let verdict = match (first_difference, stable) {
        (Some(_), _) => Verdict::Fail,
        (None, true) => Verdict::Pass,
        (None, false) => Verdict::Inconclusive,
    };
    Ok(IdealComparison { degrees, verdict, first_difference })
}

/// Compare the ideals generated by `gens_a` and `gens_b` degree by degree up
/// to `max_degree` (auxiliary degree when the ring has that grading).
///
/// For homogeneous generators of degree at most `max_degree` in a ring with
/// positively graded variables, agreement in every degree up to
/// `max_degree` is equality of the ideals.
pub fn ideal_equal_up_to_degree(
    gens_a: &[Polynomial],
    gens_b: &[Polynomial],
    ring: &GradedRing,
    max_degree: i64,
    trunc: &Truncation,
) -> Result<IdealComparison> {
    compare_spans(gens_a, gens_b, ring, max_degree, trunc, false)
}

/// Same sweep as [`ideal_equal_up_to_degree`], checking only `(a) ⊆ (b)`.
pub fn ideal_contained_up_to_degree(
    gens_a: &[Polynomial],
    gens_b: &[Polynomial],
    ring: &GradedRing,
    max_degree: i64,
    trunc: &Truncation,
) -> Result<IdealComparison> {
    compare_spans(gens_a, gens_b, ring, max_degree, trunc, true)
}

/// Largest exponent among the monomials of `degree` in the window of `cap`,
/// or 0 when the ring has invertible variables. Probing at smaller bounds
/// would miss monomials that every later bound sees.
pub(crate) fn section_bound(ring: &GradedRing, degree: PieceDegree, cap: u32) -> u32 {
    if ring.vars().iter().any(|v| v.invertible) {
        return 0;
    }
    window_monomials(ring, degree, cap)
        .iter()
        .flat_map(|m| m.0.iter().map(|e| e.unsigned_abs()))
        .max()
        .unwrap_or(0)
}

/// Dimension of a piece across the truncation schedule.
pub fn stabilized_dim(ring: &GradedRing, degree: PieceDegree, trunc: &Truncation) -> StabilizedDims {
    let mut s = StabilizedDims::default();
    let start = trunc.bound.max(section_bound(ring, degree, trunc.max_bound));
    let trunc = trunc.at(start).expect("start stays below max_bound");
    for bound in trunc.schedule() {
        s.push(bound, GradedPieceBasis::compute(ring, degree, bound).dim());
        if s.stable {
            break;
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Variable;

    fn trunc(b: u32) -> Truncation {
        Truncation::new(b, 1, 20).unwrap()
    }

    #[test]
    fn free_ring_counts_monomials() {
        let ring = GradedRing::free(vec![Variable::new("x", 1, 0), Variable::new("y", 1, 0)]).unwrap();
        let p = graded_piece(&ring, PieceDegree::weight(2), &trunc(4)).unwrap();
        assert_eq!(p.dim(), 3);
        let names: Vec<String> = p.basis().iter().map(|m| ring.print(&Polynomial::monomial(m.clone(), crate::poly::rational(1)))).collect();
        assert_eq!(names, vec!["y^2", "x*y", "x^2"]);
    }

    #[test]
    fn empty_degree() {
        let ring = GradedRing::free(vec![Variable::new("x", 2, 0)]).unwrap();
        let p = graded_piece(&ring, PieceDegree::weight(3), &trunc(4)).unwrap();
        assert_eq!(p.dim(), 0);
        assert!(p.ambient_is_empty());
    }

    #[test]
    fn bound_above_max_is_an_error() {
        let ring = GradedRing::free(vec![Variable::new("x", 1, 0)]).unwrap();
        let t = Truncation { bound: 5, step: 1, max_bound: 4 };
        assert!(graded_piece(&ring, PieceDegree::weight(1), &t).is_err());
    }

    #[test]
    fn reduction_is_idempotent_on_basis() {
        let ring = GradedRing::base(&["x", "y"], &["x^2 - x*y"]).unwrap();
        let p = graded_piece(&ring, PieceDegree::aux(3), &trunc(4)).unwrap();
        for (i, m) in p.basis().iter().enumerate() {
            assert_eq!(p.reduce_monomial(m).unwrap(), SparseVec::unit(i));
        }
    }

    #[test]
    fn ideal_examples() {
        let ring = GradedRing::base(&["x", "y"], &[]).unwrap();
        let x = ring.parse("x").unwrap();
        let y = ring.parse("y").unwrap();
        let same = ideal_equal_up_to_degree(&[x.clone(), y.clone()], &[y.clone(), x.clone()], &ring, 3, &trunc(4)).unwrap();
        assert_eq!(same.verdict, Verdict::Pass);
        let x2 = ring.parse("x^2").unwrap();
        let diff = ideal_equal_up_to_degree(std::slice::from_ref(&x), std::slice::from_ref(&x2), &ring, 3, &trunc(4)).unwrap();
        assert_eq!(diff.verdict, Verdict::Fail);
        assert_eq!(diff.first_difference, Some(1));
        let inc = ideal_contained_up_to_degree(&[x2], &[x], &ring, 3, &trunc(4)).unwrap();
        assert_eq!(inc.verdict, Verdict::Pass);
    }
}
