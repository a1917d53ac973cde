//! Weighted centres, their Rees algebras and the extended Rees presentation
//! of the weighted blowup.
//!
//! For a centre `Σ (f_i, d_i)` over `R`, the extended Rees algebra is
//! presented as `R[s, u_0..u_n] / (f_i - u_i s^{d_i})` where `s` stands for
//! `t^{-1}` (weight -1) and `u_i` for `f_i t^{d_i}` (weight `d_i`). The
//! auxiliary weight of `u_i` is that of `f_i`, so the relations are
//! bihomogeneous.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::complex::{koszul_complex, GradedComplex};
use crate::engine::Cover;
use crate::error::{Error, Result};
use crate::piece::{ideal_contained_up_to_degree, ideal_equal_up_to_degree, stabilized_dim, IdealComparison, PieceDegree};
use crate::poly::{Monomial, Polynomial};
use crate::ring::{Degree, GradedRing, Simplified, Variable};
use crate::truncation::{StabilizedDims, Truncation, Verdict};

/// Width of the auxiliary-degree window probed above its natural lower end.
pub const DEFAULT_AUX_SPAN: i64 = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentreEntry {
    pub f: Polynomial,
    pub weight: u32,
    /// Auxiliary degree of `f`.
    pub aux: i64,
}

/// `Σ (f_i, d_i)` over a base ring, entries sorted by weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedCentre {
    pub base: GradedRing,
    entries: Vec<CentreEntry>,
}

impl WeightedCentre {
    /// Entries are stably sorted by weight. Each `f_i` must be homogeneous of
    /// primary weight 0 and positive auxiliary degree.
    pub fn new(base: GradedRing, entries: Vec<(Polynomial, u32)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidCentre("a centre needs at least one entry".into()));
        }
        let mut out = Vec::new();
        for (f, d) in entries {
            if d == 0 {
                return Err(Error::InvalidCentre(format!("weight of `{}` must be at least 1", base.print(&f))));
            }
            let deg = base
                .homogeneous_degree(&f)?
                .ok_or_else(|| Error::InvalidCentre("zero centre entry".into()))?;
            if deg.weight != 0 || deg.aux <= 0 {
                return Err(Error::InvalidCentre(format!(
                    "`{}` must have weight 0 and positive degree, found {deg}",
                    base.print(&f)
                )));
            }
            out.push(CentreEntry { f, weight: d, aux: deg.aux });
        }
        out.sort_by_key(|e| e.weight);
        Ok(WeightedCentre { base, entries: out })
    }

    /// Parse entries given as text over `base`.
    pub fn parse(base: GradedRing, entries: &[(&str, u32)]) -> Result<Self> {
        let parsed = entries
            .iter()
            .map(|(t, d)| Ok((base.parse(t)?, *d)))
            .collect::<Result<Vec<_>>>()?;
        WeightedCentre::new(base, parsed)
    }

    pub fn entries(&self) -> &[CentreEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn weights(&self) -> Vec<u32> {
        self.entries.iter().map(|e| e.weight).collect()
    }

    /// `|d| = Σ d_i`.
    pub fn total_weight(&self) -> i64 {
        self.entries.iter().map(|e| e.weight as i64).sum()
    }

    pub fn max_aux(&self) -> i64 {
        self.entries.iter().map(|e| e.aux).max().unwrap_or(0)
    }

    pub fn polys(&self) -> Vec<Polynomial> {
        self.entries.iter().map(|e| e.f.clone()).collect()
    }

    /// `(f_i, deg f_i)` as a sequence over the base.
    pub fn sequence(&self) -> Vec<(Polynomial, Degree)> {
        self.entries.iter().map(|e| (e.f.clone(), Degree::new(0, e.aux))).collect()
    }

    /// Auxiliary degrees worth probing for twist `r`: classes of `O(r)` can
    /// carry `u_i^{-1}` factors, which lower the auxiliary degree by at most
    /// `max aux(f_i)` per unit of negative twist.
    pub fn aux_window(&self, r: i64) -> Vec<i64> {
        if !self.base.has_aux_grading() {
            return vec![0];
        }
        let lo = -self.max_aux() * r.min(0).abs();
        (lo..=DEFAULT_AUX_SPAN).collect()
    }

    /// Display form `(f_0,d_0)+(f_1,d_1)+...`.
    pub fn describe(&self) -> String {
        self.entries
            .iter()
            .map(|e| format!("({},{})", self.base.print(&e.f), e.weight))
            .collect::<Vec<_>>()
            .join("+")
    }
}

/// Minimal exponent vectors `a` with `Σ a_i d_i ≥ degree`.
fn minimal_exponents(weights: &[u32], degree: u32) -> Vec<Vec<u32>> {
    let n = weights.len();
    let caps: Vec<u32> = weights.iter().map(|&d| degree.div_ceil(d)).collect();
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    loop {
        let total: u32 = cur.iter().zip(weights).map(|(a, d)| a * d).sum();
        let minimal = total >= degree
            && cur.iter().zip(weights).all(|(&a, &d)| a == 0 || total - d < degree);
        if minimal {
            out.push(cur.clone());
        }
        // odometer
        let mut i = 0;
        loop {
            if i == n {
                out.sort_by(|a, b| b.cmp(a));
                return out;
            }
            if cur[i] < caps[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReesDegreeGenerators {
    pub degree: u32,
    /// Exponent vectors of the surviving products, in centre-entry order.
    pub exponents: Vec<Vec<u32>>,
    #[serde(skip)]
    pub generators: Vec<Polynomial>,
    /// Printed generators.
    pub printed: Vec<String>,
    /// INCONCLUSIVE when some redundancy test did not stabilize.
    pub pruning: Verdict,
}

/// Generators of `I_d`: products `∏ f_i^{a_i}` over minimal exponent vectors
/// with `Σ a_i d_i ≥ d`, dropping those in the ideal of the remaining ones.
pub fn rees_generators(centre: &WeightedCentre, degree: u32, trunc: &Truncation) -> Result<ReesDegreeGenerators> {
    if degree == 0 {
        return Err(Error::Invalid("Rees degree must be at least 1".into()));
    }
    let base = &centre.base;
    let mut cands: Vec<(Vec<u32>, Polynomial)> = Vec::new();
    for a in minimal_exponents(&centre.weights(), degree) {
        let mut p = base.one();
        for (e, entry) in a.iter().zip(centre.entries()) {
            p = &p * &entry.f.pow(*e);
        }
        if !cands.iter().any(|(_, q)| *q == p) {
            cands.push((a, p));
        }
    }
    // lexicographically largest first, independent of the entry order
    let lex_key = |p: &Polynomial| {
        let mut ms: Vec<Vec<i32>> = p.terms().map(|(m, _)| m.0.clone()).collect();
        ms.sort_by(|a, b| b.cmp(a));
        ms
    };
    cands.sort_by_key(|c| std::cmp::Reverse(lex_key(&c.1)));
    let mut pruning = Verdict::Pass;
    let mut i = cands.len();
    while i > 0 {
        i -= 1;
        if cands.len() == 1 {
            break;
        }
        let others: Vec<Polynomial> = cands.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, c)| c.1.clone()).collect();
        let g = &cands[i].1;
        let deg = base.homogeneous_degree(g)?.map_or(0, |d| d.aux);
        let cmp = ideal_contained_up_to_degree(std::slice::from_ref(g), &others, base, deg, trunc)?;
        match cmp.verdict {
            Verdict::Pass => {
                cands.remove(i);
            }
            Verdict::Inconclusive => pruning = Verdict::Inconclusive,
            Verdict::Fail => {}
        }
    }
    Ok(ReesDegreeGenerators {
        degree,
        exponents: cands.iter().map(|c| c.0.clone()).collect(),
        printed: cands.iter().map(|c| base.print(&c.1)).collect(),
        generators: cands.into_iter().map(|c| c.1).collect(),
        pruning,
    })
}

/// `R[s, u_0..u_n] / (f_i - u_i s^{d_i})` together with its ambient ring.
#[derive(Clone, Debug)]
pub struct BlowupPresentation {
    pub centre: WeightedCentre,
    /// `R[s, u]` with the base relations only.
    pub ambient: GradedRing,
    /// The ambient ring modulo the deformed relations.
    pub ring: GradedRing,
    pub s: usize,
    /// Indices of `u_0..u_n`: the irrelevant locus is their common zero set.
    pub u: Vec<usize>,
}

impl BlowupPresentation {
    /// The deformed sequence `f_i - u_i s^{d_i}` over the ambient ring.
    pub fn deformed_sequence(&self) -> Vec<(Polynomial, Degree)> {
        let arity = self.ambient.arity();
        self.centre
            .entries()
            .iter()
            .zip(&self.u)
            .map(|(e, &ui)| {
                let f = self.centre.base.embed(&e.f, arity);
                let mut m = vec![0i32; arity];
                m[ui] = 1;
                m[self.s] = e.weight as i32;
                let mut p = f;
                p.add_term(Monomial(m), -crate::poly::rational(1));
                (p, Degree::new(0, e.aux))
            })
            .collect()
    }

    /// Koszul complex of the deformed sequence over the ambient ring.
    pub fn deformed_koszul(&self) -> Result<GradedComplex> {
        koszul_complex(&self.ambient, &self.deformed_sequence())
    }

    /// Charts `D(u_i)` on the unsimplified ring.
    pub fn cover(&self) -> Cover {
        Cover::by_variables(&self.u)
    }

    /// Eliminate base variables solved by the relations; `s` and `u` survive.
    pub fn simplified(&self) -> SimplifiedBlowup {
        let mut protected = self.u.clone();
        protected.push(self.s);
        let simp = self.ring.eliminate_linear(&protected);
        let u = self.u.iter().map(|&i| simp.new_index(i).expect("protected")).collect();
        let s = simp.new_index(self.s).expect("protected");
        SimplifiedBlowup { simp, s, u }
    }

    pub fn print_relations(&self) -> Vec<String> {
        self.ring.relations().iter().map(|r| self.ring.print(r)).collect()
    }
}

/// A blowup ring after linear elimination, with its chart variables.
#[derive(Clone, Debug)]
pub struct SimplifiedBlowup {
    pub simp: Simplified,
    pub s: usize,
    pub u: Vec<usize>,
}

impl SimplifiedBlowup {
    pub fn ring(&self) -> &GradedRing {
        &self.simp.ring
    }

    pub fn cover(&self) -> Cover {
        Cover::by_variables(&self.u)
    }
}

/// Build the extended Rees presentation; fresh names are `s` and
/// `u_0..u_n`, suffixed with `_` on collision.
pub fn extended_rees_presentation(centre: &WeightedCentre) -> Result<BlowupPresentation> {
    let base = &centre.base;
    let mut taken = BTreeSet::new();
    let s_name = base.fresh_name("s", &taken);
    taken.insert(s_name.clone());
    let mut extra = vec![Variable::new(s_name, -1, 0)];
    for (i, e) in centre.entries().iter().enumerate() {
        let name = base.fresh_name(&format!("u_{i}"), &taken);
        taken.insert(name.clone());
        extra.push(Variable::new(name, e.weight as i64, e.aux));
    }
    let ambient = base.extend(extra)?;
    let s = base.arity();
    let u: Vec<usize> = (0..centre.len()).map(|i| s + 1 + i).collect();
    let mut pres = BlowupPresentation { centre: centre.clone(), ring: ambient.clone(), ambient, s, u };
    let rels: Vec<Polynomial> = pres.deformed_sequence().into_iter().map(|(p, _)| p).collect();
    pres.ring = pres.ambient.with_relations(&rels)?;
    Ok(pres)
}

/// A named generator of a user-supplied presentation: it maps to
/// `image * t^degree` in `R[t]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentationGenerator {
    pub name: String,
    pub degree: u32,
    pub image: Polynomial,
}

/// Generators plus relation texts in the base variables and generator names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReesPresentation {
    pub generators: Vec<PresentationGenerator>,
    pub relations: Vec<String>,
}

impl ReesPresentation {
    pub fn parse(base: &GradedRing, generators: &[(&str, u32, &str)], relations: &[&str]) -> Result<Self> {
        let generators = generators
            .iter()
            .map(|(n, d, img)| Ok(PresentationGenerator { name: n.to_string(), degree: *d, image: base.parse(img)? }))
            .collect::<Result<Vec<_>>>()?;
        Ok(ReesPresentation { generators, relations: relations.iter().map(|r| r.to_string()).collect() })
    }

    /// Generators of `I_d t^d` for `1 ≤ d ≤ max d_i`, named `G<d>_<j>`.
    pub fn from_rees_generators(centre: &WeightedCentre, trunc: &Truncation) -> Result<Self> {
        let top = centre.weights().into_iter().max().unwrap_or(1);
        let mut generators = Vec::new();
        for d in 1..=top {
            let g = rees_generators(centre, d, trunc)?;
            for (j, image) in g.generators.into_iter().enumerate() {
                generators.push(PresentationGenerator { name: format!("G{d}_{j}"), degree: d, image });
            }
        }
        Ok(ReesPresentation { generators, relations: Vec::new() })
    }

    /// Products of generators of total degree exactly `d`, as elements of `R`.
    fn products_of_degree(&self, base: &GradedRing, d: u32) -> Vec<Polynomial> {
        fn rec(gens: &[PresentationGenerator], i: usize, left: u32, acc: Polynomial, out: &mut Vec<Polynomial>) {
            if left == 0 {
                out.push(acc);
                return;
            }
            if i == gens.len() {
                return;
            }
            let g = &gens[i];
            let mut acc = acc;
            let mut used = 0;
            loop {
                rec(gens, i + 1, left - used, acc.clone(), out);
                if g.degree == 0 || used + g.degree > left {
                    break;
                }
                used += g.degree;
                acc = &acc * &g.image;
            }
        }
        let mut out = Vec::new();
        rec(&self.generators, 0, d, base.one(), &mut out);
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PresentationDegreeCheck {
    pub degree: u32,
    pub comparison: IdealComparison,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReesVerification {
    pub verdict: Verdict,
    pub degrees: Vec<PresentationDegreeCheck>,
    /// Smallest Rees degree where the ideals differ.
    pub unequal_at: Option<u32>,
    /// Relations that do not vanish under the generator images.
    pub failing_relations: Vec<String>,
}

/// Compare, for each `d ≤ max_degree`, the ideal of `R` generated by the
/// degree-`d` products of presentation generators with the enumerated `I_d`.
/// Relations of the presentation must vanish in `R[t]`.
pub fn verify_presentation_against_rees(
    centre: &WeightedCentre,
    presentation: &ReesPresentation,
    max_degree: u32,
    trunc: &Truncation,
) -> Result<ReesVerification> {
    let base = &centre.base;
    let failing_relations = failing_relations(base, presentation)?;
    let mut degrees = Vec::new();
    let mut verdict = if failing_relations.is_empty() { Verdict::Pass } else { Verdict::Fail };
    let mut unequal_at = None;
    for d in 1..=max_degree {
        let expected = rees_generators(centre, d, trunc)?;
        let got = presentation.products_of_degree(base, d);
        let max_aux = expected
            .generators
            .iter()
            .chain(&got)
            .filter_map(|g| base.homogeneous_degree(g).ok().flatten())
            .map(|deg| deg.aux)
            .max()
            .unwrap_or(0);
        let comparison = ideal_equal_up_to_degree(&got, &expected.generators, base, max_aux, trunc)?;
        if comparison.verdict == Verdict::Fail && unequal_at.is_none() {
            unequal_at = Some(d);
        }
        verdict = verdict.and(comparison.verdict).and(expected.pruning.and(Verdict::Pass));
        degrees.push(PresentationDegreeCheck { degree: d, comparison });
    }
    Ok(ReesVerification { verdict, degrees, unequal_at, failing_relations })
}

/// Relations of `presentation` that are nonzero after `G ↦ image * t^deg`.
fn failing_relations(base: &GradedRing, presentation: &ReesPresentation) -> Result<Vec<String>> {
    if presentation.relations.is_empty() {
        return Ok(vec![]);
    }
    let mut vars: Vec<Variable> = base.vars().to_vec();
    for g in &presentation.generators {
        let aux = base.homogeneous_degree(&g.image)?.map_or(0, |d| d.aux);
        vars.push(Variable::new(g.name.clone(), g.degree as i64, aux));
    }
    let big = GradedRing::free(vars)?;
    // R[t] with t of weight 1
    let mut taken = BTreeSet::new();
    for g in &presentation.generators {
        taken.insert(g.name.clone());
    }
    let t_name = base.fresh_name("t", &taken);
    let rt = base.without_relations().extend(vec![Variable::new(t_name, 1, 0)])?;
    let t = base.arity();
    let mut out = Vec::new();
    for text in &presentation.relations {
        let rel = big.parse(text)?;
        let mut img = rt.zero();
        for (m, c) in rel.terms() {
            let mut term = crate::poly::Polynomial::constant(rt.arity(), c.clone());
            let base_part: Vec<i32> = m.0[..base.arity()].iter().copied().chain([0]).collect();
            term = term.mul_monomial(&Monomial(base_part));
            for (k, g) in presentation.generators.iter().enumerate() {
                let e = m.0[base.arity() + k];
                if e > 0 {
                    let gi = base.embed(&g.image, rt.arity()).mul_monomial(&Monomial::var(rt.arity(), t, g.degree as i32));
                    term = &term * &gi.pow(e as u32);
                }
            }
            img = &img + &term;
        }
        // checked as an identity in the free polynomial ring
        if !img.is_zero() {
            out.push(text.clone());
        }
    }
    Ok(out)
}

/// `(R/(f))[u_0..u_n]`: the coordinate ring of the exceptional divisor.
#[derive(Clone, Debug)]
pub struct ExceptionalDivisorPresentation {
    pub ring: GradedRing,
    pub u: Vec<usize>,
    pub weights: Vec<u32>,
    /// Degreewise agreement with `A^ext/(s)`.
    pub agreement: Verdict,
    pub checks: Vec<(Degree, StabilizedDims, StabilizedDims)>,
}

impl ExceptionalDivisorPresentation {
    pub fn cover(&self) -> Cover {
        Cover::by_variables(&self.u)
    }

    /// The base `R/(f)` alone.
    pub fn base_ring(&self, centre: &WeightedCentre) -> Result<GradedRing> {
        centre.base.with_relations(&centre.polys())
    }
}

/// The exceptional divisor's ring, checked against `A^ext/(s)` on the
/// degrees `0 ≤ r ≤ |d|` and auxiliary degrees `0..=DEFAULT_AUX_SPAN`.
pub fn exceptional_divisor(centre: &WeightedCentre, trunc: &Truncation) -> Result<ExceptionalDivisorPresentation> {
    let ring = exceptional_ring(centre)?;
    let n0 = centre.base.arity();
    let u: Vec<usize> = (0..centre.len()).map(|i| n0 + i).collect();
    let pres = extended_rees_presentation(centre)?;
    let s_poly = pres.ring.var(pres.s);
    let quotient = pres.ring.with_relations(&[s_poly])?;
    let auxes: Vec<i64> = if centre.base.has_aux_grading() { (0..=DEFAULT_AUX_SPAN).collect() } else { vec![0] };
    let cells: Vec<Degree> = (0..=centre.total_weight())
        .flat_map(|r| auxes.iter().map(move |&k| Degree::new(r, k)))
        .collect();
    let checks = crate::par_map(cells, |deg| {
        let a = stabilized_dim(&ring, PieceDegree::from(deg), trunc);
        let b = stabilized_dim(&quotient, PieceDegree::from(deg), trunc);
        (deg, a, b)
    });
    let agreement = Verdict::all(checks.iter().map(|(_, a, b)| match (a.value(), b.value()) {
        (Some(x), Some(y)) if x == y => Verdict::Pass,
        (Some(_), Some(_)) => Verdict::Fail,
        _ => Verdict::Inconclusive,
    }));
    Ok(ExceptionalDivisorPresentation { ring, u, weights: centre.weights(), agreement, checks })
}

/// `(R/(f))[u]` with the same variable names as the blowup presentation.
pub(crate) fn exceptional_ring(centre: &WeightedCentre) -> Result<GradedRing> {
    let pres_names = extended_rees_presentation(centre)?;
    let extra: Vec<Variable> = pres_names.u.iter().map(|&i| pres_names.ring.vars()[i].clone()).collect();
    centre.base.with_relations(&centre.polys())?.extend(extra)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trunc() -> Truncation {
        Truncation::new(4, 2, 12).unwrap()
    }

    fn qxy() -> GradedRing {
        GradedRing::base(&["x", "y"], &[]).unwrap()
    }

    #[test]
    fn centre_is_sorted_and_validated() {
        let c = WeightedCentre::parse(qxy(), &[("x", 2), ("y", 1)]).unwrap();
        assert_eq!(c.weights(), vec![1, 2]);
        assert_eq!(c.describe(), "(y,1)+(x,2)");
        assert!(WeightedCentre::parse(qxy(), &[("x", 0)]).is_err());
        assert!(WeightedCentre::parse(qxy(), &[("1", 1)]).is_err());
        assert!(WeightedCentre::parse(qxy(), &[]).is_err());
    }

    #[test]
    fn minimal_exponent_enumeration() {
        assert_eq!(minimal_exponents(&[2, 1], 3), vec![vec![2, 0], vec![1, 1], vec![0, 3]]);
        assert_eq!(minimal_exponents(&[2, 1], 2), vec![vec![1, 0], vec![0, 2]]);
    }

    #[test]
    fn rees_generator_examples() {
        let std = WeightedCentre::parse(qxy(), &[("x", 1), ("y", 1)]).unwrap();
        assert_eq!(rees_generators(&std, 2, &trunc()).unwrap().printed, vec!["x^2", "x*y", "y^2"]);
        let w = WeightedCentre::parse(qxy(), &[("x", 2), ("y", 1)]).unwrap();
        assert_eq!(rees_generators(&w, 2, &trunc()).unwrap().printed, vec!["x", "y^2"]);
        assert_eq!(rees_generators(&w, 3, &trunc()).unwrap().printed, vec!["x^2", "x*y", "y^3"]);
    }

    #[test]
    fn redundant_products_are_pruned() {
        // (x,1)+(x*y,2): in degree 2, x^2 and x*y; x*y is not in (x^2), x^2 not in (x*y)
        // (x,1)+(x^2,1): degree 1 gives x and x^2, the latter is redundant
        let c = WeightedCentre::parse(qxy(), &[("x", 1), ("x^2", 1)]).unwrap();
        assert_eq!(rees_generators(&c, 1, &trunc()).unwrap().printed, vec!["x"]);
    }

    #[test]
    fn presentation_names_and_relations() {
        let c = WeightedCentre::parse(qxy(), &[("x", 2), ("y", 1)]).unwrap();
        let p = extended_rees_presentation(&c).unwrap();
        assert_eq!(p.ring.names(), vec!["x", "y", "s", "u_0", "u_1"]);
        assert_eq!(p.print_relations(), vec!["-s*u_0 + y", "-s^2*u_1 + x"]);
        let single = WeightedCentre::parse(GradedRing::base(&["x"], &[]).unwrap(), &[("x", 3)]).unwrap();
        let p = extended_rees_presentation(&single).unwrap();
        assert_eq!(p.print_relations(), vec!["-s^3*u_0 + x"]);
    }

    #[test]
    fn fresh_names_avoid_collisions() {
        let base = GradedRing::base(&["s", "u_0"], &[]).unwrap();
        let c = WeightedCentre::parse(base, &[("s", 1), ("u_0", 1)]).unwrap();
        let p = extended_rees_presentation(&c).unwrap();
        assert_eq!(p.ring.names(), vec!["s", "u_0", "s_", "u_0_", "u_1"]);
    }

    #[test]
    fn simplified_blowup_is_free() {
        let c = WeightedCentre::parse(qxy(), &[("x", 2), ("y", 1)]).unwrap();
        let p = extended_rees_presentation(&c).unwrap();
        let s = p.simplified();
        assert_eq!(s.ring().names(), vec!["s", "u_0", "u_1"]);
        assert!(s.ring().relations().is_empty());
    }

    #[test]
    fn example_presentation_check() {
        let c = WeightedCentre::parse(qxy(), &[("x", 2), ("y", 1)]).unwrap();
        let full = ReesPresentation::parse(
            &c.base,
            &[("U", 1, "x"), ("V", 1, "y"), ("W", 2, "x")],
            &["x*V - y*U", "y*W - U*V", "U^2 - x*W"],
        )
        .unwrap();
        let v = verify_presentation_against_rees(&c, &full, 4, &trunc()).unwrap();
        assert_eq!(v.verdict, Verdict::Pass);
        let partial = ReesPresentation::parse(&c.base, &[("U", 1, "x"), ("V", 1, "y")], &[]).unwrap();
        let v = verify_presentation_against_rees(&c, &partial, 4, &trunc()).unwrap();
        assert_eq!(v.verdict, Verdict::Fail);
        assert_eq!(v.unequal_at, Some(2));
    }

    #[test]
    fn wrong_relation_is_reported() {
        let c = WeightedCentre::parse(qxy(), &[("x", 1), ("y", 1)]).unwrap();
        let p = ReesPresentation::parse(&c.base, &[("U", 1, "x"), ("V", 1, "y")], &["U - V"]).unwrap();
        let v = verify_presentation_against_rees(&c, &p, 2, &trunc()).unwrap();
        assert_eq!(v.failing_relations, vec!["U - V"]);
        assert_eq!(v.verdict, Verdict::Fail);
    }

    #[test]
    fn exceptional_divisors() {
        let c = WeightedCentre::parse(qxy(), &[("x", 2), ("y", 1)]).unwrap();
        let e = exceptional_divisor(&c, &trunc()).unwrap();
        assert_eq!(e.agreement, Verdict::Pass, "{:?}", e.checks);
        assert_eq!(e.weights, vec![1, 2]);
        let c = WeightedCentre::parse(qxy(), &[("x", 1)]).unwrap();
        let e = exceptional_divisor(&c, &trunc()).unwrap();
        assert_eq!(e.agreement, Verdict::Pass);
        assert_eq!(e.ring.names(), vec!["x", "y", "u_0"]);
    }
}
