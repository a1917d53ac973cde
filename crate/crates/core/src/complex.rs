//! Finite complexes of twisted free modules.
//!
//! Indexing is homological: `d_i : C_i -> C_{i-1}`. A module is
//! `⊕_b O(τ_b)` with bidegree twists `τ_b`; an element of degree `D` has
//! coefficient of degree `τ_b + D` on `e_b`. A differential entry from basis
//! element `a` to basis element `b` is therefore homogeneous of degree
//! `τ_b - τ_a`.
//!
//! Sign conventions:
//! * Hom: `Hom_k = ⊕_i Hom(P_i, Q_{i+k})` with `D f = d_Q ∘ f - (-1)^k f ∘ d_P`.
//! * Cone of `φ: A -> B`: `Cone_i = A_{i-1} ⊕ B_i`, `d(a, b) = (-d_A a, φ(a) + d_B b)`.
//! * Koszul: `d e_S = Σ_l (-1)^l f_{s_l} e_{S \ s_l}` for `S = {s_0 < s_1 < ...}`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::poly::{Polynomial, Rational};
use crate::ring::{Degree, GradedRing};

/// `⊕_b O(τ_b)`, twists in construction order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedFreeModule {
    pub twists: Vec<Degree>,
}

impl TwistedFreeModule {
    pub fn new(twists: Vec<Degree>) -> Self {
        TwistedFreeModule { twists }
    }

    pub fn line(twist: Degree) -> Self {
        TwistedFreeModule { twists: vec![twist] }
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }
}

/// Dense matrix of polynomials, `rows x cols`, acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<Polynomial>,
    arity: usize,
}

impl PolyMatrix {
    pub fn zero(arity: usize, rows: usize, cols: usize) -> Self {
        PolyMatrix { rows, cols, entries: vec![Polynomial::zero(arity); rows * cols], arity }
    }

    pub fn from_rows(arity: usize, rows: Vec<Vec<Polynomial>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = PolyMatrix::zero(arity, r, c);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, p) in row.into_iter().enumerate() {
                m.set(i, j, p);
            }
        }
        m
    }

    pub fn identity(arity: usize, n: usize) -> Self {
        let mut m = PolyMatrix::zero(arity, n, n);
        for i in 0..n {
            m.set(i, i, Polynomial::one(arity));
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> &Polynomial {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, p: Polynomial) {
        self.entries[r * self.cols + c] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|p| p.is_zero())
    }

    pub fn scale(&self, c: &Rational) -> PolyMatrix {
        PolyMatrix { entries: self.entries.iter().map(|p| p.scale(c)).collect(), ..self.clone() }
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = PolyMatrix::zero(self.arity, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Polynomial::zero(self.arity);
                for k in 0..self.cols {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn sub(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        PolyMatrix { entries, ..self.clone() }
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut out = PolyMatrix::zero(self.arity, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Largest absolute exponent over all entries.
    pub fn max_abs_exponent(&self) -> u32 {
        self.entries.iter().map(|p| p.max_abs_exponent()).max().unwrap_or(0)
    }
}

/// A complex `C_lo <- ... <- C_hi` of twisted free modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedComplex {
    ring: GradedRing,
    modules: BTreeMap<i32, TwistedFreeModule>,
    /// `differentials[i] : C_i -> C_{i-1}`, present for every `i` with both ends nonzero.
    differentials: BTreeMap<i32, PolyMatrix>,
}

impl GradedComplex {
    /// Build and validate: homogeneous entries and `d∘d = 0` as polynomials.
    pub fn new(
        ring: GradedRing,
        modules: BTreeMap<i32, TwistedFreeModule>,
        differentials: BTreeMap<i32, PolyMatrix>,
    ) -> Result<Self> {
        let modules: BTreeMap<i32, TwistedFreeModule> =
            modules.into_iter().filter(|(_, m)| m.rank() > 0).collect();
        let mut diffs = BTreeMap::new();
        for (&i, src) in &modules {
            let Some(tgt) = modules.get(&(i - 1)) else { continue };
            let d = differentials
                .get(&i)
                .cloned()
                .unwrap_or_else(|| PolyMatrix::zero(ring.arity(), tgt.rank(), src.rank()));
            if (d.rows, d.cols) != (tgt.rank(), src.rank()) {
                return Err(Error::Invalid(format!("differential d_{i} has the wrong shape")));
            }
            diffs.insert(i, d);
        }
        let c = GradedComplex { ring, modules, differentials: diffs };
        c.check_homogeneous()?;
        c.check_square_zero()?;
        Ok(c)
    }

    /// A single module placed at `index`.
    pub fn concentrated(ring: GradedRing, index: i32, module: TwistedFreeModule) -> Self {
        GradedComplex { ring, modules: [(index, module)].into_iter().filter(|(_, m)| m.rank() > 0).collect(), differentials: BTreeMap::new() }
    }

    /// `O(twist)` in index 0.
    pub fn line_bundle(ring: &GradedRing, twist: Degree) -> Self {
        Self::concentrated(ring.clone(), 0, TwistedFreeModule::line(twist))
    }

    /// `[O(a) --p--> O(b)]` with `O(a)` in index 1.
    pub fn two_term(ring: &GradedRing, a: Degree, b: Degree, p: Polynomial) -> Result<Self> {
        let modules = [(1, TwistedFreeModule::line(a)), (0, TwistedFreeModule::line(b))].into_iter().collect();
        let d = PolyMatrix::from_rows(ring.arity(), vec![vec![p]]);
        GradedComplex::new(ring.clone(), modules, [(1, d)].into_iter().collect())
    }

    pub fn ring(&self) -> &GradedRing {
        &self.ring
    }

    pub fn modules(&self) -> &BTreeMap<i32, TwistedFreeModule> {
        &self.modules
    }

    pub fn module(&self, i: i32) -> Option<&TwistedFreeModule> {
        self.modules.get(&i)
    }

    pub fn rank(&self, i: i32) -> usize {
        self.modules.get(&i).map_or(0, |m| m.rank())
    }

    pub fn differential(&self, i: i32) -> Option<&PolyMatrix> {
        self.differentials.get(&i)
    }

    pub fn min_index(&self) -> Option<i32> {
        self.modules.keys().next().copied()
    }

    pub fn max_index(&self) -> Option<i32> {
        self.modules.keys().next_back().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.modules.is_empty()
    }

    /// Largest absolute exponent in any differential entry.
    pub fn max_entry_exponent(&self) -> u32 {
        self.differentials.values().map(|d| d.max_abs_exponent()).max().unwrap_or(0)
    }

    fn check_homogeneous(&self) -> Result<()> {
        for (&i, d) in &self.differentials {
            let src = &self.modules[&i];
            let tgt = &self.modules[&(i - 1)];
            for b in 0..d.rows {
                for a in 0..d.cols {
                    let p = d.get(b, a);
                    let expected = tgt.twists[b] - src.twists[a];
                    match self.ring.homogeneous_degree(p)? {
                        None => {}
                        Some(found) if found == expected => {}
                        Some(found) => {
                            return Err(Error::WrongDegree {
                                poly: self.ring.print(p),
                                found: found.to_string(),
                                expected: expected.to_string(),
                            })
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn check_square_zero(&self) -> Result<()> {
        for (&i, d) in &self.differentials {
            if let Some(prev) = self.differentials.get(&(i - 1)) {
                if !prev.mul(d).is_zero() {
                    return Err(Error::NotAComplex(i));
                }
            }
        }
        Ok(())
    }

    /// Same complex with every twist shifted by `t`.
    pub fn twisted(&self, t: Degree) -> GradedComplex {
        let modules = self
            .modules
            .iter()
            .map(|(&i, m)| (i, TwistedFreeModule::new(m.twists.iter().map(|&x| x + t).collect())))
            .collect();
        GradedComplex { modules, ..self.clone() }
    }

    /// Homological shift: `C[k]_i = C_{i-k}`, differentials negated for odd `k`.
    pub fn shifted(&self, k: i32) -> GradedComplex {
        let sign = if k.rem_euclid(2) == 1 { -Rational::from_integer(1.into()) } else { Rational::from_integer(1.into()) };
        GradedComplex {
            ring: self.ring.clone(),
            modules: self.modules.iter().map(|(&i, m)| (i + k, m.clone())).collect(),
            differentials: self.differentials.iter().map(|(&i, d)| (i + k, d.scale(&sign))).collect(),
        }
    }

    /// `Hom(C, O)`.
    pub fn dual(&self) -> GradedComplex {
        hom_complex(self, &GradedComplex::line_bundle(&self.ring, Degree::ZERO)).expect("same ring")
    }
}

impl fmt::Display for GradedComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .modules
            .iter()
            .rev()
            .map(|(i, m)| {
                let tw: Vec<String> = m.twists.iter().map(|t| t.to_string()).collect();
                format!("C_{i}=[{}]", tw.join(" "))
            })
            .collect();
        f.write_str(&parts.join(" -> "))
    }
}

/// Subsets of `0..n` of size `k`, lexicographic.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Koszul complex of a homogeneous sequence with stated bidegrees.
///
/// `K_j` has one basis element per `j`-subset `S`, with twist `-Σ_{i∈S} deg f_i`.
pub fn koszul_complex(ring: &GradedRing, sequence: &[(Polynomial, Degree)]) -> Result<GradedComplex> {
    for (f, d) in sequence {
        match ring.homogeneous_degree(f)? {
            Some(found) if found != *d => {
                return Err(Error::WrongDegree { poly: ring.print(f), found: found.to_string(), expected: d.to_string() })
            }
            _ => {}
        }
    }
    let n = sequence.len();
    let arity = ring.arity();
    let mut modules = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    let basis: Vec<Vec<Vec<usize>>> = (0..=n).map(|j| subsets(n, j)).collect();
    for j in 0..=n {
        let twists = basis[j]
            .iter()
            .map(|s| s.iter().fold(Degree::ZERO, |acc, &i| acc - sequence[i].1))
            .collect();
        modules.insert(j as i32, TwistedFreeModule::new(twists));
        if j == 0 {
            continue;
        }
        let index: BTreeMap<&Vec<usize>, usize> = basis[j - 1].iter().enumerate().map(|(k, s)| (s, k)).collect();
        let mut d = PolyMatrix::zero(arity, basis[j - 1].len(), basis[j].len());
        for (col, s) in basis[j].iter().enumerate() {
            for (l, &i) in s.iter().enumerate() {
                let mut rest = s.clone();
                rest.remove(l);
                let sign = if l % 2 == 0 { 1 } else { -1 };
                d.set(index[&rest], col, sequence[i].0.scale(&Rational::from_integer(sign.into())));
            }
        }
        diffs.insert(j as i32, d);
    }
    GradedComplex::new(ring.clone(), modules, diffs)
}

/// Koszul complex with bidegrees read off the polynomials.
pub fn koszul_complex_of(ring: &GradedRing, sequence: &[Polynomial]) -> Result<GradedComplex> {
    let seq = sequence
        .iter()
        .map(|f| {
            let d = ring
                .homogeneous_degree(f)?
                .ok_or_else(|| Error::Invalid("zero element in a Koszul sequence".into()))?;
            Ok((f.clone(), d))
        })
        .collect::<Result<Vec<_>>>()?;
    koszul_complex(ring, &seq)
}

/// `Hom(P, Q)` with the sign convention in the module docs. The basis of
/// `Hom_k` lists `Hom(P_i, Q_{i+k})` for ascending `i`, and inside each
/// block the elementary maps `E_{b,a}` with `a` outer, `b` inner.
pub fn hom_complex(source: &GradedComplex, target: &GradedComplex) -> Result<GradedComplex> {
    if source.ring != target.ring {
        return Err(Error::RingMismatch);
    }
    let ring = &source.ring;
    let arity = ring.arity();
    // (k) -> list of (i, a, b)
    let mut layout: BTreeMap<i32, Vec<(i32, usize, usize)>> = BTreeMap::new();
    for (&i, p) in &source.modules {
        for (&j, q) in &target.modules {
            let entry = layout.entry(j - i).or_default();
            for a in 0..p.rank() {
                for b in 0..q.rank() {
                    entry.push((i, a, b));
                }
            }
        }
    }
    let mut modules = BTreeMap::new();
    for (&k, elems) in &layout {
        let twists = elems
            .iter()
            .map(|&(i, a, b)| target.modules[&(i + k)].twists[b] - source.modules[&i].twists[a])
            .collect();
        modules.insert(k, TwistedFreeModule::new(twists));
    }
    let mut diffs = BTreeMap::new();
    for (&k, elems) in &layout {
        let Some(lower) = layout.get(&(k - 1)) else { continue };
        let pos: BTreeMap<(i32, usize, usize), usize> = lower.iter().enumerate().map(|(n, &e)| (e, n)).collect();
        let mut d = PolyMatrix::zero(arity, lower.len(), elems.len());
        let sign_k = if k.rem_euclid(2) == 0 { 1 } else { -1 };
        for (col, &(i, a, b)) in elems.iter().enumerate() {
            // d_Q ∘ E_{b,a}
            if let Some(dq) = target.differentials.get(&(i + k)) {
                for b2 in 0..dq.rows {
                    let e = dq.get(b2, b);
                    if !e.is_zero() {
                        let row = pos[&(i, a, b2)];
                        d.set(row, col, d.get(row, col) + e);
                    }
                }
            }
            // -(-1)^k E_{b,a} ∘ d_P, with d_P : P_{i+1} -> P_i
            if let Some(dp) = source.differentials.get(&(i + 1)) {
                for a2 in 0..dp.cols {
                    let e = dp.get(a, a2);
                    if !e.is_zero() {
                        let row = pos[&(i + 1, a2, b)];
                        let term = e.scale(&Rational::from_integer((-sign_k).into()));
                        d.set(row, col, d.get(row, col) + &term);
                    }
                }
            }
        }
        diffs.insert(k, d);
    }
    GradedComplex::new(ring.clone(), modules, diffs)
}

/// A degree-preserving map of complexes, `φ_i : A_i -> B_i`.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub source: GradedComplex,
    pub target: GradedComplex,
    pub components: BTreeMap<i32, PolyMatrix>,
}

impl ChainMap {
    /// Validate shapes, homogeneity and `d_B φ = φ d_A` symbolically.
    pub fn new(source: GradedComplex, target: GradedComplex, components: BTreeMap<i32, PolyMatrix>) -> Result<Self> {
        if source.ring != target.ring {
            return Err(Error::RingMismatch);
        }
        let ring = &source.ring;
        let arity = ring.arity();
        let mut comps = BTreeMap::new();
        for (&i, a) in &source.modules {
            let Some(b) = target.modules.get(&i) else { continue };
            let m = components.get(&i).cloned().unwrap_or_else(|| PolyMatrix::zero(arity, b.rank(), a.rank()));
            if (m.rows, m.cols) != (b.rank(), a.rank()) {
                return Err(Error::NotChainMap(format!("component {i} has the wrong shape")));
            }
            for r in 0..m.rows {
                for c in 0..m.cols {
                    let p = m.get(r, c);
                    if let Some(found) = ring.homogeneous_degree(p)? {
                        if found != b.twists[r] - a.twists[c] {
                            return Err(Error::NotChainMap(format!("entry {} of component {i} has degree {found}", ring.print(p))));
                        }
                    }
                }
            }
            comps.insert(i, m);
        }
        let lo = source.min_index().into_iter().chain(target.min_index()).min();
        let hi = source.max_index().into_iter().chain(target.max_index()).max();
        if let (Some(lo), Some(hi)) = (lo, hi) {
            for i in lo..=hi {
                // A_i -> B_{i-1} both ways
                let (ra, rb) = (source.rank(i), target.rank(i - 1));
                if ra == 0 || rb == 0 {
                    continue;
                }
                let zero = PolyMatrix::zero(arity, rb, ra);
                let left = match (target.differentials.get(&i), comps.get(&i)) {
                    (Some(d), Some(f)) => d.mul(f),
                    _ => zero.clone(),
                };
                let right = match (comps.get(&(i - 1)), source.differentials.get(&i)) {
                    (Some(f), Some(d)) => f.mul(d),
                    _ => zero,
                };
                if !left.sub(&right).is_zero() {
                    return Err(Error::NotChainMap(format!("square at index {i} does not commute")));
                }
            }
        }
        Ok(ChainMap { source, target, components: comps })
    }

    /// Multiplication by `p` between single-module complexes of equal rank.
    pub fn scalar(source: GradedComplex, target: GradedComplex, p: &Polynomial) -> Result<Self> {
        let arity = source.ring.arity();
        let mut comps = BTreeMap::new();
        for (&i, m) in source.modules() {
            let mut mat = PolyMatrix::zero(arity, target.rank(i), m.rank());
            for k in 0..m.rank().min(target.rank(i)) {
                mat.set(k, k, p.clone());
            }
            comps.insert(i, mat);
        }
        ChainMap::new(source, target, comps)
    }

    pub fn identity(c: &GradedComplex) -> Self {
        let arity = c.ring.arity();
        let comps = c.modules.iter().map(|(&i, m)| (i, PolyMatrix::identity(arity, m.rank()))).collect();
        ChainMap { source: c.clone(), target: c.clone(), components: comps }
    }
}

/// Mapping cone of a chain map, convention in the module docs.
pub fn cone(map: &ChainMap) -> Result<GradedComplex> {
    let (a, b) = (&map.source, &map.target);
    let arity = a.ring.arity();
    let lo = a.min_index().map(|i| i + 1).into_iter().chain(b.min_index()).min();
    let hi = a.max_index().map(|i| i + 1).into_iter().chain(b.max_index()).max();
    let (Some(lo), Some(hi)) = (lo, hi) else {
        return GradedComplex::new(a.ring.clone(), BTreeMap::new(), BTreeMap::new());
    };
    let mut modules = BTreeMap::new();
    for i in lo..=hi {
        let mut tw = a.modules.get(&(i - 1)).map_or(vec![], |m| m.twists.clone());
        tw.extend(b.modules.get(&i).map_or(vec![], |m| m.twists.clone()));
        modules.insert(i, TwistedFreeModule::new(tw));
    }
    let minus = -Rational::from_integer(1.into());
    let mut diffs = BTreeMap::new();
    for i in lo + 1..=hi {
        let (ai, bi) = (a.rank(i - 1), b.rank(i));
        let (aj, bj) = (a.rank(i - 2), b.rank(i - 1));
        let mut d = PolyMatrix::zero(arity, aj + bj, ai + bi);
        if let Some(da) = a.differentials.get(&(i - 1)) {
            let da = da.scale(&minus);
            for r in 0..aj {
                for c in 0..ai {
                    d.set(r, c, da.get(r, c).clone());
                }
            }
        }
        if let Some(phi) = map.components.get(&(i - 1)) {
            for r in 0..bj {
                for c in 0..ai {
                    d.set(aj + r, c, phi.get(r, c).clone());
                }
            }
        }
        if let Some(db) = b.differentials.get(&i) {
            for r in 0..bj {
                for c in 0..bi {
                    d.set(aj + r, ai + c, db.get(r, c).clone());
                }
            }
        }
        diffs.insert(i, d);
    }
    GradedComplex::new(a.ring.clone(), modules, diffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Variable;

    fn qx() -> GradedRing {
        GradedRing::free(vec![Variable::new("x", 1, 0)]).unwrap()
    }

    fn qxy() -> GradedRing {
        GradedRing::free(vec![Variable::new("x", 1, 0), Variable::new("y", 1, 0)]).unwrap()
    }

    fn twists(c: &GradedComplex, i: i32) -> Vec<i64> {
        c.module(i).map_or(vec![], |m| m.twists.iter().map(|d| d.weight).collect())
    }

    #[test]
    fn koszul_single() {
        let r = qx();
        let k = koszul_complex(&r, &[(r.parse("x").unwrap(), Degree::twist(1))]).unwrap();
        assert_eq!(twists(&k, 1), vec![-1]);
        assert_eq!(twists(&k, 0), vec![0]);
        assert_eq!(r.print(k.differential(1).unwrap().get(0, 0)), "x");
    }

    #[test]
    fn koszul_two() {
        let r = qxy();
        let k = koszul_complex_of(&r, &[r.parse("x").unwrap(), r.parse("y").unwrap()]).unwrap();
        assert_eq!((k.rank(0), k.rank(1), k.rank(2)), (1, 2, 1));
        assert_eq!(twists(&k, 2), vec![-2]);
        assert_eq!(twists(&k, 1), vec![-1, -1]);
    }

    #[test]
    fn koszul_rejects_wrong_degree() {
        let r = qx();
        let e = koszul_complex(&r, &[(r.parse("x^2").unwrap(), Degree::twist(1))]);
        assert!(matches!(e, Err(Error::WrongDegree { .. })));
    }

    #[test]
    fn inhomogeneous_entry_rejected() {
        let r = qxy();
        let e = GradedComplex::two_term(&r, Degree::twist(-1), Degree::ZERO, r.parse("x + y^2").unwrap());
        assert!(matches!(e, Err(Error::Inhomogeneous(_))));
    }

    #[test]
    fn hom_from_structure_sheaf_is_identity() {
        let r = qxy();
        let k = koszul_complex_of(&r, &[r.parse("x").unwrap(), r.parse("y").unwrap()]).unwrap();
        let h = hom_complex(&GradedComplex::line_bundle(&r, Degree::ZERO), &k).unwrap();
        assert_eq!(h, k);
    }

    #[test]
    fn hom_of_line_bundles() {
        let r = qx();
        let a = GradedComplex::line_bundle(&r, Degree::twist(-1));
        let b = GradedComplex::line_bundle(&r, Degree::twist(-2));
        let h = hom_complex(&a, &b).unwrap();
        assert_eq!(twists(&h, 0), vec![-1]);
        assert_eq!(h.modules().len(), 1);
    }

    #[test]
    fn hom_of_two_term_complexes() {
        let r = GradedRing::free(vec![Variable::new("s", -1, 0)]).unwrap();
        let s = r.parse("s").unwrap();
        let (rp, rr) = (-2i64, -1i64);
        let p = GradedComplex::two_term(&r, Degree::twist(rp + 1), Degree::twist(rp), s.clone()).unwrap();
        let q = GradedComplex::two_term(&r, Degree::twist(rr + 1), Degree::twist(rr), s).unwrap();
        let h = hom_complex(&p, &q).unwrap();
        let d = rr - rp;
        assert_eq!(twists(&h, 1), vec![d + 1]);
        assert_eq!(twists(&h, 0), vec![d, d]);
        assert_eq!(twists(&h, -1), vec![d - 1]);
    }

    #[test]
    fn cones_of_identity_and_zero() {
        let r = qx();
        let o = GradedComplex::line_bundle(&r, Degree::ZERO);
        let c = cone(&ChainMap::identity(&o)).unwrap();
        assert_eq!((c.rank(1), c.rank(0)), (1, 1));
        assert_eq!(r.print(c.differential(1).unwrap().get(0, 0)), "1");
        let z = ChainMap::new(o.clone(), o.clone(), BTreeMap::new()).unwrap();
        let c0 = cone(&z).unwrap();
        assert!(c0.differential(1).unwrap().is_zero());
    }

    #[test]
    fn non_chain_map_rejected() {
        let r = qx();
        let x = r.parse("x").unwrap();
        let k = GradedComplex::two_term(&r, Degree::twist(-1), Degree::ZERO, x.clone()).unwrap();
        let o = GradedComplex::line_bundle(&r, Degree::twist(-1));
        // O(-1) in index 0 -> K with identity into K_0 is not homogeneous
        let bad = ChainMap::new(o.clone(), k.clone(), [(0, PolyMatrix::identity(1, 1))].into_iter().collect());
        assert!(bad.is_err());
        // x : O(-1) -> O(0) into K_0 is a chain map; its composite with d is fine
        let good = ChainMap::new(o, k, [(0, PolyMatrix::from_rows(1, vec![vec![x]]))].into_iter().collect());
        assert!(good.is_ok());
    }

    #[test]
    fn shift_and_twist() {
        let r = qxy();
        let k = koszul_complex_of(&r, &[r.parse("x").unwrap(), r.parse("y").unwrap()]).unwrap();
        let s = k.shifted(1).twisted(Degree::twist(2));
        assert_eq!(twists(&s, 3), vec![0]);
        assert_eq!(s.min_index(), Some(1));
    }
}
