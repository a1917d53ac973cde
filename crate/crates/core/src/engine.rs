//! Hypercohomology of a complex of twisted free modules over a Čech cover,
//! one graded degree at a time.
//!
//! Terms of the total complex are indexed by a homological index `i`, a
//! basis element `b` of `C_i` and a nonempty set `σ` of charts; the space is
//! the truncated graded piece of the ring localized at the charts in `σ`, at
//! degree `τ_b + D`. The cohomological index is `q = |σ| - 1 - i` and the
//! total differential is `δ + (-1)^p d_C` with the Čech sign `(-1)^pos` for the
//! chart inserted at position `pos`.
//!
//! The trivial cover (one chart inverting nothing) turns this into plain
//! homology: `H^q = H_{-q}`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::One;

use crate::complex::GradedComplex;
use crate::linalg::{Echelon, LinearMap, SparseVec};
use crate::piece::{GradedPieceBasis, PieceDegree};
use crate::poly::{Monomial, Polynomial, Rational};
use crate::ring::{Degree, GradedRing};
use crate::truncation::{StabilizedDims, Truncation};

/// Charts given by the variables they invert.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cover {
    pub charts: Vec<Vec<usize>>,
}

impl Cover {
    /// No localization at all.
    pub fn trivial() -> Self {
        Cover { charts: vec![vec![]] }
    }

    /// One chart `D(x)` per listed variable.
    pub fn by_variables(vars: &[usize]) -> Self {
        Cover { charts: vars.iter().map(|&v| vec![v]).collect() }
    }

    pub fn len(&self) -> usize {
        self.charts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.charts.is_empty()
    }

    fn inverted(&self, mask: u32) -> Vec<usize> {
        let mut out: Vec<usize> = (0..self.charts.len())
            .filter(|c| mask & (1 << c) != 0)
            .flat_map(|c| self.charts[c].iter().copied())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Truncated pieces keyed by chart set, degree and bound.
#[derive(Default)]
pub struct PieceCache {
    rings: HashMap<u32, GradedRing>,
    pieces: HashMap<(u32, PieceDegree, u32), Arc<GradedPieceBasis>>,
}

impl PieceCache {
    fn piece(&mut self, ring: &GradedRing, cover: &Cover, mask: u32, degree: PieceDegree, bound: u32) -> Arc<GradedPieceBasis> {
        if let Some(p) = self.pieces.get(&(mask, degree, bound)) {
            return p.clone();
        }
        let local = self.rings.entry(mask).or_insert_with(|| ring.localize(&cover.inverted(mask))).clone();
        let p = Arc::new(GradedPieceBasis::compute(&local, degree, bound));
        self.pieces.insert((mask, degree, bound), p.clone());
        p
    }
}

/// Label of one block of the total complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockKey {
    pub index: i32,
    pub basis: usize,
    pub charts: u32,
}

#[derive(Clone, Debug)]
struct Block {
    key: BlockKey,
    piece: Arc<GradedPieceBasis>,
    offset: usize,
}

fn add(deg: PieceDegree, t: Degree) -> PieceDegree {
    PieceDegree { weight: deg.weight.map(|w| w + t.weight), aux: deg.aux.map(|a| a + t.aux) }
}

/// The total complex at one degree and one truncation bound.
pub struct TotalComplex {
    blocks: BTreeMap<i32, Vec<Block>>,
    dims: BTreeMap<i32, usize>,
    /// `maps[q] : T_q -> T_{q+1}`
    maps: BTreeMap<i32, LinearMap>,
    names: Vec<String>,
}

impl TotalComplex {
    pub fn build(complex: &GradedComplex, cover: &Cover, degree: PieceDegree, bound: u32, cache: &mut PieceCache) -> Self {
        let ring = complex.ring();
        let m = cover.len();
        assert!(m > 0 && m < 32, "cover must have between 1 and 31 charts");
        let delta = complex.max_entry_exponent();
        let i_max = complex.max_index().unwrap_or(0);
        let bound_at = |i: i32| bound + (i_max - i) as u32 * delta;

        let mut blocks: BTreeMap<i32, Vec<Block>> = BTreeMap::new();
        let mut dims: BTreeMap<i32, usize> = BTreeMap::new();
        for (&i, module) in complex.modules() {
            for mask in 1u32..(1 << m) {
                let p = mask.count_ones() as i32 - 1;
                let q = p - i;
                for (b, &tw) in module.twists.iter().enumerate() {
                    let piece = cache.piece(ring, cover, mask, add(degree, tw), bound_at(i));
                    let off = dims.entry(q).or_insert(0);
                    let offset = *off;
                    *off += piece.dim();
                    blocks.entry(q).or_default().push(Block { key: BlockKey { index: i, basis: b, charts: mask }, piece, offset });
                }
            }
        }
        let position: HashMap<BlockKey, (i32, usize)> = blocks
            .iter()
            .flat_map(|(&q, bs)| bs.iter().enumerate().map(move |(n, bl)| (bl.key, (q, n))))
            .collect();

        let mut maps = BTreeMap::new();
        for (&q, bs) in &blocks {
            let target_dim = dims.get(&(q + 1)).copied().unwrap_or(0);
            let mut columns = Vec::with_capacity(dims[&q]);
            for bl in bs {
                let BlockKey { index: i, basis: b, charts: mask } = bl.key;
                let p = mask.count_ones() as i32 - 1;
                let sign_d = if p % 2 == 0 { Rational::one() } else { -Rational::one() };
                for mono in bl.piece.basis() {
                    let mut col = SparseVec::new();
                    // Čech part
                    for c in 0..m {
                        if mask & (1 << c) != 0 {
                            continue;
                        }
                        let pos = (mask & ((1 << c) - 1)).count_ones();
                        let sign = if pos % 2 == 0 { Rational::one() } else { -Rational::one() };
                        let key = BlockKey { index: i, basis: b, charts: mask | (1 << c) };
                        let (tq, tn) = position[&key];
                        debug_assert_eq!(tq, q + 1);
                        let tb = &blocks[&tq][tn];
                        let v = tb.piece.reduce_monomial(mono).expect("localization keeps the window");
                        col = col.axpy(&sign, &v.shifted(tb.offset));
                    }
                    // internal differential
                    if let Some(d) = complex.differential(i) {
                        for b2 in 0..d.rows {
                            let e = d.get(b2, b);
                            if e.is_zero() {
                                continue;
                            }
                            let key = BlockKey { index: i - 1, basis: b2, charts: mask };
                            let (tq, tn) = position[&key];
                            debug_assert_eq!(tq, q + 1);
                            let tb = &blocks[&tq][tn];
                            let v = tb.piece.reduce(&e.mul_monomial(mono)).expect("bounds leave room for the differential");
                            col = col.axpy(&sign_d, &v.shifted(tb.offset));
                        }
                    }
                    columns.push(col);
                }
            }
            maps.insert(q, LinearMap::new(dims[&q], target_dim, columns));
        }
        TotalComplex { blocks, dims, maps, names: ring.names() }
    }

    pub fn dims(&self) -> &BTreeMap<i32, usize> {
        &self.dims
    }

    fn map(&self, q: i32) -> Option<&LinearMap> {
        self.maps.get(&q)
    }

    fn rank(&self, q: i32) -> usize {
        self.map(q).map_or(0, |m| m.rank())
    }

    /// `dim H^q` for every `q` with a nonzero term.
    pub fn cohomology(&self) -> BTreeMap<i32, usize> {
        let ranks: BTreeMap<i32, usize> = self.dims.keys().map(|&q| (q, self.rank(q))).collect();
        self.dims
            .iter()
            .map(|(&q, &n)| {
                let out = ranks[&q];
                let inc = ranks.get(&(q - 1)).copied().unwrap_or(0);
                (q, n - out - inc)
            })
            .collect()
    }

    /// Cocycles in `T_q` that are not coboundaries, as a basis of a complement
    /// of the coboundaries inside the cocycles.
    pub fn classes(&self, q: i32) -> Vec<SparseVec> {
        let Some(&n) = self.dims.get(&q) else { return vec![] };
        let mut bd = Echelon::new(n);
        if let Some(prev) = self.map(q - 1) {
            for c in &prev.columns {
                bd.insert(c);
            }
        }
        let kernel = match self.map(q) {
            Some(m) => crate::linalg::rank_kernel_cokernel(m).kernel,
            None => (0..n).map(SparseVec::unit).collect(),
        };
        let mut out = Vec::new();
        for z in kernel {
            if bd.insert(&z) {
                out.push(z);
            }
        }
        out
    }

    /// Is `v ∈ T_q` a coboundary?
    pub fn is_coboundary(&self, q: i32, v: &SparseVec) -> bool {
        let mut bd = Echelon::new(self.dims.get(&q).copied().unwrap_or(0));
        if let Some(prev) = self.map(q - 1) {
            for c in &prev.columns {
                bd.insert(c);
            }
        }
        bd.contains(v)
    }

    /// Split a vector of `T_q` into one polynomial per nonzero block.
    pub fn components(&self, q: i32, v: &SparseVec) -> Vec<(BlockKey, Polynomial)> {
        let Some(bs) = self.blocks.get(&q) else { return vec![] };
        let arity = self.names.len();
        bs.iter()
            .filter_map(|bl| {
                let part = v.window(bl.offset..bl.offset + bl.piece.dim());
                (!part.is_zero()).then(|| {
                    let poly = Polynomial::from_terms(
                        arity,
                        part.entries().iter().map(|(k, c)| (bl.piece.basis()[*k].clone(), c.clone())),
                    );
                    (bl.key, poly)
                })
            })
            .collect()
    }

    /// Render a vector of `T_q` as `(label, polynomial)` pairs per block.
    pub fn describe(&self, q: i32, v: &SparseVec) -> Vec<(String, String)> {
        self.components(q, v)
            .into_iter()
            .map(|(key, poly)| {
                let label = format!("C_{}[{}] chart {:b}", key.index, key.basis, key.charts);
                (label, crate::poly::format_polynomial(&poly, &self.names))
            })
            .collect()
    }

    /// Assemble a vector of `T_q` from block polynomials; `None` when some
    /// product leaves the truncation window.
    pub fn assemble(&self, q: i32, parts: &[(BlockKey, Polynomial)]) -> Option<SparseVec> {
        let mut out = SparseVec::new();
        for (key, poly) in parts {
            let (bq, v) = self.embed(*key, poly)?;
            debug_assert_eq!(bq, q);
            out = out.axpy(&Rational::one(), &v);
        }
        Some(out)
    }

    /// Coordinates of `poly * e_b` in block `(index, b, charts)` of `T_q`.
    pub fn embed(&self, key: BlockKey, poly: &Polynomial) -> Option<(i32, SparseVec)> {
        for (&q, bs) in &self.blocks {
            for bl in bs {
                if bl.key == key {
                    return bl.piece.reduce(poly).map(|v| (q, v.shifted(bl.offset)));
                }
            }
        }
        None
    }

    /// Basis monomials of a block with their coordinates.
    pub fn block_basis(&self, key: BlockKey) -> Option<(i32, usize, Vec<Monomial>)> {
        for (&q, bs) in &self.blocks {
            for bl in bs {
                if bl.key == key {
                    return Some((q, bl.offset, bl.piece.basis().to_vec()));
                }
            }
        }
        None
    }
}

/// Smallest base bound whose per-index windows hold every monomial of every
/// term before localization, capped at `cap`.
fn start_bound(complex: &GradedComplex, degree: PieceDegree, cap: u32) -> u32 {
    let delta = complex.max_entry_exponent();
    let i_max = complex.max_index().unwrap_or(0);
    let mut need = 0;
    for (&i, module) in complex.modules() {
        let slack = (i_max - i) as u32 * delta;
        for &tw in &module.twists {
            let b = crate::piece::section_bound(complex.ring(), add(degree, tw), cap);
            need = need.max(b.saturating_sub(slack));
        }
    }
    need.min(cap)
}

/// Like `start_bound`, for the monomials with every chart variable negative
/// (the support of top Čech classes). Only for covers by single variables.
fn top_start_bound(complex: &GradedComplex, cover: &Cover, degree: PieceDegree, cap: u32) -> u32 {
    let ring = complex.ring();
    if cover.charts.iter().any(|c| c.len() != 1) || ring.vars().iter().any(|v| v.invertible) {
        return 0;
    }
    let charts: Vec<usize> = cover.charts.iter().map(|c| c[0]).collect();
    // x = y^{-1} y_0 with y ≥ 1: enumerate y - 1 ≥ 0 in the reflected grading
    let mut shift = Degree::ZERO;
    let vars: Vec<crate::ring::Variable> = ring
        .vars()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let mut v = v.clone();
            if charts.contains(&i) {
                v.weight = -v.weight;
                v.aux_weight = -v.aux_weight;
                shift = Degree::new(shift.weight + v.weight, shift.aux + v.aux_weight);
            }
            v
        })
        .collect();
    let Ok(reflected) = GradedRing::free(vars) else { return 0 };
    let delta = complex.max_entry_exponent();
    let i_max = complex.max_index().unwrap_or(0);
    let mut need = 0;
    for (&i, module) in complex.modules() {
        let slack = (i_max - i) as u32 * delta;
        for &tw in &module.twists {
            let d = add(degree, tw);
            let d = PieceDegree { weight: d.weight.map(|w| w - shift.weight), aux: d.aux.map(|a| a - shift.aux) };
            if window_is_empty(&reflected, d, cap) {
                continue;
            }
            let b = crate::piece::section_bound(&reflected, d, cap) + 1;
            need = need.max(b.saturating_sub(slack));
        }
    }
    need.min(cap)
}

fn window_is_empty(ring: &GradedRing, degree: PieceDegree, cap: u32) -> bool {
    crate::piece::window_monomials(ring, degree, cap).is_empty()
}

/// Stabilized `dim H^q` at one degree across the truncation schedule.
///
/// Every index that appears at some bound is tracked; an index is stable
/// once two consecutive bounds agree. Probing stops when all are stable.
pub fn hypercohomology(complex: &GradedComplex, cover: &Cover, degree: PieceDegree, trunc: &Truncation) -> BTreeMap<i32, StabilizedDims> {
    let mut cache = PieceCache::default();
    let mut out: BTreeMap<i32, StabilizedDims> = BTreeMap::new();
    let start = trunc
        .bound
        .max(start_bound(complex, degree, trunc.max_bound))
        .max(top_start_bound(complex, cover, degree, trunc.max_bound));
    let trunc = trunc.at(start).expect("start stays below max_bound");
    for bound in trunc.schedule() {
        let t = TotalComplex::build(complex, cover, degree, bound, &mut cache);
        let h = t.cohomology();
        let keys: std::collections::BTreeSet<i32> = h.keys().chain(out.keys()).copied().collect();
        for q in keys {
            out.entry(q).or_default().push(bound, h.get(&q).copied().unwrap_or(0));
        }
        if out.values().all(|s| s.stable) && out.values().all(|s| s.dim_at_bound.len() >= 2) {
            break;
        }
    }
    out
}

/// A nonzero class found in a cell.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ClassWitness {
    pub cohomological_index: i32,
    pub degree: PieceDegree,
    pub bound: u32,
    /// `(block label, polynomial)` pairs.
    pub components: Vec<(String, String)>,
}

/// A representative of a nonzero class in `H^q` at the largest bound of the
/// schedule, if there is one.
pub fn class_witness(complex: &GradedComplex, cover: &Cover, degree: PieceDegree, q: i32, trunc: &Truncation) -> Option<ClassWitness> {
    let bound = *trunc.schedule().last()?;
    let mut cache = PieceCache::default();
    let t = TotalComplex::build(complex, cover, degree, bound, &mut cache);
    let z = t.classes(q).into_iter().next()?;
    Some(ClassWitness { cohomological_index: q, degree, bound, components: t.describe(q, &z) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::koszul_complex_of;
    use crate::ring::Variable;

    fn trunc() -> Truncation {
        Truncation::new(3, 2, 9).unwrap()
    }

    fn value(h: &BTreeMap<i32, StabilizedDims>, q: i32) -> Option<usize> {
        h.get(&q).map_or(Some(0), |s| s.value())
    }

    #[test]
    fn punctured_plane_top_class() {
        let ring = GradedRing::free(vec![Variable::new("x", 1, 0), Variable::new("y", 1, 0)]).unwrap();
        let o = GradedComplex::line_bundle(&ring, Degree::ZERO);
        let cover = Cover::by_variables(&[0, 1]);
        let h = hypercohomology(&o, &cover, PieceDegree::weight(-2), &trunc());
        assert_eq!((value(&h, 0), value(&h, 1)), (Some(0), Some(1)));
        let h = hypercohomology(&o, &cover, PieceDegree::weight(2), &trunc());
        assert_eq!((value(&h, 0), value(&h, 1)), (Some(3), Some(0)));
        let w = class_witness(&o, &cover, PieceDegree::weight(-2), 1, &trunc()).unwrap();
        assert_eq!(w.components.len(), 1);
        assert!(w.components[0].1.contains("x^-1*y^-1"), "{:?}", w);
    }

    #[test]
    fn punctured_line_has_one_dimensional_pieces() {
        let ring = GradedRing::free(vec![Variable::new("x", 1, 0)]).unwrap();
        let o = GradedComplex::line_bundle(&ring, Degree::ZERO);
        for r in -3..=3 {
            let h = hypercohomology(&o, &Cover::by_variables(&[0]), PieceDegree::weight(r), &trunc());
            assert_eq!(value(&h, 0), Some(1));
        }
    }

    #[test]
    fn koszul_homology_via_trivial_cover() {
        let ring = GradedRing::free(vec![Variable::new("x", 1, 0)]).unwrap();
        let k = koszul_complex_of(&ring, &[ring.parse("x").unwrap(), ring.parse("x").unwrap()]).unwrap();
        // H_1 = H^{-1}
        let h1 = hypercohomology(&k, &Cover::trivial(), PieceDegree::weight(1), &trunc());
        assert_eq!(value(&h1, -1), Some(1));
        let h2 = hypercohomology(&k, &Cover::trivial(), PieceDegree::weight(2), &trunc());
        assert_eq!(value(&h2, -1), Some(0));
    }
}
