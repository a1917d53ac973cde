//! Sparse exact linear algebra over the rationals.
//!
//! Vectors are sorted `(column, value)` lists. [`Echelon`] keeps a row-echelon
//! basis of a growing subspace: every stored row has a leading 1 at its pivot
//! column and no entries left of it. Reducing a vector against it clears all
//! pivot columns, which is all that ranks, quotient bases and kernels need.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::poly::Rational;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseVec {
    entries: Vec<(usize, Rational)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(col: usize) -> Self {
        SparseVec { entries: vec![(col, Rational::one())] }
    }

    /// Build from unsorted entries, summing duplicates and dropping zeros.
    pub fn from_entries(entries: impl IntoIterator<Item = (usize, Rational)>) -> Self {
        let mut map: BTreeMap<usize, Rational> = BTreeMap::new();
        for (c, v) in entries {
            *map.entry(c).or_insert_with(Rational::zero) += v;
        }
        SparseVec { entries: map.into_iter().filter(|(_, v)| !v.is_zero()).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(usize, Rational)] {
        &self.entries
    }

    pub fn leading(&self) -> Option<usize> {
        self.entries.first().map(|(c, _)| *c)
    }

    pub fn get(&self, col: usize) -> Rational {
        match self.entries.binary_search_by_key(&col, |(c, _)| *c) {
            Ok(i) => self.entries[i].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn scale(&self, c: &Rational) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec { entries: self.entries.iter().map(|(k, v)| (*k, v * c)).collect() }
    }

    /// `self + c * other`
    pub fn axpy(&self, c: &Rational, other: &SparseVec) -> SparseVec {
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        while i < self.entries.len() || j < other.entries.len() {
            let a = self.entries.get(i);
            let b = other.entries.get(j);
            match (a, b) {
                (Some((ca, va)), Some((cb, vb))) if ca == cb => {
                    let v = va + c * vb;
                    if !v.is_zero() {
                        out.push((*ca, v));
                    }
                    i += 1;
                    j += 1;
                }
                (Some((ca, va)), Some((cb, _))) if ca < cb => {
                    out.push((*ca, va.clone()));
                    i += 1;
                }
                (Some((ca, va)), None) => {
                    out.push((*ca, va.clone()));
                    i += 1;
                }
                (_, Some((cb, vb))) => {
                    let v = c * vb;
                    if !v.is_zero() {
                        out.push((*cb, v));
                    }
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        SparseVec { entries: out }
    }

    /// Shift every column index by `offset`.
    pub fn shifted(&self, offset: usize) -> SparseVec {
        SparseVec { entries: self.entries.iter().map(|(c, v)| (c + offset, v.clone())).collect() }
    }

    /// Keep only columns in `range`, re-based to start at 0.
    pub fn window(&self, range: std::ops::Range<usize>) -> SparseVec {
        SparseVec {
            entries: self
                .entries
                .iter()
                .filter(|(c, _)| range.contains(c))
                .map(|(c, v)| (c - range.start, v.clone()))
                .collect(),
        }
    }
}

/// Incremental row-echelon basis of a subspace of `Q^ncols`.
#[derive(Clone, Debug)]
pub struct Echelon {
    ncols: usize,
    rows: Vec<Option<SparseVec>>,
    rank: usize,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon { ncols, rows: vec![None; ncols], rank: 0 }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.rows[col].is_some()
    }

    /// Clear every pivot column of `v`.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut acc = v.clone();
        let mut cursor = 0usize;
        loop {
            let next = acc
                .entries
                .iter()
                .find(|(c, _)| *c >= cursor && self.rows[*c].is_some())
                .map(|(c, val)| (*c, val.clone()));
            let Some((col, val)) = next else { break };
            let row = self.rows[col].as_ref().expect("pivot row");
            acc = acc.axpy(&-val, row);
            cursor = col + 1;
        }
        acc
    }

    /// Insert `v`; returns true when it enlarged the span.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        self.insert_reduced(self.reduce(v))
    }

    fn insert_reduced(&mut self, r: SparseVec) -> bool {
        let Some(lead) = r.leading() else { return false };
        let inv = Rational::one() / r.entries[0].1.clone();
        self.rows[lead] = Some(r.scale(&inv));
        self.rank += 1;
        true
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Non-pivot columns, ascending: a basis of the quotient by the span.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|&c| self.rows[c].is_none()).collect()
    }
}

/// A linear map between finite-dimensional spaces, stored as the images of
/// the domain basis vectors (columns of the matrix).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    pub domain_dim: usize,
    pub codomain_dim: usize,
    pub columns: Vec<SparseVec>,
}

impl LinearMap {
    pub fn new(domain_dim: usize, codomain_dim: usize, columns: Vec<SparseVec>) -> Self {
        assert_eq!(columns.len(), domain_dim, "one image per domain basis vector");
        debug_assert!(columns.iter().all(|c| c.entries().iter().all(|(i, _)| *i < codomain_dim)));
        LinearMap { domain_dim, codomain_dim, columns }
    }

    pub fn zero(domain_dim: usize, codomain_dim: usize) -> Self {
        Self::new(domain_dim, codomain_dim, vec![SparseVec::new(); domain_dim])
    }

    /// Dense row-major constructor, mainly for tests.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let codomain = rows.len();
        let domain = rows.first().map_or(0, |r| r.len());
        let columns = (0..domain)
            .map(|j| {
                SparseVec::from_entries(
                    (0..codomain).map(|i| (i, Rational::from_integer(rows[i][j].into()))),
                )
            })
            .collect();
        LinearMap::new(domain, codomain, columns)
    }

    pub fn image(&self) -> Echelon {
        let mut e = Echelon::new(self.codomain_dim);
        for c in &self.columns {
            e.insert(c);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.image().rank()
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (j, a) in v.entries() {
            out = out.axpy(a, &self.columns[*j]);
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct RankKernelCokernel {
    pub rank: usize,
    /// Basis of the kernel, as vectors in the domain.
    pub kernel: Vec<SparseVec>,
    /// Codomain basis vectors spanning a complement of the image.
    pub cokernel: Vec<SparseVec>,
}

/// Exact rank, kernel and cokernel of `map`.
///
/// The kernel is found by eliminating the augmented rows `[image_j | e_j]`:
/// whenever the image part reduces to zero, the tag part is a kernel vector.
pub fn rank_kernel_cokernel(map: &LinearMap) -> RankKernelCokernel {
    let m = map.codomain_dim;
    let mut aug = Echelon::new(m + map.domain_dim);
    let mut kernel = Vec::new();
    for (j, col) in map.columns.iter().enumerate() {
        let row = col.axpy(&Rational::one(), &SparseVec::unit(m + j));
        let red = aug.reduce(&row);
        match red.leading() {
            Some(lead) if lead < m => {
                aug.insert_reduced(red);
            }
            Some(_) => kernel.push(red.window(m..m + map.domain_dim)),
            None => unreachable!("tag column keeps the row nonzero"),
        }
    }
    let rank = map.domain_dim - kernel.len();
    let cokernel = (0..m).filter(|&c| !aug.is_pivot(c)).map(SparseVec::unit).collect();
    RankKernelCokernel { rank, kernel, cokernel }
}
