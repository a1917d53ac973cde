//! Per-degree homology of complexes and Koszul regularity.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::complex::{koszul_complex, GradedComplex};
use crate::engine::{class_witness, hypercohomology, ClassWitness, Cover};
use crate::error::Result;
use crate::piece::PieceDegree;
use crate::poly::Polynomial;
use crate::ring::{Degree, GradedRing};
use crate::truncation::{StabilizedDims, Truncation, Verdict};

/// `dim H_i` at each requested degree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct HomologyTable {
    #[serde(serialize_with = "crate::truncation::cells_as_list")]
    pub cells: BTreeMap<(i32, PieceDegree), StabilizedDims>,
}

impl HomologyTable {
    pub fn get(&self, index: i32, degree: PieceDegree) -> Option<&StabilizedDims> {
        self.cells.get(&(index, degree))
    }

    pub fn all_stable(&self) -> bool {
        self.cells.values().all(|s| s.stable)
    }

    /// Cells of positive index, in order.
    pub fn higher(&self) -> impl Iterator<Item = (&(i32, PieceDegree), &StabilizedDims)> {
        self.cells.iter().filter(|((i, _), _)| *i > 0)
    }
}

/// Homology of `complex` at every degree of `degrees`, every index of the
/// complex included.
pub fn homology(complex: &GradedComplex, degrees: &[PieceDegree], trunc: &Truncation) -> HomologyTable {
    let (Some(lo), Some(hi)) = (complex.min_index(), complex.max_index()) else {
        return HomologyTable::default();
    };
    let per_degree = crate::par_map(degrees.to_vec(), |deg| {
        (deg, hypercohomology(complex, &Cover::trivial(), deg, trunc))
    });
    let mut cells = BTreeMap::new();
    for (deg, h) in per_degree {
        for i in lo..=hi {
            let dims = h.get(&-i).cloned().unwrap_or_else(|| StabilizedDims::exact(0));
            cells.insert((i, deg), dims);
        }
    }
    HomologyTable { cells }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegularityReport {
    pub verdict: Verdict,
    pub table: HomologyTable,
    /// A nonzero higher homology class, when the verdict is FAIL.
    pub witness: Option<ClassWitness>,
}

/// PASS when every higher Koszul homology cell in the window is stably zero.
pub fn koszul_regularity_check(
    ring: &GradedRing,
    sequence: &[(Polynomial, Degree)],
    window: &[PieceDegree],
    trunc: &Truncation,
) -> Result<RegularityReport> {
    let k = koszul_complex(ring, sequence)?;
    Ok(regularity_of(&k, window, trunc))
}

pub(crate) fn regularity_of(k: &GradedComplex, window: &[PieceDegree], trunc: &Truncation) -> RegularityReport {
    let table = homology(k, window, trunc);
    let mut verdict = Verdict::Pass;
    let mut witness = None;
    for (&(i, deg), dims) in table.higher() {
        match dims.value() {
            Some(0) => {}
            Some(_) => {
                verdict = Verdict::Fail;
                if witness.is_none() {
                    witness = class_witness(k, &Cover::trivial(), deg, -i, trunc);
                }
            }
            None => verdict = verdict.and(Verdict::Inconclusive),
        }
    }
    RegularityReport { verdict, table, witness }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::koszul_complex_of;
    use crate::ring::Variable;

    fn trunc() -> Truncation {
        Truncation::new(3, 2, 9).unwrap()
    }

    fn weights(r: std::ops::RangeInclusive<i64>) -> Vec<PieceDegree> {
        r.map(PieceDegree::weight).collect()
    }

    #[test]
    fn koszul_of_x() {
        let ring = GradedRing::free(vec![Variable::new("x", 1, 0)]).unwrap();
        let k = koszul_complex_of(&ring, &[ring.parse("x").unwrap()]).unwrap();
        let t = homology(&k, &weights(-2..=3), &trunc());
        for r in -2..=3 {
            assert_eq!(t.get(1, PieceDegree::weight(r)).unwrap().value(), Some(0));
            let h0 = if r == 0 { 1 } else { 0 };
            assert_eq!(t.get(0, PieceDegree::weight(r)).unwrap().value(), Some(h0));
        }
    }

    #[test]
    fn koszul_of_x_x() {
        let ring = GradedRing::free(vec![Variable::new("x", 1, 0)]).unwrap();
        let x = ring.parse("x").unwrap();
        let seq = [(x.clone(), Degree::twist(1)), (x, Degree::twist(1))];
        let rep = koszul_regularity_check(&ring, &seq, &weights(0..=4), &trunc()).unwrap();
        assert_eq!(rep.verdict, Verdict::Fail);
        let t = &rep.table;
        assert_eq!(t.get(1, PieceDegree::weight(1)).unwrap().value(), Some(1));
        for r in 2..=4 {
            assert_eq!(t.get(1, PieceDegree::weight(r)).unwrap().value(), Some(0));
        }
        let w = rep.witness.unwrap();
        assert_eq!(w.cohomological_index, -1);
        assert_eq!(w.degree, PieceDegree::weight(1));
    }

    #[test]
    fn koszul_of_x_y_is_regular() {
        let ring = GradedRing::base(&["x", "y"], &[]).unwrap();
        let seq: Vec<_> = ["x", "y"].iter().map(|v| (ring.parse(v).unwrap(), Degree::new(0, 1))).collect();
        let window: Vec<_> = (0..=4).map(PieceDegree::aux).collect();
        let rep = koszul_regularity_check(&ring, &seq, &window, &trunc()).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass);
        assert!(rep.witness.is_none());
    }

    #[test]
    fn deformed_sequence_is_regular() {
        let ring = GradedRing::free(vec![
            Variable::base("a"),
            Variable::base("b"),
            Variable::new("x0", 1, 1),
            Variable::new("x1", 2, 1),
            Variable::new("s", -1, 0),
        ])
        .unwrap();
        let seq = vec![
            (ring.parse("a - x0*s").unwrap(), Degree::new(0, 1)),
            (ring.parse("b - x1*s^2").unwrap(), Degree::new(0, 1)),
        ];
        let window: Vec<_> = (-2..=1).flat_map(|r| (0..=2).map(move |k| PieceDegree::from(Degree::new(r, k)))).collect();
        let rep = koszul_regularity_check(&ring, &seq, &window, &Truncation::new(4, 2, 12).unwrap()).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass, "{:?}", rep.table);
    }
}
