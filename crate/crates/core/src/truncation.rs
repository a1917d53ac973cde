//! Exponent truncation windows and stabilization bookkeeping.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-variable bound on absolute exponents, with the schedule used to
/// probe for stabilization: `bound, bound + step, ...` up to `max_bound`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    pub bound: u32,
    pub step: u32,
    pub max_bound: u32,
}

impl Truncation {
    pub fn new(bound: u32, step: u32, max_bound: u32) -> Result<Self> {
        if bound == 0 {
            return Err(Error::Truncation("bound must be at least 1".into()));
        }
        if step == 0 {
            return Err(Error::Truncation("step must be at least 1".into()));
        }
        if bound > max_bound {
            return Err(Error::Truncation(format!("bound {bound} exceeds max_bound {max_bound}")));
        }
        Ok(Truncation { bound, step, max_bound })
    }

    /// The same schedule started at a different bound.
    pub fn at(&self, bound: u32) -> Result<Self> {
        Truncation::new(bound, self.step, self.max_bound)
    }

    /// Bounds probed, in order. Always at least two entries when the schedule
    /// allows it; the last one never exceeds `max_bound`.
    pub fn schedule(&self) -> Vec<u32> {
        let mut out = vec![self.bound];
        let mut b = self.bound;
        while b + self.step <= self.max_bound {
            b += self.step;
            out.push(b);
        }
        out
    }
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation { bound: 4, step: 2, max_bound: 12 }
    }
}

/// Dimensions of one quantity across increasing bounds.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StabilizedDims {
    pub dim_at_bound: Vec<(u32, usize)>,
    pub stable: bool,
}

impl StabilizedDims {
    /// A value that needs no truncation (pure counting or finite pieces).
    pub fn exact(dim: usize) -> Self {
        StabilizedDims { dim_at_bound: vec![(0, dim)], stable: true }
    }

    pub fn push(&mut self, bound: u32, dim: usize) {
        if let Some(&(b, _)) = self.dim_at_bound.last() {
            assert!(bound > b, "bounds must increase");
        }
        self.dim_at_bound.push((bound, dim));
        let n = self.dim_at_bound.len();
        self.stable = n >= 2 && self.dim_at_bound[n - 1].1 == self.dim_at_bound[n - 2].1;
    }

    pub fn last(&self) -> Option<usize> {
        self.dim_at_bound.last().map(|&(_, d)| d)
    }

    /// The stabilized value, if any.
    pub fn value(&self) -> Option<usize> {
        if self.stable {
            self.last()
        } else {
            None
        }
    }

    pub fn is_stable_zero(&self) -> bool {
        self.value() == Some(0)
    }

    /// Entrywise sum of independently stabilized quantities. Stable when
    /// every part is; otherwise only the latest total is kept.
    pub fn sum<'a>(parts: impl IntoIterator<Item = &'a StabilizedDims>) -> StabilizedDims {
        let parts: Vec<&StabilizedDims> = parts.into_iter().collect();
        if parts.is_empty() {
            return StabilizedDims::exact(0);
        }
        let last: usize = parts.iter().filter_map(|p| p.last()).sum();
        let last_bound = parts.iter().filter_map(|p| p.dim_at_bound.last().map(|e| e.0)).max().unwrap_or(0);
        if !parts.iter().all(|p| p.stable) {
            return StabilizedDims { dim_at_bound: vec![(last_bound, last)], stable: false };
        }
        let prev_bound = parts
            .iter()
            .filter_map(|p| p.dim_at_bound.iter().rev().nth(1).map(|e| e.0))
            .max();
        match prev_bound {
            Some(b) if b < last_bound => {
                StabilizedDims { dim_at_bound: vec![(b, last), (last_bound, last)], stable: true }
            }
            _ => StabilizedDims { dim_at_bound: vec![(last_bound, last)], stable: true },
        }
    }
}

/// Serialize a map of cells as a list of `[key, value]` pairs.
pub(crate) fn cells_as_list<K: Serialize, V: Serialize, S: serde::Serializer>(
    map: &std::collections::BTreeMap<K, V>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(map.iter())
}

impl fmt::Display for StabilizedDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "{}?", self.last().map_or("-".to_string(), |d| d.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    /// FAIL dominates INCONCLUSIVE, which dominates PASS.
    pub fn and(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Pass,
        }
    }

    pub fn all(vs: impl IntoIterator<Item = Verdict>) -> Verdict {
        vs.into_iter().fold(Verdict::Pass, Verdict::and)
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}
