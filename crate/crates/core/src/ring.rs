//! Bigraded polynomial rings modulo homogeneous relations.
//!
//! Every variable carries a primary weight (the twist grading, where the
//! blowup's `s` has weight -1) and an auxiliary weight. Base-ring variables
//! sit in primary weight 0 and auxiliary weight 1, which makes the pieces of
//! a polynomial ring over the base finite-dimensional once both degrees are
//! fixed. Localizations are expressed by flagging variables invertible.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parse::parse_polynomial;
use crate::poly::{format_polynomial, Monomial, Polynomial, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Degree {
    pub weight: i64,
    pub aux: i64,
}

impl Degree {
    pub const ZERO: Degree = Degree { weight: 0, aux: 0 };

    pub fn new(weight: i64, aux: i64) -> Self {
        Degree { weight, aux }
    }

    pub fn twist(weight: i64) -> Self {
        Degree { weight, aux: 0 }
    }
}

impl std::ops::Add for Degree {
    type Output = Degree;
    fn add(self, o: Degree) -> Degree {
        Degree::new(self.weight + o.weight, self.aux + o.aux)
    }
}

impl std::ops::Sub for Degree {
    type Output = Degree;
    fn sub(self, o: Degree) -> Degree {
        Degree::new(self.weight - o.weight, self.aux - o.aux)
    }
}

impl std::ops::Neg for Degree {
    type Output = Degree;
    fn neg(self) -> Degree {
        Degree::new(-self.weight, -self.aux)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.weight, self.aux)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub weight: i64,
    pub aux_weight: i64,
    pub invertible: bool,
}

impl Variable {
    pub fn new(name: impl Into<String>, weight: i64, aux_weight: i64) -> Self {
        Variable { name: name.into(), weight, aux_weight, invertible: false }
    }

    /// A base-ring variable: primary weight 0, auxiliary weight 1.
    pub fn base(name: impl Into<String>) -> Self {
        Variable::new(name, 0, 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedRing {
    vars: Vec<Variable>,
    relations: Vec<Polynomial>,
}

impl GradedRing {
    pub fn new(vars: Vec<Variable>, relations: Vec<Polynomial>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for v in &vars {
            if !seen.insert(v.name.clone()) {
                return Err(Error::DuplicateVariable(v.name.clone()));
            }
        }
        let ring = GradedRing { vars, relations: Vec::new() };
        for r in &relations {
            if r.arity() != ring.arity() {
                return Err(Error::Invalid("relation arity does not match ring".into()));
            }
            ring.homogeneous_degree(r)?;
        }
        Ok(GradedRing { relations: relations.into_iter().filter(|r| !r.is_zero()).collect(), ..ring })
    }

    pub fn free(vars: Vec<Variable>) -> Result<Self> {
        Self::new(vars, Vec::new())
    }

    /// Polynomial ring over the rationals in base variables, modulo the parsed
    /// relations.
    pub fn base(names: &[&str], relations: &[&str]) -> Result<Self> {
        let free = GradedRing::free(names.iter().map(|n| Variable::base(*n)).collect())?;
        let rels = relations
            .iter()
            .map(|r| free.parse(r))
            .collect::<Result<Vec<_>>>()?;
        GradedRing::new(free.vars, rels)
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn relations(&self) -> &[Polynomial] {
        &self.relations
    }

    pub fn names(&self) -> Vec<String> {
        self.vars.iter().map(|v| v.name.clone()).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn has_aux_grading(&self) -> bool {
        self.vars.iter().any(|v| v.aux_weight != 0)
    }

    pub fn parse(&self, text: &str) -> Result<Polynomial> {
        parse_polynomial(text, self)
    }

    pub fn print(&self, p: &Polynomial) -> String {
        format_polynomial(p, &self.names())
    }

    pub fn zero(&self) -> Polynomial {
        Polynomial::zero(self.arity())
    }

    pub fn one(&self) -> Polynomial {
        Polynomial::one(self.arity())
    }

    pub fn var(&self, i: usize) -> Polynomial {
        Polynomial::var(self.arity(), i)
    }

    pub fn monomial_degree(&self, m: &Monomial) -> Degree {
        let mut d = Degree::ZERO;
        for (v, &e) in self.vars.iter().zip(&m.0) {
            d.weight += v.weight * e as i64;
            d.aux += v.aux_weight * e as i64;
        }
        d
    }

    /// Bidegree of a homogeneous polynomial, `None` for zero.
    pub fn homogeneous_degree(&self, p: &Polynomial) -> Result<Option<Degree>> {
        let mut found: Option<Degree> = None;
        for (m, _) in p.terms() {
            if m.0.iter().zip(&self.vars).any(|(&e, v)| e < 0 && !v.invertible) {
                return Err(Error::Invalid(format!(
                    "negative exponent on a non-invertible variable in `{}`",
                    self.print(p)
                )));
            }
            let d = self.monomial_degree(m);
            match found {
                None => found = Some(d),
                Some(f) if f != d => return Err(Error::Inhomogeneous(self.print(p))),
                _ => {}
            }
        }
        Ok(found)
    }

    /// Same variables, with `indices` inverted.
    pub fn localize(&self, indices: &[usize]) -> GradedRing {
        let mut out = self.clone();
        for &i in indices {
            out.vars[i].invertible = true;
        }
        out
    }

    pub fn with_relations(&self, extra: &[Polynomial]) -> Result<GradedRing> {
        let mut rels = self.relations.clone();
        rels.extend(extra.iter().cloned());
        GradedRing::new(self.vars.clone(), rels)
    }

    pub fn without_relations(&self) -> GradedRing {
        GradedRing { vars: self.vars.clone(), relations: Vec::new() }
    }

    /// Append variables (exponent 0 in every existing polynomial).
    pub fn extend(&self, extra: Vec<Variable>) -> Result<GradedRing> {
        let mut vars = self.vars.clone();
        let added = extra.len();
        vars.extend(extra);
        let rels = self
            .relations
            .iter()
            .map(|r| {
                let mut p = r.clone();
                for k in 0..added {
                    p = p.insert_variable(self.arity() + k);
                }
                p
            })
            .collect();
        GradedRing::new(vars, rels)
    }

    /// Embed a polynomial of this ring into a ring extending it by extra
    /// trailing variables.
    pub fn embed(&self, p: &Polynomial, target_arity: usize) -> Polynomial {
        let map: Vec<usize> = (0..self.arity()).collect();
        p.reindex(&map, target_arity)
    }

    /// Pick a fresh identifier based on `stem`, appending `_` until unused.
    pub fn fresh_name(&self, stem: &str, taken: &BTreeSet<String>) -> String {
        let mut name = stem.to_string();
        while self.index_of(&name).is_some() || taken.contains(&name) {
            name.push('_');
        }
        name
    }

    /// Eliminate variables that occur linearly in a relation.
    ///
    /// A relation `c*v + h` with `v` absent from `h`, `v` not invertible and
    /// not listed in `protected` is used to substitute `v := -h/c` everywhere;
    /// the relation and the variable are then dropped. The result is a
    /// bigraded ring isomorphic to `self`, together with the substitution that
    /// carries polynomials across.
    pub fn eliminate_linear(&self, protected: &[usize]) -> Simplified {
        let mut vars = self.vars.clone();
        let mut rels = self.relations.clone();
        // original index -> image polynomial in the current (shrinking) ring
        let mut images: Vec<Polynomial> = (0..self.arity()).map(|i| self.var(i)).collect();
        let mut alive: Vec<usize> = (0..self.arity()).collect();
        let mut protected_now: Vec<bool> = (0..self.arity()).map(|i| protected.contains(&i)).collect();

        loop {
            let mut found = None;
            'search: for (ri, rel) in rels.iter().enumerate() {
                for (vi, var) in vars.iter().enumerate() {
                    if var.invertible || protected_now[vi] {
                        continue;
                    }
                    let lin = Monomial::var(vars.len(), vi, 1);
                    let c = rel.coefficient(&lin);
                    if c.is_zero() {
                        continue;
                    }
                    if rel.terms().filter(|(m, _)| m.0[vi] != 0).count() == 1 {
                        found = Some((ri, vi, c));
                        break 'search;
                    }
                }
            }
            let Some((ri, vi, c)) = found else { break };
            let rel = rels.remove(ri);
            let lin = Monomial::var(vars.len(), vi, 1);
            let mut rest = rel.clone();
            rest.add_term(lin, -c.clone());
            let value = rest.scale(&(-Rational::one() / c));
            rels = rels
                .iter()
                .map(|r| r.substitute(vi, &value).remove_variable(vi))
                .filter(|r| !r.is_zero())
                .collect();
            images = images.iter().map(|p| p.substitute(vi, &value).remove_variable(vi)).collect();
            vars.remove(vi);
            alive.remove(vi);
            protected_now.remove(vi);
        }

        let ring = GradedRing { vars, relations: rels };
        let mut index_map = vec![None; self.arity()];
        for (new, &old) in alive.iter().enumerate() {
            index_map[old] = Some(new);
        }
        Simplified { ring, images, index_map }
    }
}

/// Result of [`GradedRing::eliminate_linear`].
#[derive(Clone, Debug)]
pub struct Simplified {
    pub ring: GradedRing,
    /// Image of each original variable.
    images: Vec<Polynomial>,
    /// Surviving original variable -> new index.
    index_map: Vec<Option<usize>>,
}

impl Simplified {
    pub fn new_index(&self, original: usize) -> Option<usize> {
        self.index_map[original]
    }

    /// Carry a polynomial of the original ring across. Variables with negative
    /// exponents must have survived the elimination.
    pub fn map(&self, p: &Polynomial) -> Polynomial {
        let arity = self.ring.arity();
        let mut out = Polynomial::zero(arity);
        for (m, c) in p.terms() {
            let mut term = Polynomial::constant(arity, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match self.index_map[i] {
                    Some(j) => term = term.mul_monomial(&Monomial::var(arity, j, e)),
                    None => {
                        assert!(e > 0, "negative power of an eliminated variable");
                        term = &term * &self.images[i].pow(e as u32);
                    }
                }
            }
            out = &out + &term;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_names_rejected() {
        let r = GradedRing::free(vec![Variable::base("x"), Variable::base("x")]);
        assert_eq!(r.unwrap_err(), Error::DuplicateVariable("x".into()));
    }

    #[test]
    fn inhomogeneous_relation_rejected() {
        let r = GradedRing::base(&["x", "y"], &["x - y^2"]);
        assert!(matches!(r, Err(Error::Inhomogeneous(_))));
    }

    #[test]
    fn elimination_of_blowup_relations() {
        // Q[x,y,s,u,v]/(x - u*s^2, y - v*s) is the polynomial ring Q[s,u,v].
        let ring = GradedRing::new(
            vec![
                Variable::base("x"),
                Variable::base("y"),
                Variable::new("s", -1, 0),
                Variable::new("u", 2, 1),
                Variable::new("v", 1, 1),
            ],
            vec![],
        )
        .unwrap();
        let rels = vec![ring.parse("x - u*s^2").unwrap(), ring.parse("y - v*s").unwrap()];
        let ring = ring.with_relations(&rels).unwrap();
        let simp = ring.eliminate_linear(&[3, 4]);
        assert_eq!(simp.ring.names(), vec!["s", "u", "v"]);
        assert!(simp.ring.relations().is_empty());
        let x = ring.parse("x*y").unwrap();
        assert_eq!(simp.ring.print(&simp.map(&x)), "s^3*u*v");
    }

    #[test]
    fn elimination_respects_protection() {
        let ring = GradedRing::base(&["x", "y"], &["x - y"]).unwrap();
        let simp = ring.eliminate_linear(&[0, 1]);
        assert_eq!(simp.ring.arity(), 2);
        assert_eq!(simp.ring.relations().len(), 1);
    }
}
