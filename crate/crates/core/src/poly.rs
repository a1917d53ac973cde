//! Sparse multivariate Laurent polynomials with exact rational coefficients.
//!
//! A [`Polynomial`] does not know its ring; exponent vectors simply carry the
//! ring's arity. Negative exponents are only meaningful on variables that the
//! owning [`crate::ring::GradedRing`] marks invertible.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn rational(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exponent vector. Ordered graded-lexicographically: first by the sum of
/// exponents, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<i32>);

impl Monomial {
    pub fn one(arity: usize) -> Self {
        Monomial(vec![0; arity])
    }

    pub fn var(arity: usize, index: usize, power: i32) -> Self {
        let mut e = vec![0; arity];
        e[index] = power;
        Monomial(e)
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Largest absolute exponent.
    pub fn max_abs(&self) -> u32 {
        self.0.iter().map(|e| e.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total().cmp(&other.total()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Normalized polynomial: no zero coefficients are ever stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    arity: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(arity: usize) -> Self {
        Polynomial { arity, terms: BTreeMap::new() }
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, Rational::one())
    }

    pub fn constant(arity: usize, c: Rational) -> Self {
        Self::monomial(Monomial::one(arity), c)
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let arity = m.arity();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { arity, terms }
    }

    pub fn var(arity: usize, index: usize) -> Self {
        Self::monomial(Monomial::var(arity, index, 1), Rational::one())
    }

    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Polynomial::zero(arity);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        assert_eq!(m.arity(), self.arity, "monomial arity mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.arity);
        }
        Polynomial {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            arity: self.arity,
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.arity);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Largest absolute exponent over all terms.
    pub fn max_abs_exponent(&self) -> u32 {
        self.terms.keys().map(Monomial::max_abs).max().unwrap_or(0)
    }

    /// Replace variable `index` by `value` (which must have the same arity).
    /// Only non-negative powers of the variable may occur.
    pub fn substitute(&self, index: usize, value: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.arity);
        for (m, c) in &self.terms {
            let e = m.0[index];
            assert!(e >= 0, "cannot substitute into a negative power");
            let mut rest = m.clone();
            rest.0[index] = 0;
            let term = value.pow(e as u32).mul_monomial(&rest).scale(c);
            out = &out + &term;
        }
        out
    }

    /// Drop variable `index` (which must not occur) from every exponent vector.
    pub fn remove_variable(&self, index: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.arity - 1);
        for (m, c) in &self.terms {
            assert_eq!(m.0[index], 0, "removed variable still occurs");
            let mut e = m.0.clone();
            e.remove(index);
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Insert a fresh variable (exponent 0) at position `index`.
    pub fn insert_variable(&self, index: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.arity + 1);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e.insert(index, 0);
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Re-embed into a ring of arity `arity`, sending variable `i` to `map[i]`.
    pub fn reindex(&self, map: &[usize], arity: usize) -> Polynomial {
        let mut out = Polynomial::zero(arity);
        for (m, c) in &self.terms {
            let mut e = vec![0; arity];
            for (i, &x) in m.0.iter().enumerate() {
                e[map[i]] += x;
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Content-free normalization used for printing determinism: nothing
    /// fancy, the leading (largest) coefficient sign only.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn has_negative_exponent(&self) -> bool {
        self.terms.keys().any(|m| m.0.iter().any(|&e| e < 0))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.arity);
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(a.mul(b), ca * cb);
            }
        }
        out
    }
}

/// Print a rational the way the grammar reads it back: `n` or `n/d`.
pub fn format_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Render a polynomial with the given variable names, largest term first.
pub fn format_polynomial(p: &Polynomial, names: &[String]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().rev().enumerate() {
        let negative = c.is_negative();
        let abs = c.abs();
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let mut factors: Vec<String> = Vec::new();
        for (j, &e) in m.0.iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(names[j].clone()),
                _ => factors.push(format!("{}^{}", names[j], e)),
            }
        }
        if factors.is_empty() {
            out.push_str(&format_rational(&abs));
        } else {
            if !abs.is_one() {
                out.push_str(&format_rational(&abs));
                out.push('*');
            }
            out.push_str(&factors.join("*"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_coefficients_are_dropped() {
        let x = Polynomial::var(2, 0);
        let d = &x - &x;
        assert!(d.is_zero());
        assert_eq!(d.len(), 0);
    }

    #[test]
    fn product_and_power() {
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let s = &x + &y;
        let sq = s.pow(2);
        assert_eq!(sq.len(), 3);
        assert_eq!(sq.coefficient(&Monomial(vec![1, 1])), rational(2));
    }

    #[test]
    fn substitution_eliminates_a_variable() {
        // x - u*s^2 with x := u*s^2 gives zero.
        let x = Polynomial::var(3, 0);
        let u = Polynomial::var(3, 1);
        let s = Polynomial::var(3, 2);
        let us2 = &u * &s.pow(2);
        let rel = &x - &us2;
        assert!(rel.substitute(0, &us2).is_zero());
    }

    #[test]
    fn grlex_order() {
        let a = Monomial(vec![2, 0]);
        let b = Monomial(vec![0, 1]);
        let c = Monomial(vec![1, 1]);
        assert!(b < a);
        assert!(a < c || a.total() == c.total());
    }

    #[test]
    fn printing() {
        let names = vec!["x".to_string(), "y".to_string()];
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let p = &x.pow(2) - &y.scale(&Rational::new(3.into(), 2.into()));
        assert_eq!(format_polynomial(&p, &names), "x^2 - 3/2*y");
    }
}
