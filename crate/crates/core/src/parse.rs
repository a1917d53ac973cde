//! Polynomial text grammar.
//!
//! ```text
//! expr   := sign? term (("+"|"-") term)*
//! term   := coeff ("*" factor)* | factor ("*" factor)*
//! factor := ident ("^" uint)?
//! coeff  := int | int "/" uint
//! ```
//!
//! Whitespace is insignificant. A leading sign and negative exponents on
//! invertible variables are accepted so that printed polynomials read back.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial, Rational};
use crate::ring::GradedRing;

struct Lexer<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    _src: &'a str,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        let chars = src.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        Lexer { chars, pos: 0, _src: src }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map(|&(i, _)| i).unwrap_or_else(|| self._src.len())
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        self.pos += 1;
        c
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<String> {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                s.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        (!s.is_empty()).then_some(s)
    }

    fn ident(&mut self) -> Option<String> {
        let mut s = String::new();
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
            _ => return None,
        }
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                s.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        Some(s)
    }
}

pub fn parse_polynomial(text: &str, ring: &GradedRing) -> Result<Polynomial> {
    let mut lx = Lexer::new(text);
    let arity = ring.arity();
    let mut out = Polynomial::zero(arity);
    if lx.peek().is_none() {
        return Err(Error::Syntax { position: 0, message: "empty expression".into() });
    }
    let mut negative = if lx.eat('-') {
        true
    } else {
        lx.eat('+');
        false
    };
    loop {
        let (m, mut c) = parse_term(&mut lx, ring)?;
        if negative {
            c = -c;
        }
        out.add_term(m, c);
        match lx.peek() {
            None => break,
            Some('+') => {
                lx.bump();
                negative = false;
            }
            Some('-') => {
                lx.bump();
                negative = true;
            }
            Some(other) => {
                return Err(Error::Syntax {
                    position: lx.offset(),
                    message: format!("unexpected `{other}`"),
                })
            }
        }
    }
    Ok(out)
}

fn parse_term(lx: &mut Lexer<'_>, ring: &GradedRing) -> Result<(Monomial, Rational)> {
    let arity = ring.arity();
    let mut exps = vec![0i32; arity];
    let mut coeff = Rational::from_integer(BigInt::from(1));
    let mut expect_factor = true;
    if let Some(d) = lx.digits() {
        let num: BigInt = d.parse().expect("digits");
        coeff = if lx.eat('/') {
            let pos = lx.offset();
            let den = lx.digits().ok_or(Error::Syntax {
                position: pos,
                message: "expected denominator".into(),
            })?;
            let den: BigInt = den.parse().expect("digits");
            if den.is_zero() {
                return Err(Error::Syntax { position: pos, message: "zero denominator".into() });
            }
            Rational::new(num, den)
        } else {
            Rational::from_integer(num)
        };
        expect_factor = lx.eat('*');
        if !expect_factor {
            return Ok((Monomial(exps), coeff));
        }
    }
    loop {
        if !expect_factor {
            break;
        }
        let pos = lx.offset();
        let name = lx.ident().ok_or_else(|| Error::Syntax {
            position: pos,
            message: match lx.peek() {
                Some(c) => format!("expected a variable, found `{c}`"),
                None => "expected a variable, found end of input".into(),
            },
        })?;
        let idx = ring
            .index_of(&name)
            .ok_or(Error::UnknownVariable { name: name.clone(), position: pos })?;
        let mut e: i32 = 1;
        if lx.eat('^') {
            let epos = lx.offset();
            let neg = lx.eat('-');
            if neg && !ring.vars()[idx].invertible {
                return Err(Error::BadExponent { position: epos });
            }
            let d = lx.digits().ok_or(Error::BadExponent { position: epos })?;
            if matches!(lx.peek(), Some('.') | Some('/')) {
                return Err(Error::BadExponent { position: epos });
            }
            e = d.parse().map_err(|_| Error::BadExponent { position: epos })?;
            if neg {
                e = -e;
            }
        }
        exps[idx] += e;
        expect_factor = lx.eat('*');
    }
    Ok((Monomial(exps), coeff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational;
    use crate::ring::{GradedRing, Variable};

    fn qxy() -> GradedRing {
        GradedRing::base(&["x", "y"], &[]).unwrap()
    }

    #[test]
    fn reads_simple_polynomial() {
        let p = qxy().parse("x^2 - y").unwrap();
        assert_eq!(p.coefficient(&Monomial(vec![2, 0])), rational(1));
        assert_eq!(p.coefficient(&Monomial(vec![0, 1])), rational(-1));
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn zero_is_empty() {
        assert!(qxy().parse("0").unwrap().is_zero());
    }

    #[test]
    fn deformed_generator() {
        let ring = GradedRing::free(vec![
            Variable::base("x"),
            Variable::new("u", 2, 1),
            Variable::new("s", -1, 0),
        ])
        .unwrap();
        let p = ring.parse("x - u*s^2").unwrap();
        assert_eq!(p.coefficient(&Monomial(vec![1, 0, 0])), rational(1));
        assert_eq!(p.coefficient(&Monomial(vec![0, 1, 2])), rational(-1));
    }

    #[test]
    fn fractions_and_whitespace() {
        let p = qxy().parse(" 3 / 4 * x * y ^ 2 + 1").unwrap();
        assert_eq!(p.coefficient(&Monomial(vec![1, 2])), Rational::new(3.into(), 4.into()));
        assert_eq!(p.coefficient(&Monomial(vec![0, 0])), rational(1));
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(
            qxy().parse("x + z").unwrap_err(),
            Error::UnknownVariable { name: "z".into(), position: 4 }
        );
        assert!(matches!(qxy().parse("x^y"), Err(Error::BadExponent { position: 2 })));
        assert!(matches!(qxy().parse("x^1.5"), Err(Error::BadExponent { .. })));
        assert!(matches!(qxy().parse("x +"), Err(Error::Syntax { .. })));
        assert!(matches!(qxy().parse("x ) y"), Err(Error::Syntax { position: 2, .. })));
        assert!(matches!(qxy().parse("x^-1"), Err(Error::BadExponent { .. })));
    }

    #[test]
    fn negative_exponents_on_invertible_variables() {
        let ring = qxy().localize(&[0]);
        let p = ring.parse("x^-2*y").unwrap();
        assert_eq!(p.coefficient(&Monomial(vec![-2, 1])), rational(1));
    }
}
