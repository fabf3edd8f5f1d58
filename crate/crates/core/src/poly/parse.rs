//! Polynomial text grammar:
//!
//! ```text
//! expr   := ('+'|'-')? term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := INT ('/' INT)? | VAR ('^' POSINT)? | '(' expr ')' ('^' POSINT)?
//! VAR    := [A-Za-z][A-Za-z0-9]*
//! ```
//!
//! Whitespace is insignificant. The leading sign and the `INT/INT` literal
//! are needed so that every printed polynomial parses back.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{Polynomial, Variable};
use crate::error::PolyError;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{message} at position {position}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [Variable],
}

/// Parses `text` into an expanded polynomial over `vars`.
pub fn parse_polynomial(text: &str, vars: &[Variable]) -> Result<Polynomial, PolyError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        vars,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(e)
}

impl Parser<'_> {
    fn nvars(&self) -> usize {
        self.vars.len()
    }

    fn syntax(&self, message: &str) -> PolyError {
        PolyError::Parse(ParseError {
            position: self.pos,
            message: message.to_string(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial, PolyError> {
        let mut negate_first = false;
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                negate_first = true;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        let mut acc = self.term()?;
        if negate_first {
            acc = -acc;
        }
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc + &t;
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc - &t;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn integer(&mut self) -> Result<BigInt, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax("expected integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse"))
    }

    fn exponent(&mut self) -> Result<u32, PolyError> {
        if self.peek() != Some(b'^') {
            return Ok(1);
        }
        self.pos += 1;
        self.skip_ws();
        let at = self.pos;
        let n = self.integer()?;
        let e: u32 = n
            .try_into()
            .map_err(|_| self.syntax("exponent out of range"))?;
        if e == 0 {
            self.pos = at;
            return Err(self.syntax("exponent must be positive"));
        }
        Ok(e)
    }

    fn factor(&mut self) -> Result<Polynomial, PolyError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                let mut q = BigRational::from_integer(n);
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let d = self.integer()?;
                    if d.is_zero() {
                        return Err(self.syntax("zero denominator"));
                    }
                    q /= BigRational::from_integer(d);
                }
                Ok(Polynomial::constant(self.nvars(), q))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                let v = self
                    .vars
                    .iter()
                    .position(|v| v.name == name)
                    .ok_or_else(|| PolyError::UnknownVariable {
                        name: name.to_string(),
                        position: start,
                    })?;
                let e = self.exponent()?;
                Ok(Polynomial::var(self.nvars(), v).pow(e))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.syntax("expected ')'"));
                }
                self.pos += 1;
                let e = self.exponent()?;
                Ok(inner.pow(e))
            }
            Some(_) => Err(self.syntax("unexpected character")),
            None => Err(self.syntax("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn vars3() -> Vec<Variable> {
        Variable::indexed(3)
    }

    #[test]
    fn worked_polynomial() {
        let f = parse_polynomial("x0^4*x2 + 9*x1", &vars3()).unwrap();
        assert_eq!(f.num_terms(), 2);
        assert_eq!(f.total_degree(), 5);
    }

    #[test]
    fn zero_literal() {
        let f = parse_polynomial("0", &vars3()).unwrap();
        assert!(f.is_zero());
        assert_eq!(f.total_degree(), -1);
    }

    #[test]
    fn named_variable() {
        let vars = Variable::named(&["x", "y", "z"]);
        let f = parse_polynomial("17*x^2 - 6", &vars).unwrap();
        assert_eq!(f.num_terms(), 2);
        assert_eq!(f.degree(0), 2);
    }

    #[test]
    fn parentheses_expand() {
        let vars = Variable::named(&["x"]);
        let f = parse_polynomial("(x - 1)^2*(x + 3)", &vars).unwrap();
        let g = parse_polynomial("x^3 + x^2 - 5*x + 3", &vars).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn errors_carry_positions() {
        let vars = Variable::named(&["x"]);
        match parse_polynomial("x + * 2", &vars) {
            Err(PolyError::Parse(e)) => assert_eq!(e.position, 4),
            other => panic!("unexpected {other:?}"),
        }
        match parse_polynomial("x + w", &vars) {
            Err(PolyError::UnknownVariable { name, position }) => {
                assert_eq!(name, "w");
                assert_eq!(position, 4);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_polynomial("x^0", &vars).is_err());
        assert!(parse_polynomial("(x + 1", &vars).is_err());
    }

    fn small_poly() -> impl Strategy<Value = Polynomial> {
        prop::collection::vec((0u32..3, 0u32..3, 0u32..3, -9i64..=9, 1i64..4), 0..5).prop_map(
            |ts| {
                Polynomial::from_terms(
                    3,
                    ts.into_iter().map(|(a, b, c, n, d)| {
                        (vec![a, b, c], BigRational::new(n.into(), d.into()))
                    }),
                )
            },
        )
    }

    proptest! {
        #[test]
        fn print_parse_is_identity(f in small_poly()) {
            let names: Vec<String> = vars3().into_iter().map(|v| v.name).collect();
            let text = f.display(&names).to_string();
            let g = parse_polynomial(&text, &vars3()).unwrap();
            prop_assert_eq!(g, f);
        }
    }
}
