//! Reader for the polynomial expression grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := ('+' | '-')* factor ('*' factor)*
//! factor := atom ('^' integer)?
//! atom   := integer ('/' integer)? | identifier
//! ```
//!
//! Whitespace is ignored between tokens. The printed form of a
//! [`MultiPoly`] is always accepted by this grammar.

use num_bigint::BigInt;
use num_traits::Zero;

use super::poly::{MultiPoly, Vars};
use super::rational::Rational;
use super::AlgebraError;

/// Parses `text` as a polynomial over `vars`.
pub fn parse_poly(text: &str, vars: &Vars) -> Result<MultiPoly, AlgebraError> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
        vars,
    };
    let poly = parser.expr()?;
    parser.skip_ws();
    if parser.pos < parser.src.len() {
        return Err(parser.error("unexpected character"));
    }
    Ok(poly)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a Vars,
}

impl Parser<'_> {
    fn error(&self, reason: &str) -> AlgebraError {
        AlgebraError::Syntax {
            offset: self.pos,
            reason: reason.to_string(),
        }
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

    fn expr(&mut self) -> Result<MultiPoly, AlgebraError> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            if op == b'+' {
                acc += &t;
            } else {
                acc -= &t;
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MultiPoly, AlgebraError> {
        let mut negate = false;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            negate ^= op == b'-';
        }
        let mut acc = self.factor()?;
        while let Some(b'*') = self.peek() {
            self.pos += 1;
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(if negate { -acc } else { acc })
    }

    fn factor(&mut self) -> Result<MultiPoly, AlgebraError> {
        let base = self.atom()?;
        if let Some(b'^') = self.peek() {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.error("expected nonnegative integer exponent"));
            }
            let exp: u32 = digits.parse().map_err(|_| AlgebraError::Syntax {
                offset: start,
                reason: "exponent too large".to_string(),
            })?;
            return Ok(base.pow(exp));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<MultiPoly, AlgebraError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let numer: BigInt = self.digits().parse().expect("digit run");
                let mut value = Rational::from_integer(numer);
                if let Some(b'/') = self.peek() {
                    self.pos += 1;
                    self.skip_ws();
                    let at = self.pos;
                    let d = self.digits();
                    if d.is_empty() {
                        return Err(self.error("expected integer denominator"));
                    }
                    let denom: BigInt = d.parse().expect("digit run");
                    if denom.is_zero() {
                        return Err(AlgebraError::Syntax {
                            offset: at,
                            reason: "zero denominator".to_string(),
                        });
                    }
                    value /= Rational::from_integer(denom);
                }
                Ok(MultiPoly::constant(self.vars, value))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match self.vars.index_of(name) {
                    Some(i) => Ok(MultiPoly::var(self.vars, i)),
                    None => Err(AlgebraError::UnknownVariableAt {
                        offset: start,
                        name: name.to_string(),
                    }),
                }
            }
            Some(_) => Err(self.error("expected number or variable")),
            None => Err(self.error("unexpected end of expression")),
        }
    }
}

/// Parses a bare rational literal such as `-3/4`.
pub fn parse_rational(text: &str) -> Result<Rational, AlgebraError> {
    let p = parse_poly(text, &Vars::empty())?;
    Ok(p.constant_value().unwrap_or_else(Rational::zero))
}
