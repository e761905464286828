//! Parser for the coefficient expression grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | '+' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | 'i' | z<k> | w<k> | '(' expr ')'
//! ```
//!
//! Whitespace is ignored. The deformation parameter is never part of a
//! coefficient expression.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::poly::{Var, MAX_DIM};
use super::ratfunc::RationalFunction;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Parse an expression over the variables of an `n`-dimensional chart.
pub fn parse_expr(src: &str, n: usize) -> Result<RationalFunction> {
    let mut p = Parser {
        src,
        chars: src
            .char_indices()
            .filter(|(_, c)| !c.is_whitespace())
            .collect(),
        pos: 0,
        n: n.min(MAX_DIM),
    };
    let value = p.expr()?;
    if p.pos < p.chars.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(value)
}

struct Parser<'a> {
    src: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
    n: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars
            .get(self.pos)
            .map(|&(i, _)| i)
            .unwrap_or(self.src.len())
    }

    fn error(&self, msg: &str) -> Error {
        Error::Parse {
            input: self.src.to_string(),
            position: self.offset(),
            message: msg.to_string(),
        }
    }

    fn expr(&mut self) -> Result<RationalFunction> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                '-' => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalFunction> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                '*' => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                '/' => {
                    self.pos += 1;
                    let at = self.offset();
                    let d = self.unary()?;
                    acc = acc.div(&d).map_err(|_| Error::Parse {
                        input: self.src.to_string(),
                        position: at,
                        message: "zero divisor".to_string(),
                    })?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RationalFunction> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RationalFunction> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.error("expected a non-negative integer exponent"));
            }
            let e: u32 = digits
                .parse()
                .map_err(|_| self.error("exponent out of range"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                s.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        s
    }

    fn atom(&mut self) -> Result<RationalFunction> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.digits();
                let n: BigInt = digits.parse().expect("ascii digits");
                Ok(RationalFunction::constant(Scalar::new(
                    BigRational::from_integer(n),
                    BigRational::zero(),
                )))
            }
            Some('i') => {
                self.pos += 1;
                Ok(RationalFunction::constant(Scalar::i()))
            }
            Some(c @ ('z' | 'w')) => {
                let start = self.offset();
                self.pos += 1;
                let digits = self.digits();
                let k: usize = digits.parse().map_err(|_| Error::Parse {
                    input: self.src.to_string(),
                    position: start,
                    message: format!("expected an index after '{c}'"),
                })?;
                if k == 0 || k > self.n {
                    return Err(Error::Parse {
                        input: self.src.to_string(),
                        position: start,
                        message: format!(
                            "variable {c}{k} is outside a chart of dimension {}",
                            self.n
                        ),
                    });
                }
                let v = if c == 'z' {
                    Var::Z(k - 1)
                } else {
                    Var::W(k - 1)
                };
                Ok(RationalFunction::var(v))
            }
            Some('v') => Err(self
                .error("the deformation parameter is not allowed inside coefficient expressions")),
            Some(c) => Err(self.error(&format!("unexpected character '{c}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> RationalFunction {
        parse_expr(s, 2).unwrap()
    }

    #[test]
    fn precedence_and_powers() {
        assert!(p("1 + 2*z1^2").equals(&p("2*z1*z1 + 1")));
        assert!(p("-w1^2").equals(&p("-(w1*w1)")));
        assert!(p("1/2*z1").equals(&p("z1/2")));
        assert!(p("(1+i)*(1-i)").equals(&p("2")));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_expr("z3", 2).is_err());
        assert!(parse_expr("v*z1", 1).is_err());
        assert!(parse_expr("z1^-1", 1).is_err());
        assert!(parse_expr("1/(z1-z1)", 1).is_err());
        assert!(parse_expr("(z1", 1).is_err());
    }

    #[test]
    fn canonical_rendering_reparses() {
        for src in [
            "(2*z1*w1+1)/(z1^2*w1+1)",
            "i*z1 - w2/3",
            "(1+2*i)*z1*w1",
            "-i/(1+z1*w1)",
        ] {
            let a = p(src);
            let back = p(&a.to_string());
            assert!(a.equals(&back), "{src} -> {a}");
        }
        assert_eq!(
            p("(2*z1*w1+1)/(z1^2*w1+1)").to_string(),
            "(2*z1*w1 + 1)/(z1^2*w1 + 1)"
        );
    }
}
