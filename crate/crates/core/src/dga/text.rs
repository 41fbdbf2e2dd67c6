use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::algebra::Algebra;
use super::element::DgaElement;
use super::DgaError;
use crate::scalar::{Rational, Scalar};

/// Parses the canonical rendering of a rational element, e.g.
/// `1 + (1/2)·p1^2·b^4 - 3·H·x1`. `*` is accepted in place of `·`.
pub fn parse_element(algebra: &Arc<Algebra>, text: &str) -> Result<DgaElement<Rational>, DgaError> {
    let mut p = Parser {
        chars: text.chars().filter(|c| !c.is_whitespace()).collect(),
        pos: 0,
    };
    if p.chars.is_empty() {
        return Err(DgaError::Parse("empty input".into()));
    }
    let mut acc = DgaElement::zero(algebra);
    let mut first = true;
    while p.pos < p.chars.len() {
        let negative = match p.peek() {
            Some('+') => {
                p.pos += 1;
                false
            }
            Some('-') => {
                p.pos += 1;
                true
            }
            _ if first => false,
            Some(c) => return Err(DgaError::Parse(format!("expected + or - at {}, found {c:?}", p.pos))),
            None => unreachable!(),
        };
        first = false;
        let term = p.term(algebra)?;
        acc = if negative { &acc - &term } else { &acc + &term };
    }
    Ok(acc)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn digits(&mut self) -> Result<BigInt, DgaError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(DgaError::Parse(format!("expected digits at {start}")));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| DgaError::Parse(format!("bad integer {s}")))
    }

    fn rational(&mut self) -> Result<Rational, DgaError> {
        let neg = self.peek() == Some('-');
        if neg {
            self.pos += 1;
        }
        let num = self.digits()?;
        let den = if self.peek() == Some('/') {
            self.pos += 1;
            self.digits()?
        } else {
            BigInt::one()
        };
        if den.is_zero() {
            return Err(DgaError::Parse("zero denominator".into()));
        }
        let q = Rational::new(num, den);
        Ok(if neg { -q } else { q })
    }

    fn term(&mut self, algebra: &Arc<Algebra>) -> Result<DgaElement<Rational>, DgaError> {
        let mut coeff = Rational::one();
        let mut factors: Vec<(String, i32)> = Vec::new();
        loop {
            match self.peek() {
                Some('(') => {
                    self.pos += 1;
                    coeff *= self.rational()?;
                    if self.peek() != Some(')') {
                        return Err(DgaError::Parse(format!("expected ) at {}", self.pos)));
                    }
                    self.pos += 1;
                }
                Some(c) if c.is_ascii_digit() => coeff *= self.rational()?,
                Some(c) if c.is_ascii_alphabetic() => {
                    let start = self.pos;
                    while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
                        self.pos += 1;
                    }
                    let name: String = self.chars[start..self.pos].iter().collect();
                    let mut e = 1i32;
                    if self.peek() == Some('^') {
                        self.pos += 1;
                        let r = self.rational()?;
                        if !r.is_integer() {
                            return Err(DgaError::Parse(format!("non-integer exponent on {name}")));
                        }
                        e = i32::try_from(r.to_integer())
                            .map_err(|_| DgaError::Parse(format!("exponent on {name} out of range")))?;
                    }
                    factors.push((name, e));
                }
                other => {
                    return Err(DgaError::Parse(match other {
                        Some(c) => format!("unexpected {c:?} at {}", self.pos),
                        None => "unexpected end of input".into(),
                    }))
                }
            }
            match self.peek() {
                Some('·') | Some('*') => self.pos += 1,
                _ => break,
            }
        }
        let refs: Vec<(&str, i32)> = factors.iter().map(|(n, e)| (n.as_str(), *e)).collect();
        if refs.is_empty() {
            return Ok(DgaElement::from_terms(
                algebra,
                BTreeMap::from([(algebra.unit_monomial(), coeff)]),
            ));
        }
        DgaElement::monomial(algebra, &refs, <Rational as Scalar>::from_rational(&coeff))
    }
}
