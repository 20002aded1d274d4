//! Text syntax: `term (('+'|'-') term)*`, where terms are products of rational
//! constants, variables, `^` powers and parenthesised subexpressions.

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use super::polynomial::Polynomial;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected character {found:?} at offset {offset}")]
    UnexpectedChar { offset: usize, found: char },
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("duplicate variable name {0:?}")]
    DuplicateVariable(String),
    #[error("coefficient {0} has no image in the coefficient domain")]
    BadCoefficient(String),
    #[error("exponent too large at offset {0}")]
    ExponentOverflow(usize),
}

pub fn parse_polynomial<C: Scalar>(text: &str, vars: &[&str]) -> Result<Polynomial<C>, ParseError> {
    for (i, v) in vars.iter().enumerate() {
        if vars[..i].contains(v) {
            return Err(ParseError::DuplicateVariable(v.to_string()));
        }
    }
    let mut p = Parser { src: text.as_bytes(), pos: 0, vars };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.unexpected());
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [&'a str],
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn unexpected(&self) -> ParseError {
        match self.src.get(self.pos) {
            Some(&c) => ParseError::UnexpectedChar { offset: self.pos, found: c as char },
            None => ParseError::UnexpectedEnd,
        }
    }

    fn n(&self) -> usize {
        self.vars.len()
    }

    fn expr<C: Scalar>(&mut self) -> Result<Polynomial<C>, ParseError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -self.term::<C>()?
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term<C: Scalar>(&mut self) -> Result<Polynomial<C>, ParseError> {
        let mut acc = self.power()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.power()?;
        }
        Ok(acc)
    }

    fn power<C: Scalar>(&mut self) -> Result<Polynomial<C>, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits().ok_or_else(|| self.unexpected())?;
            let e: u32 = digits.parse().map_err(|_| ParseError::ExponentOverflow(start))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn atom<C: Scalar>(&mut self) -> Result<Polynomial<C>, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.unexpected());
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.power::<C>()?)
            }
            Some(c) if c.is_ascii_digit() => {
                let num: BigInt = self.digits().unwrap().parse().expect("digits");
                let mut den = BigInt::one();
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    den = self.digits().ok_or_else(|| self.unexpected())?.parse().expect("digits");
                }
                let c = C::from_ratio(&num, &den).ok_or_else(|| ParseError::BadCoefficient(format!("{num}/{den}")))?;
                Ok(Polynomial::constant(self.n(), c))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                let idx = self
                    .vars
                    .iter()
                    .position(|v| *v == name)
                    .ok_or_else(|| ParseError::UnknownVariable(name.to_string()))?;
                Ok(Polynomial::var(idx, self.n()))
            }
            _ => Err(self.unexpected()),
        }
    }
}
