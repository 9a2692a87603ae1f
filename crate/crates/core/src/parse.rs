//! Expression front-end for rational functions.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := ('-' | '+') unary | power
//! power := atom ('^' uint)?
//! atom  := uint | 'x' | 'zeta' | '(' expr ')'
//! ```
//!
//! Whitespace is insignificant. `zeta` denotes `ζ_N` for the level passed to
//! [`parse`]. The [`std::fmt::Display`] form of [`RatFunc`] parses back to
//! the same value.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::cyclo::{CycloNum, MAX_LEVEL};
use crate::error::ParseError;
use crate::ratfunc::RatFunc;

const MAX_EXPONENT: u64 = 4096;

/// Parses `text` with `zeta` read as a primitive `level`-th root of unity.
pub fn parse(text: &str, level: u32) -> Result<RatFunc, ParseError> {
    if level == 0 || level > MAX_LEVEL {
        return Err(ParseError::Syntax {
            pos: 0,
            msg: format!("zeta level must lie in 1..={MAX_LEVEL}"),
        });
    }
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        level,
    };
    let value = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error(format!("unexpected '{}'", p.chars[p.pos])));
    }
    Ok(value)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    level: u32,
}

impl Parser {
    fn error(&self, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RatFunc, ParseError> {
        let mut acc = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFunc, ParseError> {
        let mut acc = self.unary()?;
        while let Some(c @ ('*' | '/')) = self.peek() {
            let op_pos = self.pos;
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if c == '*' {
                &acc * &rhs
            } else {
                acc.div(&rhs)
                    .ok_or(ParseError::DivisionByZero { pos: op_pos })?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RatFunc, ParseError> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RatFunc, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.error("expected a nonnegative integer exponent"));
            }
            let e: u64 = digits
                .parse()
                .ok()
                .filter(|&e| e <= MAX_EXPONENT)
                .ok_or(ParseError::Syntax {
                    pos: start,
                    msg: format!("exponent exceeds {MAX_EXPONENT}"),
                })?;
            return Ok(base.pow(e as i64).expect("nonnegative power"));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn atom(&mut self) -> Result<RatFunc, ParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let digits = self.digits();
                let n: BigInt = digits.parse().expect("ascii digits");
                Ok(RatFunc::constant(CycloNum::from_rational(
                    BigRational::from_integer(n),
                )))
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let word: String = self.chars[start..self.pos].iter().collect();
                match word.as_str() {
                    "x" => Ok(RatFunc::x()),
                    "zeta" => Ok(RatFunc::constant(CycloNum::zeta(self.level))),
                    _ => {
                        self.pos = start;
                        Err(self.error(format!("unknown identifier '{word}'")))
                    }
                }
            }
            Some(c) => Err(self.error(format!("unexpected '{c}'"))),
            None => Err(self.error("unexpected end of input")),
        }
    }
}
