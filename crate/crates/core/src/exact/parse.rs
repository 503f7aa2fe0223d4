//! Parser for the textual forms of [`ExactReal`] and [`ExactPoint`].
//!
//! Grammar (whitespace free between tokens):
//!
//! ```text
//! real     := ["-"] term (("+" | "-") term)*
//! term     := rational | [rational "*"] "sqrt(" uint ")"
//! rational := uint ["/" uint]
//! point    := "(" real ";" real ")"
//! ```
//!
//! Rationals must be in lowest terms with a positive denominator; anything
//! else is rejected so that a file holds exactly one spelling per value.
//! `sqrt(n)` accepts any positive `n` and normalizes the square part.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::point::ExactPoint;
use super::real::{ExactReal, Rational};

/// A parse failure, with the byte offset where it happened.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseExactError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseExactError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.offset + 1, self.message)
    }
}

impl std::error::Error for ParseExactError {}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn err(&self, message: impl Into<String>) -> ParseExactError {
        ParseExactError { offset: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c == ' ' || c == '\t') {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseExactError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    fn eat_keyword(&mut self, word: &str) -> bool {
        if self.src[self.pos..].starts_with(word) {
            self.pos += word.len();
            true
        } else {
            false
        }
    }

    fn parse_uint(&mut self) -> Result<BigInt, ParseExactError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a number"));
        }
        BigInt::from_str(&self.src[start..self.pos]).map_err(|e| self.err(e.to_string()))
    }

    fn parse_rational(&mut self) -> Result<Rational, ParseExactError> {
        let numer = self.parse_uint()?;
        if self.eat('/') {
            let at = self.pos;
            let denom = self.parse_uint()?;
            if denom.is_zero() {
                return Err(ParseExactError { offset: at, message: "zero denominator".into() });
            }
            if numer.gcd(&denom) != BigInt::one() {
                return Err(ParseExactError {
                    offset: at,
                    message: format!("rational {numer}/{denom} is not in lowest terms"),
                });
            }
            Ok(Rational::new(numer, denom))
        } else {
            Ok(Rational::from_integer(numer))
        }
    }

    /// One signed term, added into `acc`.
    fn parse_term(&mut self, negate: bool, acc: &mut BTreeMap<u64, Rational>) -> Result<(), ParseExactError> {
        let mut coeff = Rational::one();
        let mut radicand: Option<u64> = None;
        if self.eat_keyword("sqrt(") {
            radicand = Some(self.finish_sqrt()?);
        } else {
            coeff = self.parse_rational()?;
            if self.eat('*') {
                if !self.eat_keyword("sqrt(") {
                    return Err(self.err("expected 'sqrt(' after '*'"));
                }
                radicand = Some(self.finish_sqrt()?);
            }
        }
        if negate {
            coeff = -coeff;
        }
        let term = match radicand {
            None => ExactReal::from_rational(coeff),
            Some(n) => ExactReal::sqrt_scaled(coeff, n),
        };
        for (n, q) in term.terms() {
            let entry = acc.entry(n).or_insert_with(Rational::zero);
            *entry += q;
            if entry.is_zero() {
                acc.remove(&n);
            }
        }
        Ok(())
    }

    fn finish_sqrt(&mut self) -> Result<u64, ParseExactError> {
        let at = self.pos;
        let n = self.parse_uint()?;
        self.expect(')')?;
        let n: u64 = n
            .try_into()
            .map_err(|_| ParseExactError { offset: at, message: "radicand too large".into() })?;
        if n == 0 {
            return Err(ParseExactError { offset: at, message: "sqrt(0) is not a term".into() });
        }
        Ok(n)
    }

    fn parse_real(&mut self) -> Result<ExactReal, ParseExactError> {
        self.skip_ws();
        let mut acc = BTreeMap::new();
        let neg = self.eat('-');
        self.skip_ws();
        self.parse_term(neg, &mut acc)?;
        loop {
            self.skip_ws();
            let negate = if self.eat('+') {
                false
            } else if self.eat('-') {
                true
            } else {
                break;
            };
            self.skip_ws();
            self.parse_term(negate, &mut acc)?;
        }
        Ok(ExactReal::from_terms(acc))
    }

    fn parse_point(&mut self) -> Result<ExactPoint, ParseExactError> {
        self.skip_ws();
        self.expect('(')?;
        let re = self.parse_real()?;
        self.skip_ws();
        self.expect(';')?;
        let im = self.parse_real()?;
        self.skip_ws();
        self.expect(')')?;
        Ok(ExactPoint::new(re, im))
    }

    fn finish(&mut self) -> Result<(), ParseExactError> {
        self.skip_ws();
        if self.pos != self.src.len() {
            Err(self.err("trailing input"))
        } else {
            Ok(())
        }
    }
}

impl FromStr for ExactReal {
    type Err = ParseExactError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut c = Cursor::new(s);
        let v = c.parse_real()?;
        c.finish()?;
        Ok(v)
    }
}

impl FromStr for ExactPoint {
    type Err = ParseExactError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut c = Cursor::new(s);
        let v = c.parse_point()?;
        c.finish()?;
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_canonical_forms() {
        let x: ExactReal = "1/2 - sqrt(3) + 1/2*sqrt(33)".parse().unwrap();
        assert_eq!(x.to_string(), "1/2 - sqrt(3) + 1/2*sqrt(33)");
        let z: ExactReal = "0".parse().unwrap();
        assert!(z.is_zero());
        let p: ExactPoint = "(1/2 + 1/2*sqrt(33); 0)".parse().unwrap();
        assert_eq!(p.to_string(), "(1/2 + 1/2*sqrt(33); 0)");
    }

    #[test]
    fn normalizes_but_rejects_non_lowest_terms() {
        let x: ExactReal = "2*sqrt(12)".parse().unwrap();
        assert_eq!(x.to_string(), "4*sqrt(3)");
        let merged: ExactReal = "sqrt(3) + sqrt(3)".parse().unwrap();
        assert_eq!(merged.to_string(), "2*sqrt(3)");
        assert!("2/4".parse::<ExactReal>().is_err());
        assert!("1/0".parse::<ExactReal>().is_err());
    }

    #[test]
    fn error_positions() {
        let e = "1 + sqrt(x)".parse::<ExactReal>().unwrap_err();
        assert_eq!(e.offset, 9);
        let e = "(1; 2".parse::<ExactPoint>().unwrap_err();
        assert!(e.message.contains("')'"));
    }

    #[test]
    fn roundtrip_random_style_values() {
        for s in ["-7/3 + 2*sqrt(5) - sqrt(165)", "12", "-1/6*sqrt(11)", "3 - 1/2"] {
            let x: ExactReal = s.parse().unwrap();
            let y: ExactReal = x.to_string().parse().unwrap();
            assert_eq!(x, y);
        }
    }
}
