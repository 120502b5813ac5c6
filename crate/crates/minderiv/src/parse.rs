//! Parser for the polynomial text grammar.
//!
//! Terms are joined by `+` and `-`, coefficients are `integer` or
//! `integer/integer`, variables are the ring's declared names, `^` raises to
//! a natural power, and `*` between factors is optional. Example:
//! `3/2*x1^2*x2 - y`.
//!
//! Parsing a polynomial's canonical printing returns an equal polynomial.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial, Rational, Ring};

pub fn parse_polynomial(text: &str, ring: &Ring) -> Result<Polynomial> {
    Parser {
        bytes: text.as_bytes(),
        pos: 0,
        ring,
    }
    .parse()
}

/// Parses a standalone rational in the `integer` or `integer/integer` form,
/// with an optional leading sign.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let ring = Ring::new(["_unused"]);
    let mut parser = Parser {
        bytes: text.as_bytes(),
        pos: 0,
        ring: &ring,
    };
    parser.skip_ws();
    let negative = parser.eat_sign()?;
    parser.skip_ws();
    let value = parser.number()?;
    parser.skip_ws();
    if parser.pos != parser.bytes.len() {
        return Err(parser.syntax("trailing input after number"));
    }
    Ok(if negative { -value } else { value })
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    ring: &'a Ring,
}

impl<'a> Parser<'a> {
    fn parse(mut self) -> Result<Polynomial> {
        let mut out = Polynomial::zero(self.ring);
        self.skip_ws();
        if self.pos == self.bytes.len() {
            return Err(self.syntax("empty input"));
        }
        let mut negative = self.eat_sign()?;
        loop {
            self.skip_ws();
            let term = self.term()?;
            out = if negative { &out - &term } else { &out + &term };
            self.skip_ws();
            match self.peek() {
                None => return Ok(out),
                Some(b'+') => {
                    self.pos += 1;
                    negative = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    negative = true;
                }
                Some(c) => {
                    return Err(self.syntax(&format!("expected `+` or `-`, found `{}`", c as char)))
                }
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut coeff = Rational::one();
        let mut exponents = vec![0u32; self.ring.len()];
        let mut saw_factor = false;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let base = self.number()?;
                    coeff *= self.maybe_power_rational(base)?;
                    saw_factor = true;
                }
                Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                    let start = self.pos;
                    let name = self.identifier();
                    let index = self.ring.index_of(name).ok_or(Error::UnknownVariable {
                        name: name.to_string(),
                        position: start,
                    })?;
                    let power = self.maybe_exponent()?.unwrap_or(1);
                    exponents[index] += power;
                    saw_factor = true;
                }
                _ => {
                    if !saw_factor {
                        return Err(self.syntax("expected a coefficient or variable"));
                    }
                    return Ok(Polynomial::monomial(self.ring, Monomial::new(exponents), coeff));
                }
            }
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
                // a factor must follow an explicit `*`
                self.skip_ws();
                match self.peek() {
                    Some(c) if c.is_ascii_alphanumeric() || c == b'_' => {}
                    _ => return Err(self.syntax("expected a factor after `*`")),
                }
            }
        }
    }

    fn maybe_power_rational(&mut self, base: Rational) -> Result<Rational> {
        match self.maybe_exponent()? {
            None => Ok(base),
            Some(e) => {
                let mut acc = Rational::one();
                for _ in 0..e {
                    acc *= &base;
                }
                Ok(acc)
            }
        }
    }

    fn maybe_exponent(&mut self) -> Result<Option<u32>> {
        self.skip_ws();
        if self.peek() != Some(b'^') {
            return Ok(None);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        let digits = self.digits();
        if digits.is_empty() {
            return Err(self.syntax("expected an exponent after `^`"));
        }
        digits
            .parse::<u32>()
            .map(Some)
            .map_err(|_| Error::Syntax {
                position: start,
                message: "exponent too large".into(),
            })
    }

    fn number(&mut self) -> Result<Rational> {
        let numer_text = self.digits();
        if numer_text.is_empty() {
            return Err(self.syntax("expected a number"));
        }
        let numer: BigInt = numer_text.parse().expect("digits parse as integer");
        self.skip_ws();
        if self.peek() != Some(b'/') {
            return Ok(Rational::from_integer(numer));
        }
        self.pos += 1;
        self.skip_ws();
        let denom_pos = self.pos;
        let denom_text = self.digits();
        if denom_text.is_empty() {
            return Err(self.syntax("expected a denominator after `/`"));
        }
        let denom: BigInt = denom_text.parse().expect("digits parse as integer");
        if denom.is_zero() {
            return Err(Error::Syntax {
                position: denom_pos,
                message: "zero denominator".into(),
            });
        }
        Ok(Rational::new(numer, denom))
    }

    fn identifier(&mut self) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == b'_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii slice")
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                self.pos += 1;
            } else {
                break;
            }
        }
        std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii slice")
    }

    fn eat_sign(&mut self) -> Result<bool> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(true)
            }
            Some(b'+') => {
                self.pos += 1;
                Ok(false)
            }
            _ => Ok(false),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek() == Some(b' ') || self.peek() == Some(b'\t') {
            self.pos += 1;
        }
    }

    fn syntax(&self, message: &str) -> Error {
        Error::Syntax {
            position: self.pos,
            message: message.into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn ring() -> Ring {
        Ring::new(["x1", "x2", "y"])
    }

    #[test]
    fn grammar_example() {
        let r = ring();
        let p = parse_polynomial("3/2*x1^2*x2 - y", &r).unwrap();
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.coefficient(&Monomial::new(vec![2, 1, 0])), rat(3, 2));
        assert_eq!(p.coefficient(&Monomial::new(vec![0, 0, 1])), rat(-1, 1));
        assert_eq!(p.to_string(), "3/2*x1^2*x2 - y");
    }

    #[test]
    fn repeated_terms_normalize() {
        let r = ring();
        assert_eq!(
            parse_polynomial("x1 + x1", &r).unwrap(),
            parse_polynomial("2*x1", &r).unwrap()
        );
    }

    #[test]
    fn unknown_variable_is_reported_with_position() {
        let r = Ring::new(["x1", "x2"]);
        match parse_polynomial("x1 + x3", &r) {
            Err(Error::UnknownVariable { name, position }) => {
                assert_eq!(name, "x3");
                assert_eq!(position, 5);
            }
            other => panic!("expected unknown-variable error, got {other:?}"),
        }
    }

    #[test]
    fn star_is_optional() {
        let r = ring();
        assert_eq!(
            parse_polynomial("3x1 x2", &r).unwrap(),
            parse_polynomial("3*x1*x2", &r).unwrap()
        );
    }

    #[test]
    fn leading_sign_and_spacing() {
        let r = ring();
        assert_eq!(
            parse_polynomial("-x1+ 2", &r).unwrap(),
            parse_polynomial("2 - x1", &r).unwrap()
        );
    }

    #[test]
    fn repeated_variable_factors_accumulate() {
        let r = ring();
        assert_eq!(
            parse_polynomial("x1*x1^2", &r).unwrap(),
            parse_polynomial("x1^3", &r).unwrap()
        );
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let r = ring();
        assert!(matches!(
            parse_polynomial("", &r),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_polynomial("x1 +", &r),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_polynomial("x1 * + x2", &r),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_polynomial("1/0", &r),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_polynomial("x1 ^", &r),
            Err(Error::Syntax { .. })
        ));
    }

    #[test]
    fn zero_prints_and_reparses() {
        let r = ring();
        let z = parse_polynomial("x1 - x1", &r).unwrap();
        assert!(z.is_zero());
        assert_eq!(parse_polynomial(&z.to_string(), &r).unwrap(), z);
    }

    #[test]
    fn rationals_parse_standalone() {
        assert_eq!(parse_rational("-3/4").unwrap(), rat(-3, 4));
        assert_eq!(parse_rational(" 7 ").unwrap(), rat(7, 1));
        assert!(parse_rational("3/").is_err());
        assert!(parse_rational("a").is_err());
        assert!(parse_rational("1/2 x").is_err());
    }
}
