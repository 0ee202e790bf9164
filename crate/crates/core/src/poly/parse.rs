//! Recursive-descent parser for the polynomial text grammar:
//!
//! ```text
//! expr   := sign? term (('+'|'-') term)*
//! term   := coeff ('*' factor)* | factor ('*' factor)*
//! factor := var ('^' uint)?
//! coeff  := int | int '/' uint
//! ```
//!
//! Whitespace between tokens is ignored. A leading sign is accepted so that
//! printed canonical forms with a negative leading coefficient parse back.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Monomial, Polynomial, Rational};
use crate::error::{Error, Result};
use crate::poly::polynomial::validate_variables;

pub fn parse_poly(text: &str, variables: &[String]) -> Result<Polynomial> {
    validate_variables(variables)?;
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
        vars: variables,
    };
    let p = parser.expr()?;
    parser.skip_ws();
    if parser.pos != parser.src.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(p)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [String],
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Syntax {
            position: self.pos,
            message: message.to_string(),
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut out = Polynomial::zero(self.vars);
        let mut negative = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            None => return Err(self.error("empty expression")),
            _ => false,
        };
        loop {
            let (m, mut c) = self.term()?;
            if negative {
                c = -c;
            }
            out.add_term(m, c);
            match self.peek() {
                Some(b'+') => negative = false,
                Some(b'-') => negative = true,
                _ => break,
            }
            self.pos += 1;
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(Monomial, Rational)> {
        let mut exps = vec![0u32; self.vars.len()];
        let coeff = match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let c = self.coeff()?;
                if !self.eat(b'*') {
                    return Ok((Monomial::from_exponents(exps), c));
                }
                c
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => Rational::one(),
            Some(_) => return Err(self.error("expected a coefficient or variable")),
            None => return Err(self.error("unexpected end of input")),
        };
        loop {
            self.factor(&mut exps)?;
            if !self.eat(b'*') {
                break;
            }
        }
        Ok((Monomial::from_exponents(exps), coeff))
    }

    fn factor(&mut self, exps: &mut [u32]) -> Result<()> {
        self.skip_ws();
        let start = self.pos;
        match self.src.get(self.pos) {
            Some(c) if c.is_ascii_alphabetic() || *c == b'_' => {}
            Some(_) => return Err(self.error("expected a variable")),
            None => return Err(self.error("unexpected end of input")),
        }
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
        let index =
            self.vars
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| Error::UnknownVariable {
                    name: name.to_string(),
                })?;
        let e = if self.eat(b'^') {
            let digits = self.digits()?;
            digits.parse::<u32>().map_err(|_| Error::Syntax {
                position: start,
                message: "exponent too large".into(),
            })?
        } else {
            1
        };
        exps[index] += e;
        Ok(())
    }

    fn digits(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an unsigned integer"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn coeff(&mut self) -> Result<Rational> {
        let num: BigInt = self.digits()?.parse().expect("digit string");
        if self.eat(b'/') {
            let at = self.pos;
            let den: BigInt = self.digits()?.parse().expect("digit string");
            if den.is_zero() {
                return Err(Error::Syntax {
                    position: at,
                    message: "zero denominator".into(),
                });
            }
            Ok(Rational::new(num, den))
        } else {
            Ok(Rational::from_integer(num))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn cusp() {
        let p = parse_poly("x^3 - y^2", &vars(&["x", "y"])).unwrap();
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.to_string(), "x^3 - y^2");
    }

    #[test]
    fn zero_polynomial() {
        let p = parse_poly("0", &vars(&["x"])).unwrap();
        assert!(p.is_zero());
        assert_eq!(p.to_string(), "0");
    }

    #[test]
    fn like_terms_merge() {
        let p = parse_poly("2*x*y + x*y", &vars(&["x", "y"])).unwrap();
        assert_eq!(p.num_terms(), 1);
        assert_eq!(p.to_string(), "3*x*y");
    }

    #[test]
    fn rational_coefficients_and_whitespace() {
        let p = parse_poly(" 3 / 4 * x ^ 2 - 1/2", &vars(&["x"])).unwrap();
        assert_eq!(p.to_string(), "3/4*x^2 - 1/2");
    }

    #[test]
    fn repeated_factor_accumulates() {
        let p = parse_poly("x*x*y", &vars(&["x", "y"])).unwrap();
        assert_eq!(p.to_string(), "x^2*y");
    }

    #[test]
    fn errors() {
        let v = vars(&["x", "y"]);
        assert!(
            matches!(parse_poly("x + w", &v), Err(Error::UnknownVariable { name }) if name == "w")
        );
        assert!(matches!(
            parse_poly("x +", &v),
            Err(Error::Syntax { position: 3, .. })
        ));
        assert!(matches!(parse_poly("x*2", &v), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("1/0*x", &v), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("x^", &v), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("", &v), Err(Error::Syntax { .. })));
        assert!(matches!(
            parse_poly("x)", &v),
            Err(Error::Syntax { position: 1, .. })
        ));
        assert!(matches!(
            parse_poly("x", &vars(&["x", "x"])),
            Err(Error::InvalidVariables(_))
        ));
    }

    #[test]
    fn leading_minus() {
        let p = parse_poly("-x + 1", &vars(&["x"])).unwrap();
        assert_eq!(p.to_string(), "-x + 1");
    }
}
