//! Polynomial text grammar:
//!
//! ```text
//! expr  := term (('+'|'-') term)*
//! term  := [coeff] ('*'? var ('^' nat)?)*
//! coeff := integer | integer '/' integer
//! ```
//!
//! Whitespace is insignificant. A leading sign on the first term is accepted.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::poly::{Monomial, Poly, Scalar};
use crate::error::{Error, Result};

pub fn poly_parse(text: &str, names: &[String]) -> Result<Poly> {
    Parser { src: text.as_bytes(), pos: 0, names }.parse_expr()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    names: &'a [String],
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse { position: self.pos, message: message.into() }
    }

    fn parse_expr(&mut self) -> Result<Poly> {
        let nvars = self.names.len();
        let mut out = Poly::zero(nvars);
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1
            }
            Some(b'+') => {
                self.pos += 1;
                1
            }
            None => return Err(self.err("empty expression")),
            _ => 1,
        };
        loop {
            let (c, m) = self.parse_term()?;
            out.add_term(m, if sign < 0 { -c } else { c });
            match self.peek() {
                None => break,
                Some(b'+') => sign = 1,
                Some(b'-') => sign = -1,
                Some(ch) => return Err(self.err(format!("unexpected character `{}`", ch as char))),
            }
            self.pos += 1;
        }
        Ok(out)
    }

    fn parse_term(&mut self) -> Result<(Scalar, Monomial)> {
        let mut exps = vec![0u32; self.names.len()];
        let mut coeff = Scalar::one();
        let mut seen_any = false;
        if matches!(self.peek(), Some(b'0'..=b'9')) {
            coeff = self.parse_coeff()?;
            seen_any = true;
        }
        loop {
            let save = self.pos;
            let star = if self.peek() == Some(b'*') {
                self.pos += 1;
                true
            } else {
                false
            };
            match self.peek() {
                Some(ch) if ch.is_ascii_alphabetic() || ch == b'_' => {
                    let start = self.pos;
                    let name = self.parse_ident().to_string();
                    let idx = self
                        .names
                        .iter()
                        .position(|n| *n == name)
                        .ok_or(Error::UnknownVariable { name, position: start })?;
                    let mut e = 1u32;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        self.skip_ws();
                        e = self.parse_nat()?;
                    }
                    exps[idx] += e;
                    seen_any = true;
                }
                _ => {
                    if star {
                        return Err(self.err("expected a variable after `*`"));
                    }
                    self.pos = save;
                    break;
                }
            }
        }
        if !seen_any {
            return Err(self.err("expected a coefficient or a variable"));
        }
        Ok((coeff, Monomial::new(exps)))
    }

    fn parse_ident(&mut self) -> &str {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier")
    }

    fn parse_digits(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digit string"))
    }

    fn parse_nat(&mut self) -> Result<u32> {
        let start = self.pos;
        let n = self.parse_digits()?;
        u32::try_from(n).map_err(|_| Error::Parse { position: start, message: "exponent too large".into() })
    }

    fn parse_coeff(&mut self) -> Result<Scalar> {
        let num = self.parse_digits()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let den = self.parse_digits()?;
            if den.is_zero() {
                return Err(self.err("zero denominator"));
            }
            return Ok(Scalar::new(num, den));
        }
        Ok(Scalar::from_integer(num))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localalg::poly::{ratio, scalar};

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn single_term() {
        let p = poly_parse("x^5", &names(&["x", "y"])).unwrap();
        assert_eq!(p, Poly::monomial(Monomial::new(vec![5, 0])));
    }

    #[test]
    fn zero() {
        let p = poly_parse("0", &names(&["x", "y"])).unwrap();
        assert!(p.is_zero());
        assert_eq!(p.order(), None);
    }

    #[test]
    fn two_terms() {
        let p = poly_parse("x^3*y - 2*y^4", &names(&["x", "y"])).unwrap();
        let expected = Poly::from_terms(
            2,
            [(Monomial::new(vec![3, 1]), scalar(1)), (Monomial::new(vec![0, 4]), scalar(-2))],
        );
        assert_eq!(p, expected);
    }

    #[test]
    fn rationals_juxtaposition_and_signs() {
        let n = names(&["x", "y"]);
        let p = poly_parse(" -3/4 x y^2 + 2y", &n).unwrap();
        assert_eq!(p.coeff(&Monomial::new(vec![1, 2])), ratio(-3, 4));
        assert_eq!(p.coeff(&Monomial::new(vec![0, 1])), scalar(2));
        let q = poly_parse("x*x", &n).unwrap();
        assert_eq!(q, Poly::monomial(Monomial::new(vec![2, 0])));
    }

    #[test]
    fn errors_carry_positions() {
        let n = names(&["x", "y"]);
        match poly_parse("x + z", &n) {
            Err(Error::UnknownVariable { name, position }) => {
                assert_eq!(name, "z");
                assert_eq!(position, 4);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(poly_parse("x +", &n), Err(Error::Parse { .. })));
        assert!(matches!(poly_parse("x ^", &n), Err(Error::Parse { .. })));
        assert!(matches!(poly_parse("1/0", &n), Err(Error::Parse { .. })));
        assert!(matches!(poly_parse("x $ y", &n), Err(Error::Parse { position: 2, .. })));
    }

    #[test]
    fn display_reparses() {
        let n = names(&["x", "y"]);
        let p = poly_parse("1/2 - x^3*y + 7*y^4", &n).unwrap();
        let text = p.display(&n).to_string();
        assert_eq!(poly_parse(&text, &n).unwrap(), p);
    }
}
