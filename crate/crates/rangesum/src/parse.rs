//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar:
//! ```text
//! expr    := term (("+"|"-") term)*
//! term    := factor (("*" | WS) factor)*
//! factor  := INT | "x" ("^" INT)? | "(" expr ")"
//! ```
//! Whitespace between two factors acts as multiplication, so `2 x*(x-1)`
//! parses as `2 * x * (x-1)`. Exponents at or above p are an error unless
//! `reduce_frobenius` is set, in which case they fold down along x^p = x.

use crate::fp::PrimeModulus;
use crate::poly::FpPoly;
use crate::Error;

pub fn parse_poly(text: &str, p: PrimeModulus, reduce_frobenius: bool) -> Result<FpPoly, Error> {
    let mut parser = Parser {
        bytes: text.as_bytes(),
        pos: 0,
        p,
        reduce_frobenius,
    };
    let poly = parser.expr()?;
    parser.skip_ws();
    if parser.pos != parser.bytes.len() {
        return Err(parser.syntax("unexpected trailing input"));
    }
    Ok(poly)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    p: PrimeModulus,
    reduce_frobenius: bool,
}

impl Parser<'_> {
    fn syntax(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ') | Some(b'\t')) {
            self.pos += 1;
        }
    }

    fn expr(&mut self) -> Result<FpPoly, Error> {
        self.skip_ws();
        // Leading minus is treated as a zero first term.
        let mut acc = if self.peek() == Some(b'-') {
            self.pos += 1;
            let t = self.term()?;
            FpPoly::zero(self.p).sub(&t)
        } else {
            self.term()?
        };
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.sub(&t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<FpPoly, Error> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = self.checked_mul(&acc, &f)?;
                }
                // juxtaposition (after whitespace or directly) multiplies
                Some(c) if c.is_ascii_digit() || c == b'x' || c == b'(' => {
                    let f = self.factor()?;
                    acc = self.checked_mul(&acc, &f)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<FpPoly, Error> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(FpPoly::constant(self.p, (n % self.p.get()) as i64))
            }
            Some(b'x') => {
                self.pos += 1;
                let exp = if self.peek() == Some(b'^') {
                    self.pos += 1;
                    self.skip_ws();
                    self.integer()?
                } else {
                    1
                };
                let exp = self.checked_exponent(exp)?;
                FpPoly::monomial(self.p, 1, exp)
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.skip_ws();
                if self.peek() != Some(b')') {
                    return Err(self.syntax("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(self.syntax("expected integer, 'x', or '('")),
        }
    }

    fn integer(&mut self) -> Result<u64, Error> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.syntax("expected integer"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Parse {
                pos: start,
                msg: "integer literal too large".to_string(),
            })
    }

    fn checked_exponent(&self, e: u64) -> Result<usize, Error> {
        let p = self.p.get();
        if e < p {
            Ok(e as usize)
        } else if self.reduce_frobenius {
            Ok(((e - 1) % (p - 1) + 1) as usize)
        } else {
            Err(Error::Parse {
                pos: self.pos,
                msg: format!("exponent {e} exceeds p-1 = {} (pass --reduce-frobenius to fold)", p - 1),
            })
        }
    }

    fn checked_mul(&self, a: &FpPoly, b: &FpPoly) -> Result<FpPoly, Error> {
        let prod = a.mul(b);
        match prod.degree() {
            Some(d) if d as u64 >= self.p.get() => {
                if self.reduce_frobenius {
                    Ok(prod.frobenius_reduce())
                } else {
                    Err(Error::Parse {
                        pos: self.pos,
                        msg: format!(
                            "product degree {d} exceeds p-1 = {} (pass --reduce-frobenius to fold)",
                            self.p.get() - 1
                        ),
                    })
                }
            }
            _ => Ok(prod),
        }
    }
}
