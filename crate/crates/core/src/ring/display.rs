//! Canonical text form: terms in descending graded-lex order, exact rational
//! coefficients, explicit exponents. The renderer and parser round-trip
//! exactly; the text form keys caches and appears in certificate details.

use super::{Ctx, QPoly, RingError};
use num::{BigInt, BigRational, One, Signed};
use std::fmt;

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let reg = self.ctx.registry();
        for (idx, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || m.is_one() {
                factors.push(rational_text(&mag));
            }
            for (v, e) in m.support() {
                if e == 1 {
                    factors.push(reg.name(v).to_string());
                } else {
                    factors.push(format!("{}^{}", reg.name(v), e));
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

fn rational_text(c: &BigRational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Parse the canonical text form back into a polynomial.
pub fn parse_poly(ctx: &Ctx, input: &str) -> Result<QPoly, RingError> {
    let mut p = Parser {
        chars: input.chars().collect(),
        pos: 0,
    };
    p.skip_ws();
    let mut out = QPoly::zero(ctx);
    let mut first = true;
    loop {
        p.skip_ws();
        if p.at_end() {
            if first {
                return Err(RingError::Parse("empty input".to_string()));
            }
            break;
        }
        let mut negative = false;
        if first {
            if p.eat('-') {
                negative = true;
            } else {
                let _ = p.eat('+');
            }
        } else if p.eat('+') {
        } else if p.eat('-') {
            negative = true;
        } else {
            return Err(p.err("expected + or - between terms"));
        }
        let term = p.parse_term(ctx)?;
        out = if negative {
            out.sub(&term)
        } else {
            out.add(&term)
        }
        .map_err(|e| RingError::Parse(e.to_string()))?;
        first = false;
    }
    Ok(out)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn err(&self, msg: &str) -> RingError {
        RingError::Parse(format!("{msg} at position {}", self.pos))
    }

    fn parse_term(&mut self, ctx: &Ctx) -> Result<QPoly, RingError> {
        self.skip_ws();
        let mut coef = BigRational::one();
        let mut acc = QPoly::one(ctx);
        let mut any = false;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    coef *= self.parse_rational()?;
                    any = true;
                }
                Some(c) if c.is_ascii_alphabetic() => {
                    let name = self.parse_name();
                    let var = ctx.var(&name)?;
                    let e = if self.eat('^') {
                        self.parse_signed_int()?
                    } else {
                        1
                    };
                    let f = QPoly::var_pow(ctx, var, e);
                    acc = acc.mul(&f).map_err(|e| RingError::Parse(e.to_string()))?;
                    any = true;
                }
                _ => break,
            }
            self.skip_ws();
            if !self.eat('*') {
                break;
            }
        }
        if !any {
            return Err(self.err("expected a term"));
        }
        Ok(acc.scale(&coef))
    }

    fn parse_name(&mut self) -> String {
        let mut s = String::new();
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric()) {
            s.push(self.chars[self.pos]);
            self.pos += 1;
        }
        s
    }

    fn parse_uint(&mut self) -> Result<BigInt, RingError> {
        let mut s = String::new();
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            s.push(self.chars[self.pos]);
            self.pos += 1;
        }
        if s.is_empty() {
            return Err(self.err("expected digits"));
        }
        Ok(s.parse().unwrap())
    }

    fn parse_signed_int(&mut self) -> Result<i32, RingError> {
        let neg = self.eat('-');
        let n = self.parse_uint()?;
        let v: i32 = n
            .to_string()
            .parse()
            .map_err(|_| self.err("exponent too large"))?;
        Ok(if neg { -v } else { v })
    }

    fn parse_rational(&mut self) -> Result<BigRational, RingError> {
        let numer = self.parse_uint()?;
        if self.eat('/') {
            let denom = self.parse_uint()?;
            Ok(BigRational::new(numer, denom))
        } else {
            Ok(BigRational::from_integer(numer))
        }
    }
}
