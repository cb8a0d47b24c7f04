//! Literal grammar for quadratic and golden numbers.
//!
//! Accepted quadratic forms (optional leading sign, optional parentheses):
//! `INT`, `INT/INT`, `INT*sqrt(INT)`, `INT+INT*sqrt(INT)`, any of those
//! followed by `/INT`, e.g. `(1+1*sqrt(5))/2`. Golden literals replace the
//! surd by `tau`: `-1+3*tau`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{GoldenElt, NumError, QuadReal};

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

enum Unit {
    Sqrt(BigInt),
    Tau,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Self {
        Cursor {
            src: s.as_bytes(),
            pos: 0,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, NumError> {
        Err(NumError::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
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

    fn expect(&mut self, c: u8) -> Result<(), NumError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(kw.as_bytes()) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn uint(&mut self) -> Result<BigInt, NumError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(text.parse::<BigInt>().expect("digit string"))
    }

    fn sign(&mut self) -> i32 {
        if self.eat(b'-') {
            -1
        } else {
            self.eat(b'+');
            1
        }
    }

    fn unit(&mut self, golden: bool) -> Result<Option<Unit>, NumError> {
        if golden {
            return Ok(if self.keyword("tau") {
                Some(Unit::Tau)
            } else {
                None
            });
        }
        if self.keyword("sqrt") {
            self.expect(b'(')?;
            let d = self.uint()?;
            self.expect(b')')?;
            return Ok(Some(Unit::Sqrt(d)));
        }
        Ok(None)
    }

    /// One signed term: `INT`, `INT*unit` or `unit`.
    fn term(
        &mut self,
        sign: i32,
        golden: bool,
        acc: &mut Acc,
    ) -> Result<(), NumError> {
        let coef;
        let unit;
        if let Some(u) = self.unit(golden)? {
            coef = BigInt::one();
            unit = Some(u);
        } else {
            coef = self.uint()?;
            unit = if self.eat(b'*') {
                match self.unit(golden)? {
                    Some(u) => Some(u),
                    None => return self.err(if golden { "expected 'tau'" } else { "expected 'sqrt('" }),
                }
            } else {
                None
            };
        }
        let coef = if sign < 0 { -coef } else { coef };
        match unit {
            None => acc.rational += coef,
            Some(Unit::Tau) => acc.surd += coef,
            Some(Unit::Sqrt(d)) => {
                if let Some(prev) = &acc.radicand {
                    if *prev != d {
                        return self.err("mixed radicands in one literal");
                    }
                }
                acc.radicand = Some(d);
                acc.surd += coef;
            }
        }
        Ok(())
    }

    fn sum(&mut self, golden: bool, acc: &mut Acc) -> Result<(), NumError> {
        let s = self.sign();
        self.term(s, golden, acc)?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    self.term(1, golden, acc)?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    self.term(-1, golden, acc)?;
                }
                _ => return Ok(()),
            }
        }
    }

    fn finish(&mut self) -> Result<(), NumError> {
        if self.peek().is_some() {
            return self.err("trailing input");
        }
        Ok(())
    }
}

#[derive(Default)]
struct Acc {
    rational: BigInt,
    surd: BigInt,
    radicand: Option<BigInt>,
}

pub fn parse_quad(text: &str) -> Result<QuadReal, NumError> {
    let mut c = Cursor::new(text);
    let mut acc = Acc::default();
    // A sign outside parentheses scales the whole literal; otherwise it
    // belongs to the first term.
    let save = c.pos;
    let mut outer = c.sign();
    if c.peek() != Some(b'(') {
        c.pos = save;
        outer = 1;
    }
    if c.eat(b'(') {
        c.sum(false, &mut acc)?;
        c.expect(b')')?;
    } else {
        c.sum(false, &mut acc)?;
    }
    let den = if c.eat(b'/') {
        let pos = c.pos;
        let den = c.uint()?;
        if den.is_zero() {
            return Err(NumError::Parse {
                pos,
                msg: "zero denominator".into(),
            });
        }
        den
    } else {
        BigInt::one()
    };
    c.finish()?;
    let d = acc.radicand.unwrap_or_else(BigInt::zero);
    let sign = BigInt::from(outer);
    QuadReal::new(acc.rational * &sign, acc.surd * &sign, d, den)
}

pub fn parse_golden(text: &str) -> Result<GoldenElt, NumError> {
    let mut c = Cursor::new(text);
    let mut acc = Acc::default();
    c.sum(true, &mut acc)?;
    c.finish()?;
    Ok(GoldenElt::new(acc.rational, acc.surd))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_literals_round_trip() {
        for s in [
            "(1+1*sqrt(5))/2",
            "3/4",
            "-7",
            "1-1*sqrt(2)",
            "1*sqrt(3)/3",
            "-1*sqrt(2)",
            "(-5+3*sqrt(5))/2",
            "-4+5*sqrt(10)",
        ] {
            assert_eq!(parse_quad(s).unwrap().to_string(), s);
        }
    }

    #[test]
    fn non_canonical_literals_reprint_canonically() {
        assert_eq!(
            parse_quad("(2+2*sqrt(8))/4").unwrap().to_string(),
            "(1+2*sqrt(2))/2"
        );
        assert_eq!(parse_quad("(0+1*sqrt(2))/1").unwrap().to_string(), "1*sqrt(2)");
        assert_eq!(parse_quad("sqrt(4)").unwrap().to_string(), "2");
        assert_eq!(parse_quad("6/4").unwrap().to_string(), "3/2");
    }

    #[test]
    fn parse_errors_carry_positions() {
        match parse_quad("(1+1*sqrt(5)/2") {
            Err(NumError::Parse { pos, .. }) => assert_eq!(pos, 12),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_quad("1/0"), Err(NumError::Parse { pos: 2, .. })));
        assert!(matches!(parse_quad("sqrt(2)+sqrt(3)"), Err(NumError::Parse { .. })));
        assert!(matches!(parse_quad("1 2"), Err(NumError::Parse { .. })));
        assert!(matches!(parse_quad(""), Err(NumError::Parse { pos: 0, .. })));
    }

    #[test]
    fn golden_literals() {
        assert_eq!(parse_golden("-1+3*tau").unwrap(), GoldenElt::from_ints(-1, 3));
        assert_eq!(parse_golden("tau").unwrap(), GoldenElt::from_ints(0, 1));
        assert_eq!(parse_golden("2").unwrap(), GoldenElt::from_ints(2, 0));
        assert_eq!(parse_golden("1-2*tau").unwrap(), GoldenElt::from_ints(1, -2));
    }
}
