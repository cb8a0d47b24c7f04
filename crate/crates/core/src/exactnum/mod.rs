//! Exact arithmetic: quadratic irrationals, the golden ring `Z[τ]`, and the
//! extended real line.

mod golden;
mod parse;
mod quad;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use thiserror::Error;

pub use golden::GoldenElt;
pub use parse::{parse_golden, parse_quad};
pub use quad::{exact_sqrt, isqrt, squarefree_split, ArithOp, QuadReal};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumError {
    #[error("denominator must be nonzero")]
    InvalidDenominator,
    #[error("negative radicand: value is not real")]
    NotReal,
    #[error("values lie in different quadratic fields (sqrt({left}) vs sqrt({right}))")]
    FieldMismatch { left: BigInt, right: BigInt },
    #[error("division by zero")]
    DivByZero,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// A point of `R ∪ {−∞, +∞}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum ExtReal {
    NegInf,
    Finite(QuadReal),
    PosInf,
}

impl ExtReal {
    pub fn finite(&self) -> Option<&QuadReal> {
        match self {
            ExtReal::Finite(x) => Some(x),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn int(n: i64) -> Self {
        ExtReal::Finite(QuadReal::from_int(n))
    }
}

impl From<QuadReal> for ExtReal {
    fn from(x: QuadReal) -> Self {
        ExtReal::Finite(x)
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        use ExtReal::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (_, NegInf) | (PosInf, _) => Ordering::Greater,
            (Finite(a), Finite(b)) => a.quad_cmp(b),
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::NegInf => write!(f, "-inf"),
            ExtReal::PosInf => write!(f, "inf"),
            ExtReal::Finite(x) => write!(f, "{x}"),
        }
    }
}

impl fmt::Debug for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub fn parse_ext(text: &str) -> Result<ExtReal, NumError> {
    match text.trim() {
        "-inf" => Ok(ExtReal::NegInf),
        "inf" | "+inf" => Ok(ExtReal::PosInf),
        s => parse_quad(s).map(ExtReal::Finite),
    }
}

/// The simplest rational strictly between `lo < hi` (smallest denominator,
/// found by simultaneous continued-fraction descent). Works across fields.
pub fn rational_between(lo: &ExtReal, hi: &ExtReal) -> QuadReal {
    assert!(lo < hi, "empty interval ({lo}, {hi})");
    match (lo, hi) {
        (ExtReal::NegInf, ExtReal::PosInf) => QuadReal::zero(),
        (ExtReal::NegInf, ExtReal::Finite(h)) => {
            let f = h.floor();
            if QuadReal::from_int(f.clone()) < *h {
                QuadReal::from_int(f)
            } else {
                QuadReal::from_int(f - 1)
            }
        }
        (ExtReal::Finite(l), ExtReal::PosInf) => QuadReal::from_int(l.floor() + 1),
        (ExtReal::Finite(l), ExtReal::Finite(h)) => simplest_between(l, h),
        _ => unreachable!("ordered interval"),
    }
}

fn simplest_between(lo: &QuadReal, hi: &QuadReal) -> QuadReal {
    let fl = lo.floor();
    let next = QuadReal::from_int(&fl + BigInt::one());
    if next < *hi {
        // Prefer zero, then the integer nearest to zero, when several fit.
        if lo.is_negative() && hi.is_positive() {
            return QuadReal::zero();
        }
        if hi.is_negative() || hi.is_zero() {
            let top = hi.floor();
            let top = if QuadReal::from_int(top.clone()) == *hi {
                top - 1
            } else {
                top
            };
            return QuadReal::from_int(top);
        }
        return next;
    }
    // lo, hi ⊂ [fl, fl + 1]; recurse on reciprocals of the fractional parts.
    let lo_f = lo.add_int(&-&fl);
    let hi_f = hi.add_int(&-&fl);
    let inner_hi = if lo_f.is_zero() {
        ExtReal::PosInf
    } else {
        ExtReal::Finite(lo_f.recip().expect("nonzero"))
    };
    let inner_lo = ExtReal::Finite(hi_f.recip().expect("nonzero"));
    let inner = rational_between(&inner_lo, &inner_hi);
    let frac = inner.recip().expect("inner value exceeds one");
    frac.add_int(&fl)
}

/// `n^k` as an exact rational for any integer `k`.
pub fn int_pow(n: &BigInt, k: i64) -> QuadReal {
    let mut acc = BigInt::one();
    for _ in 0..k.unsigned_abs() {
        acc *= n;
    }
    if k >= 0 {
        QuadReal::from_int(acc)
    } else {
        QuadReal::ratio(BigInt::one(), acc)
    }
}

/// `n^k / r` for the least `k` with `r | n^k`, when there is one.
pub fn n_adic_cofactor(r: &BigInt, n: &BigInt) -> Option<BigInt> {
    let mut rest = r.clone();
    let mut cof = BigInt::one();
    loop {
        let g = rest.gcd(n);
        if g.is_one() {
            return rest.is_one().then_some(cof);
        }
        rest /= &g;
        cof *= n / &g;
    }
}

/// Whether `x` is a rational whose reduced denominator divides a power of
/// `n`.
pub fn is_n_adic(x: &QuadReal, n: &BigInt) -> bool {
    x.is_rational() && n_adic_cofactor(x.r(), n).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> QuadReal {
        parse_quad(s).unwrap()
    }

    #[test]
    fn ext_order_extends_finite_order() {
        let a = ExtReal::Finite(q("1*sqrt(2)"));
        assert!(ExtReal::NegInf < a && a < ExtReal::PosInf);
        assert!(ExtReal::Finite(q("(1+1*sqrt(5))/2")) > a);
        assert_eq!(parse_ext("-inf").unwrap(), ExtReal::NegInf);
    }

    #[test]
    fn rational_between_cross_field() {
        let lo = ExtReal::Finite(q("1*sqrt(2)"));
        let hi = ExtReal::Finite(q("1*sqrt(3)"));
        assert_eq!(rational_between(&lo, &hi), q("3/2"));
        let lo = ExtReal::Finite(q("1*sqrt(2)"));
        let hi = ExtReal::Finite(q("3/2"));
        let r = rational_between(&lo, &hi);
        assert!(ExtReal::Finite(r.clone()) > lo && ExtReal::Finite(r.clone()) < hi);
        assert_eq!(r, q("10/7"));
        assert_eq!(
            rational_between(&ExtReal::Finite(q("-5/2")), &ExtReal::Finite(q("-1/3"))),
            q("-1")
        );
        assert_eq!(
            rational_between(&ExtReal::NegInf, &ExtReal::Finite(q("-2"))),
            q("-3")
        );
        assert_eq!(
            rational_between(&ExtReal::Finite(q("1-1*sqrt(2)")), &ExtReal::PosInf),
            q("0")
        );
    }

    #[test]
    fn n_adic_detection() {
        let two = BigInt::from(2);
        assert!(is_n_adic(&q("3/8"), &two));
        assert!(!is_n_adic(&q("1/3"), &two));
        assert!(is_n_adic(&q("5"), &two));
        assert_eq!(int_pow(&BigInt::from(3), -2), q("1/9"));
    }
}
