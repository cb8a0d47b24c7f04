use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::QuadReal;

/// `a + b·τ` in `Z[τ]`, where `τ = (√5 − 1)/2` and `τ² = 1 − τ`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GoldenElt {
    pub a: BigInt,
    pub b: BigInt,
}

impl GoldenElt {
    pub fn new(a: BigInt, b: BigInt) -> Self {
        GoldenElt { a, b }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        GoldenElt::new(a.into(), b.into())
    }

    pub fn tau() -> Self {
        GoldenElt::from_ints(0, 1)
    }

    /// `τ^k` for any integer `k`, using `τ⁻¹ = 1 + τ`.
    pub fn tau_pow(k: i64) -> Self {
        let step = if k >= 0 {
            GoldenElt::tau()
        } else {
            GoldenElt::from_ints(1, 1)
        };
        let mut acc = GoldenElt::from_ints(1, 0);
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &step;
        }
        acc
    }

    /// The value `(2a − b + b√5) / 2`.
    pub fn to_quad(&self) -> QuadReal {
        QuadReal::new(
            BigInt::from(2) * &self.a - &self.b,
            self.b.clone(),
            BigInt::from(5),
            BigInt::from(2),
        )
        .expect("valid golden value")
    }

    /// Inverse of [`to_quad`](Self::to_quad) on `Z[τ]`; `None` outside the ring.
    pub fn from_quad(x: &QuadReal) -> Option<Self> {
        let five = BigInt::from(5);
        if !x.is_rational() && *x.radicand() != five {
            return None;
        }
        // 2x = p' + q'√5 with p' ≡ q' (mod 2).
        let two = BigInt::from(2);
        let (pp, qq) = if x.r().is_one() {
            (x.p() * &two, x.q() * &two)
        } else if *x.r() == two {
            (x.p().clone(), x.q().clone())
        } else {
            return None;
        };
        if !(&pp - &qq).is_even() {
            return None;
        }
        Some(GoldenElt::new((&pp + &qq) / &two, qq))
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Multiplication by `τ⁻¹ = 1 + τ`: `(a, b) ↦ (a + b, a)`.
    pub fn mul_tau_inv(&self) -> Self {
        GoldenElt::new(&self.a + &self.b, self.a.clone())
    }

    /// Multiplication by `τ`: `(a, b) ↦ (b, a − b)`.
    pub fn mul_tau(&self) -> Self {
        GoldenElt::new(self.b.clone(), &self.a - &self.b)
    }
}

impl Add for &GoldenElt {
    type Output = GoldenElt;
    fn add(self, o: &GoldenElt) -> GoldenElt {
        GoldenElt::new(&self.a + &o.a, &self.b + &o.b)
    }
}

impl Sub for &GoldenElt {
    type Output = GoldenElt;
    fn sub(self, o: &GoldenElt) -> GoldenElt {
        GoldenElt::new(&self.a - &o.a, &self.b - &o.b)
    }
}

impl Neg for &GoldenElt {
    type Output = GoldenElt;
    fn neg(self) -> GoldenElt {
        GoldenElt::new(-&self.a, -&self.b)
    }
}

impl Mul for &GoldenElt {
    type Output = GoldenElt;
    fn mul(self, o: &GoldenElt) -> GoldenElt {
        // τ² = 1 − τ
        let bb = &self.b * &o.b;
        GoldenElt::new(
            &self.a * &o.a + &bb,
            &self.a * &o.b + &self.b * &o.a - &bb,
        )
    }
}

impl fmt::Display for GoldenElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let op = if self.b.is_negative() { '-' } else { '+' };
        write!(f, "{}{op}{}*tau", self.a, self.b.abs())
    }
}

impl fmt::Debug for GoldenElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
