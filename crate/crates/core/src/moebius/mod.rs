//! Integer Möbius matrices acting on the extended real line.

mod cf;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{ExtReal, QuadReal};

pub use cf::{aux_hyperbolic, cf_expand, cf_value, is_in_pz, pz_witness, stabilizer_generator, CfExpansion};

/// `t ↦ (a t + b) / (c t + d)` with integer entries, `ad − bc > 0`.
///
/// Canonical: `gcd(a, b, c, d) = 1` and the first nonzero of `(a, c)` is
/// positive, so equal maps have equal matrices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mob {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MobClass {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
}

impl Mob {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self> {
        if !(&a * &d - &b * &c).is_positive() {
            return Err(Error::NonPositiveDet);
        }
        Ok(Self::canonical(a, b, c, d))
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mob::new(a.into(), b.into(), c.into(), d.into()).expect("positive determinant")
    }

    /// Clears a matrix with rational entries to primitive integer form.
    pub fn from_rational(entries: [&QuadReal; 4]) -> Result<Self> {
        let mut den = BigInt::one();
        for e in entries {
            if !e.is_rational() {
                return Err(Error::Usage(format!("matrix entry {e} is not rational")));
            }
            den = den.lcm(e.r());
        }
        let [a, b, c, d] = entries.map(|e| e.p() * (&den / e.r()));
        Mob::new(a, b, c, d)
    }

    fn canonical(mut a: BigInt, mut b: BigInt, mut c: BigInt, mut d: BigInt) -> Self {
        let g = a.gcd(&b).gcd(&c).gcd(&d);
        if !g.is_one() {
            a /= &g;
            b /= &g;
            c /= &g;
            d /= &g;
        }
        if a.is_negative() || (a.is_zero() && c.is_negative()) {
            a = -a;
            b = -b;
            c = -c;
            d = -d;
        }
        Mob { a, b, c, d }
    }

    pub fn identity() -> Self {
        Mob::from_ints(1, 0, 0, 1)
    }

    /// `t ↦ t + k`.
    pub fn translation(k: &BigInt) -> Self {
        Mob {
            a: BigInt::one(),
            b: k.clone(),
            c: BigInt::zero(),
            d: BigInt::one(),
        }
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    pub fn is_identity(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a == self.d
    }

    /// In `PSL(2, Z)`: the primitive matrix has determinant one.
    pub fn is_unimodular(&self) -> bool {
        self.det().is_one()
    }

    pub fn fixes_infinity(&self) -> bool {
        self.c.is_zero()
    }

    /// The finite point sent to `∞`, if any.
    pub fn pole(&self) -> Option<QuadReal> {
        if self.c.is_zero() {
            None
        } else {
            Some(QuadReal::ratio(-&self.d, self.c.clone()))
        }
    }

    /// Slope `a/d` of an affine map.
    pub fn affine_slope(&self) -> Option<QuadReal> {
        self.c
            .is_zero()
            .then(|| QuadReal::ratio(self.a.clone(), self.d.clone()))
    }

    /// Offset `b/d` of an affine map.
    pub fn affine_offset(&self) -> Option<QuadReal> {
        self.c
            .is_zero()
            .then(|| QuadReal::ratio(self.b.clone(), self.d.clone()))
    }

    pub fn apply(&self, t: &QuadReal) -> ExtReal {
        let den = t.scale(&self.c).add_int(&self.d);
        if den.is_zero() {
            return ExtReal::PosInf;
        }
        let num = t.scale(&self.a).add_int(&self.b);
        ExtReal::Finite(num / den)
    }

    /// Action on `R ∪ {∞}`; `±∞` are the same projective point.
    pub fn apply_ext(&self, t: &ExtReal) -> ExtReal {
        match t {
            ExtReal::Finite(x) => self.apply(x),
            _ if self.c.is_zero() => {
                // Affine maps with positive determinant fix each end.
                t.clone()
            }
            _ => ExtReal::Finite(QuadReal::ratio(self.a.clone(), self.c.clone())),
        }
    }

    /// Finite value of `self` at `t`; panics at the pole.
    pub fn at(&self, t: &QuadReal) -> QuadReal {
        match self.apply(t) {
            ExtReal::Finite(v) => v,
            _ => panic!("{self} evaluated at its pole {t}"),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, o: &Mob) -> Mob {
        Self::canonical(
            &self.a * &o.a + &self.b * &o.c,
            &self.a * &o.b + &self.b * &o.d,
            &self.c * &o.a + &self.d * &o.c,
            &self.c * &o.b + &self.d * &o.d,
        )
    }

    pub fn inverse(&self) -> Mob {
        Self::canonical(self.d.clone(), -&self.b, -&self.c, self.a.clone())
    }

    pub fn pow(&self, k: i64) -> Mob {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = Mob::identity();
        let mut sq = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&sq);
            }
            sq = sq.compose(&sq);
            e >>= 1;
        }
        acc
    }

    /// Classification by `trace²` against `4·det`.
    pub fn classify(&self) -> MobClass {
        if self.is_identity() {
            return MobClass::Identity;
        }
        let t = self.trace();
        let lhs = &t * &t;
        let rhs = BigInt::from(4) * self.det();
        match lhs.cmp(&rhs) {
            std::cmp::Ordering::Greater => MobClass::Hyperbolic,
            std::cmp::Ordering::Equal => MobClass::Parabolic,
            std::cmp::Ordering::Less => MobClass::Elliptic,
        }
    }

    /// Finite real fixed points, ascending: roots of `c t² + (d − a) t − b`.
    /// Empty for the identity.
    pub fn fixed_points(&self) -> Vec<QuadReal> {
        if self.is_identity() {
            return Vec::new();
        }
        QuadReal::quadratic_roots(&self.c, &(&self.d - &self.a), &-&self.b)
    }

    pub fn parse(text: &str) -> Result<Mob> {
        let bad = || Error::Parse {
            line: 1,
            msg: format!("expected [[a,b],[c,d]], got {text:?}"),
        };
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = cleaned
            .strip_prefix("[[")
            .and_then(|s| s.strip_suffix("]]"))
            .ok_or_else(bad)?;
        let (row1, row2) = inner.split_once("],[").ok_or_else(bad)?;
        let mut nums = Vec::with_capacity(4);
        for part in row1.split(',').chain(row2.split(',')) {
            nums.push(part.parse::<BigInt>().map_err(|_| bad())?);
        }
        let [a, b, c, d]: [BigInt; 4] = nums.try_into().map_err(|_| bad())?;
        Mob::new(a, b, c, d)
    }
}

impl fmt::Display for Mob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Debug for Mob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
