use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_prime::nt_funcs::factorize;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::NumError;

/// An exact real number `(p + q·√d) / r` in canonical form.
///
/// Canonical means: `d` is squarefree (or zero for rationals), `q = 0`
/// exactly when `d = 0`, `r > 0` and `gcd(p, q, r) = 1`. Two values are
/// equal iff their canonical fields are equal, so the derived `Eq` and
/// `Hash` are value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadReal {
    p: BigInt,
    q: BigInt,
    d: BigInt,
    r: BigInt,
}

/// Binary operations accepted by [`QuadReal::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Floor of the integer square root.
pub fn isqrt(n: &BigInt) -> BigInt {
    debug_assert!(!n.is_negative());
    n.sqrt()
}

/// Returns `Some(s)` when `n = s²`.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = isqrt(n);
    if &s * &s == *n {
        Some(s)
    } else {
        None
    }
}

/// Splits `n > 0` as `s² · m` with `m` squarefree; returns `(s, m)`.
pub fn squarefree_split(n: &BigInt) -> (BigInt, BigInt) {
    debug_assert!(n.is_positive());
    let mut square = BigUint::one();
    let mut kernel = BigUint::one();
    for (p, e) in factorize(n.magnitude().clone()) {
        square *= p.pow((e / 2) as u32);
        if e % 2 == 1 {
            kernel *= p;
        }
    }
    (BigInt::from(square), BigInt::from(kernel))
}

fn sign_i(x: &BigInt) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Sign of `a + b·√m` for `m ≥ 0`, by one squaring.
fn sign_surd(a: &BigInt, b: &BigInt, m: &BigInt) -> i8 {
    let sa = sign_i(a);
    let sb = if m.is_zero() { 0 } else { sign_i(b) };
    if sb == 0 {
        return sa;
    }
    if sa == 0 || sa == sb {
        return sb;
    }
    let lhs = a * a;
    let rhs = b * b * m;
    match lhs.cmp(&rhs) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => 0,
    }
}

fn to_ord(s: i8) -> Ordering {
    s.cmp(&0)
}

impl QuadReal {
    /// Canonicalizes `(p + q·√d) / r`.
    pub fn new(p: BigInt, q: BigInt, d: BigInt, r: BigInt) -> Result<Self, NumError> {
        if r.is_zero() {
            return Err(NumError::InvalidDenominator);
        }
        if d.is_negative() {
            return Err(NumError::NotReal);
        }
        if q.is_zero() || d.is_zero() {
            return Ok(Self::reduce(p, BigInt::zero(), BigInt::zero(), r));
        }
        let (s, m) = squarefree_split(&d);
        let q = q * s;
        if m.is_one() {
            Ok(Self::reduce(p + q, BigInt::zero(), BigInt::zero(), r))
        } else {
            Ok(Self::reduce(p, q, m, r))
        }
    }

    /// Convenience constructor from machine integers; panics on invalid input.
    pub fn from_parts(p: i64, q: i64, d: i64, r: i64) -> Self {
        Self::new(p.into(), q.into(), d.into(), r.into()).expect("valid quadratic literal")
    }

    /// Canonicalizes assuming `d` is already squarefree (or zero) and `r ≠ 0`.
    pub(crate) fn reduce(mut p: BigInt, mut q: BigInt, mut d: BigInt, mut r: BigInt) -> Self {
        if q.is_zero() || d.is_zero() {
            q = BigInt::zero();
            d = BigInt::zero();
        }
        if r.is_negative() {
            p = -p;
            q = -q;
            r = -r;
        }
        let g = p.gcd(&q).gcd(&r);
        if !g.is_one() && !g.is_zero() {
            p /= &g;
            q /= &g;
            r /= &g;
        }
        QuadReal { p, q, d, r }
    }

    pub fn from_int<T: Into<BigInt>>(n: T) -> Self {
        QuadReal {
            p: n.into(),
            q: BigInt::zero(),
            d: BigInt::zero(),
            r: BigInt::one(),
        }
    }

    /// The rational `num / den`; panics when `den = 0`.
    pub fn ratio<T: Into<BigInt>, U: Into<BigInt>>(num: T, den: U) -> Self {
        let den = den.into();
        assert!(!den.is_zero(), "zero denominator");
        Self::reduce(num.into(), BigInt::zero(), BigInt::zero(), den)
    }

    /// `√n` for a nonnegative integer `n`.
    pub fn sqrt_of<T: Into<BigInt>>(n: T) -> Result<Self, NumError> {
        Self::new(BigInt::zero(), BigInt::one(), n.into(), BigInt::one())
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }
    pub fn q(&self) -> &BigInt {
        &self.q
    }
    /// Squarefree radicand; `0` for rationals.
    pub fn radicand(&self) -> &BigInt {
        &self.d
    }
    pub fn r(&self) -> &BigInt {
        &self.r
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.q.is_zero() && self.r.is_one()
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.q.is_zero() && self.p.is_one() && self.r.is_one()
    }

    /// Integer value, when this is an integer.
    pub fn to_integer(&self) -> Option<BigInt> {
        if self.is_integer() {
            Some(self.p.clone())
        } else {
            None
        }
    }

    /// Galois conjugate `(p − q√d) / r`.
    pub fn conj(&self) -> Self {
        QuadReal {
            p: self.p.clone(),
            q: -&self.q,
            d: self.d.clone(),
            r: self.r.clone(),
        }
    }

    /// The common field radicand of two values, if they share a field.
    pub fn common_radicand(&self, other: &Self) -> Result<BigInt, NumError> {
        if self.d.is_zero() {
            Ok(other.d.clone())
        } else if other.d.is_zero() || self.d == other.d {
            Ok(self.d.clone())
        } else {
            Err(NumError::FieldMismatch {
                left: self.d.clone(),
                right: other.d.clone(),
            })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, NumError> {
        let d = self.common_radicand(other)?;
        Ok(Self::reduce(
            &self.p * &other.r + &other.p * &self.r,
            &self.q * &other.r + &other.q * &self.r,
            d,
            &self.r * &other.r,
        ))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, NumError> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, NumError> {
        let d = self.common_radicand(other)?;
        let p = &self.p * &other.p + &self.q * &other.q * &d;
        let q = &self.p * &other.q + &self.q * &other.p;
        Ok(Self::reduce(p, q, d, &self.r * &other.r))
    }

    pub fn recip(&self) -> Result<Self, NumError> {
        if self.is_zero() {
            return Err(NumError::DivByZero);
        }
        // r / (p + q√d) = r (p − q√d) / (p² − q² d)
        let norm = &self.p * &self.p - &self.q * &self.q * &self.d;
        Ok(Self::reduce(
            &self.r * &self.p,
            -(&self.r * &self.q),
            self.d.clone(),
            norm,
        ))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, NumError> {
        self.common_radicand(other)?;
        self.try_mul(&other.recip()?)
    }

    /// Exact arithmetic with field checking.
    pub fn arith(&self, other: &Self, op: ArithOp) -> Result<Self, NumError> {
        match op {
            ArithOp::Add => self.try_add(other),
            ArithOp::Sub => self.try_sub(other),
            ArithOp::Mul => self.try_mul(other),
            ArithOp::Div => self.try_div(other),
        }
    }

    /// Multiplies by an integer.
    pub fn scale(&self, k: &BigInt) -> Self {
        Self::reduce(&self.p * k, &self.q * k, self.d.clone(), self.r.clone())
    }

    pub fn add_int(&self, k: &BigInt) -> Self {
        Self::reduce(
            &self.p + k * &self.r,
            self.q.clone(),
            self.d.clone(),
            self.r.clone(),
        )
    }

    pub fn signum(&self) -> i8 {
        sign_surd(&self.p, &self.q, &self.d)
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    /// Exact total order, valid across distinct radicands.
    pub fn quad_cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        // Multiply the difference by r1·r2 > 0: A + B√m − C√n.
        let a = &self.p * &other.r - &other.p * &self.r;
        let b = &self.q * &other.r;
        let c = &other.q * &self.r;
        if self.d.is_zero() || other.d.is_zero() || self.d == other.d {
            let m = if self.d.is_zero() { &other.d } else { &self.d };
            return to_ord(sign_surd(&a, &(b - c), m));
        }
        let (m, n) = (&self.d, &other.d);
        let sx = sign_surd(&a, &b, m);
        let sy = -sign_i(&c);
        if sx == 0 {
            return to_ord(sy);
        }
        if sy == 0 || sx == sy {
            return to_ord(sx);
        }
        // |X| vs |Y| via X² − Y² = (A² + B²m − C²n) + 2AB√m.
        let rat = &a * &a + &b * &b * m - &c * &c * n;
        let irr = BigInt::from(2) * &a * &b;
        match sign_surd(&rat, &irr, m) {
            s if s > 0 => to_ord(sx),
            s if s < 0 => to_ord(sy),
            _ => Ordering::Equal,
        }
    }

    /// The unique integer `n` with `n ≤ self < n + 1`.
    pub fn floor(&self) -> BigInt {
        if self.q.is_zero() {
            return self.p.div_floor(&self.r);
        }
        // q√d is irrational; bracket it between consecutive integers.
        let s = isqrt(&(&self.q * &self.q * &self.d));
        let lo = if self.q.is_positive() {
            s
        } else {
            -(s + BigInt::one())
        };
        (&self.p + lo).div_floor(&self.r)
    }

    /// `self − floor(self)`, in `[0, 1)`.
    pub fn frac(&self) -> Self {
        self.add_int(&-self.floor())
    }

    /// Nearest-double approximation, for diagnostics only.
    pub fn to_f64(&self) -> f64 {
        let p = self.p.to_f64().unwrap_or(f64::NAN);
        let q = self.q.to_f64().unwrap_or(f64::NAN);
        let d = self.d.to_f64().unwrap_or(f64::NAN);
        let r = self.r.to_f64().unwrap_or(f64::NAN);
        (p + q * d.sqrt()) / r
    }

    /// Roots of `a t² + b t + c = 0` with integer coefficients, ascending.
    ///
    /// Degenerate cases: a linear equation gives at most one root and the
    /// zero polynomial gives none.
    pub fn quadratic_roots(a: &BigInt, b: &BigInt, c: &BigInt) -> Vec<QuadReal> {
        if a.is_zero() {
            if b.is_zero() {
                return Vec::new();
            }
            return vec![Self::reduce(-c, BigInt::zero(), BigInt::zero(), b.clone())];
        }
        // Same roots with a small discriminant, so the squarefree split stays cheap.
        let g = a.gcd(b).gcd(c);
        let (a, b, c) = (&(a / &g), &(b / &g), &(c / &g));
        let disc = b * b - BigInt::from(4) * a * c;
        if disc.is_negative() {
            return Vec::new();
        }
        let two_a = BigInt::from(2) * a;
        if disc.is_zero() {
            return vec![Self::reduce(-b, BigInt::zero(), BigInt::zero(), two_a)];
        }
        let x1 = Self::new(-b, BigInt::one(), disc.clone(), two_a.clone())
            .expect("nonzero denominator");
        let x2 = Self::new(-b, -BigInt::one(), disc, two_a).expect("nonzero denominator");
        let mut v = vec![x1, x2];
        v.sort();
        v
    }
}

impl PartialOrd for QuadReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadReal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.quad_cmp(other)
    }
}

impl Neg for &QuadReal {
    type Output = QuadReal;
    fn neg(self) -> QuadReal {
        QuadReal {
            p: -&self.p,
            q: -&self.q,
            d: self.d.clone(),
            r: self.r.clone(),
        }
    }
}

impl Neg for QuadReal {
    type Output = QuadReal;
    fn neg(self) -> QuadReal {
        -&self
    }
}

// Operator forms panic on field mismatch or division by zero, like integer
// division by zero; the calculus only combines values of one field.
macro_rules! forward_op {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&QuadReal> for &QuadReal {
            type Output = QuadReal;
            fn $method(self, rhs: &QuadReal) -> QuadReal {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait<QuadReal> for QuadReal {
            type Output = QuadReal;
            fn $method(self, rhs: QuadReal) -> QuadReal {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&QuadReal> for QuadReal {
            type Output = QuadReal;
            fn $method(self, rhs: &QuadReal) -> QuadReal {
                (&self).$method(rhs)
            }
        }
    };
}

forward_op!(Add, add, try_add);
forward_op!(Sub, sub, try_sub);
forward_op!(Mul, mul, try_mul);
forward_op!(Div, div, try_div);

impl From<i64> for QuadReal {
    fn from(n: i64) -> Self {
        QuadReal::from_int(n)
    }
}

impl From<BigInt> for QuadReal {
    fn from(n: BigInt) -> Self {
        QuadReal::from_int(n)
    }
}

impl fmt::Display for QuadReal {
    /// Minimal canonical literal: `p`, `p/r`, `q*sqrt(d)`, `p+q*sqrt(d)`,
    /// with `(…)/r` or `…/r` when `r ≠ 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            return if self.r.is_one() {
                write!(f, "{}", self.p)
            } else {
                write!(f, "{}/{}", self.p, self.r)
            };
        }
        let surd = format!("{}*sqrt({})", self.q.abs(), self.d);
        let neg = self.q.is_negative();
        if self.p.is_zero() {
            let sign = if neg { "-" } else { "" };
            if self.r.is_one() {
                write!(f, "{sign}{surd}")
            } else {
                write!(f, "{sign}{surd}/{}", self.r)
            }
        } else {
            let op = if neg { '-' } else { '+' };
            if self.r.is_one() {
                write!(f, "{}{op}{surd}", self.p)
            } else {
                write!(f, "({}{op}{surd})/{}", self.p, self.r)
            }
        }
    }
}

impl fmt::Debug for QuadReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, q: i64, d: i64, r: i64) -> QuadReal {
        QuadReal::from_parts(p, q, d, r)
    }

    fn fields(x: &QuadReal) -> (BigInt, BigInt, BigInt, BigInt) {
        (x.p.clone(), x.q.clone(), x.d.clone(), x.r.clone())
    }

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(fields(&q(2, 2, 8, 4)), (b(1), b(2), b(2), b(2)));
        assert_eq!(fields(&q(3, 0, 7, 3)), (b(1), b(0), b(0), b(1)));
        assert_eq!(fields(&q(1, 1, 0, 1)), (b(1), b(0), b(0), b(1)));
        assert_eq!(fields(&q(1, 1, 9, -2)), (b(-2), b(0), b(0), b(1)));
        assert_eq!(
            QuadReal::new(b(1), b(1), b(2), b(0)),
            Err(NumError::InvalidDenominator)
        );
        assert_eq!(
            QuadReal::new(b(1), b(1), b(-2), b(1)),
            Err(NumError::NotReal)
        );
    }

    #[test]
    fn squarefree_split_large_cofactor() {
        // 1_000_003 is prime; its square must be detected past the cube-root sweep.
        let p = BigInt::from(1_000_003i64);
        let n = &p * &p * BigInt::from(6);
        assert_eq!(squarefree_split(&n), (p, b(6)));
        assert_eq!(squarefree_split(&b(72)), (b(6), b(2)));
    }

    #[test]
    fn arithmetic_examples() {
        let phi = q(1, 1, 5, 2);
        assert_eq!(&phi + &phi, q(1, 1, 5, 1));
        assert_eq!(&phi * &q(-1, 1, 5, 2), QuadReal::one());
        assert!(matches!(
            q(0, 1, 2, 1).arith(&q(0, 1, 3, 1), ArithOp::Add),
            Err(NumError::FieldMismatch { .. })
        ));
        assert_eq!(
            phi.arith(&QuadReal::zero(), ArithOp::Div),
            Err(NumError::DivByZero)
        );
        assert_eq!(&phi / &phi, QuadReal::one());
    }

    #[test]
    fn comparison_examples() {
        let phi = q(1, 1, 5, 2);
        assert_eq!(phi.quad_cmp(&phi.clone()), Ordering::Equal);
        assert_eq!(phi.quad_cmp(&q(0, 1, 2, 1)), Ordering::Greater);
        assert_eq!(q(0, 1, 3, 3).quad_cmp(&phi), Ordering::Less);
        // √2 + √3 vs √10: 5 + 2√6 < 10 ⇔ 2√6 < 5 ⇔ 24 < 25.
        let s = q(0, 1, 2, 1).to_f64() + q(0, 1, 3, 1).to_f64();
        assert!(s < 10f64.sqrt());
        assert!(q(0, 1, 6, 1) < q(5, 0, 0, 2));
    }

    #[test]
    fn floor_examples() {
        assert_eq!(q(1, 1, 5, 2).floor(), b(1));
        assert_eq!(q(0, -1, 2, 1).floor(), b(-2));
        assert_eq!(q(7, 0, 0, 2).floor(), b(3));
        assert_eq!(q(-7, 0, 0, 2).floor(), b(-4));
        assert_eq!(q(1, 1, 5, 2).frac(), q(-1, 1, 5, 2));
    }

    #[test]
    fn quadratic_roots_of_golden_polynomial() {
        let roots = QuadReal::quadratic_roots(&b(1), &b(-1), &b(-1));
        assert_eq!(roots, vec![q(1, -1, 5, 2), q(1, 1, 5, 2)]);
        assert_eq!(QuadReal::quadratic_roots(&b(1), &b(0), &b(0)), vec![q(0, 0, 0, 1)]);
        assert!(QuadReal::quadratic_roots(&b(1), &b(0), &b(1)).is_empty());
    }

    #[test]
    fn display_minimal_forms() {
        assert_eq!(q(1, 1, 5, 2).to_string(), "(1+1*sqrt(5))/2");
        assert_eq!(q(1, -1, 2, 1).to_string(), "1-1*sqrt(2)");
        assert_eq!(q(0, 1, 3, 3).to_string(), "1*sqrt(3)/3");
        assert_eq!(q(0, -1, 2, 1).to_string(), "-1*sqrt(2)");
        assert_eq!(q(-3, 0, 0, 4).to_string(), "-3/4");
    }
}
