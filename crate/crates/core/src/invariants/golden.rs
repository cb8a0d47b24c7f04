use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;

use super::{orbit_point, orbit_until, DEFAULT_CAP};
use crate::error::{Error, Result};
use crate::exactnum::{GoldenElt, QuadReal};
use crate::piecewise::{Affine, GroupTag, PwMap};

/// `(a + bτ)τʲ` with `0 ≤ a < b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GoldenRep {
    pub j: i64,
    pub a: BigInt,
    pub b: BigInt,
}

impl GoldenRep {
    pub fn value(&self) -> GoldenElt {
        &GoldenElt::new(self.a.clone(), self.b.clone()) * &GoldenElt::tau_pow(self.j)
    }
}

impl fmt::Display for GoldenRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "j={} a={} b={}", self.j, self.a, self.b)
    }
}

fn nonneg(a: &BigInt, b: &BigInt) -> bool {
    !a.is_negative() && !b.is_negative()
}

/// Walks `(a, b) ↦ (a + b, a)` (one more factor of `τ`) until both
/// coordinates are nonnegative; the first such pair lies in `U`.
pub fn unique_rep(p: &GoldenElt) -> Result<GoldenRep> {
    let v = p.to_quad();
    if !v.is_positive() || v >= QuadReal::one() {
        return Err(Error::OutOfRange(p.to_string()));
    }
    let (mut a, mut b) = (p.a.clone(), p.b.clone());
    let mut j = 0i64;
    while !nonneg(&a, &b) {
        let next = &a + &b;
        b = std::mem::replace(&mut a, next);
        j += 1;
    }
    loop {
        let (pa, pb) = (b.clone(), &a - &b);
        if !nonneg(&pa, &pb) {
            break;
        }
        a = pa;
        b = pb;
        j -= 1;
    }
    let rep = GoldenRep { j, a, b };
    debug_assert!(rep.a < rep.b && rep.value() == *p, "{rep} does not represent {p}");
    Ok(rep)
}

fn require_f11(g: &PwMap<Affine>) -> Result<()> {
    if let Err(v) = g.is_member(GroupTag::Ftau) {
        return Err(Error::NotInFtau11(v.0));
    }
    if !g.in_f11(GroupTag::Ftau) {
        let ends = g.alpha_ends(GroupTag::Ftau)?;
        return Err(Error::NotInFtau11(format!("end exponents {ends:?}, or not above the identity")));
    }
    Ok(())
}

fn tau_q(l: i64) -> QuadReal {
    GoldenElt::tau_pow(l).to_quad()
}

fn rep_pair(y: &QuadReal) -> Result<(BigInt, BigInt)> {
    let rest = QuadReal::one() - y.clone();
    let g = GoldenElt::from_quad(&rest).ok_or_else(|| Error::NotInFtau11(format!("{rest} is not in Z[tau]")))?;
    let r = unique_rep(&g)?;
    Ok((r.a, r.b))
}

/// `β(g)`: the `U`-pair of `1 − gⁿ(τˡ)`, with `τˡ` the largest power of `τ`
/// in the left end zone and `n` the first step into the right end zone.
pub fn beta_tau(g: &PwMap<Affine>) -> Result<(BigInt, BigInt)> {
    require_f11(g)?;
    let first = &g.breaks()[0];
    let last = g.breaks().last().expect("nonempty");
    let mut l = 1i64;
    while tau_q(l) > *first {
        l += 1;
    }
    let (y, _) = orbit_until(g, tau_q(l), last, DEFAULT_CAP)?;
    rep_pair(&y)
}

/// `β(g)` from explicit choices `(l, n)`.
pub fn beta_tau_at(g: &PwMap<Affine>, l: i64, n: u64) -> Result<(BigInt, BigInt)> {
    require_f11(g)?;
    let start = tau_q(l);
    if start > g.breaks()[0] || start.is_zero() || l <= 0 {
        return Err(Error::NotMonitorable(format!("tau^{l} is not in the left end zone")));
    }
    let y = orbit_point(g, &start, n as i64);
    if y < *g.breaks().last().expect("nonempty") {
        return Err(Error::NotMonitorable(format!("g^{n}(tau^{l}) = {y} is not in the right end zone")));
    }
    rep_pair(&y)
}
