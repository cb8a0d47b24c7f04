//! Class-invariant maps and the monitoring calculus.
//!
//! Every search here iterates a map until a point enters an end zone. On
//! the real line the end zones of a `G₁` element are translations, so those
//! stretches are skipped in one step; the cap counts only genuine steps.

mod golden;
mod higman;
mod monitor;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exactnum::QuadReal;
use crate::piecewise::{Piece, PwMap};

pub use golden::{beta_tau, beta_tau_at, unique_rep, GoldenRep};
pub use higman::{beta_fn, beta_fn_at, fn_orbit_class, fn_same_orbit};
pub use monitor::{
    beta_hz, beta_hz_at, check_gi1, embed_information, gamma_hz, gamma_hz_at, information,
    monitoring_exponent, monitoring_exponent_capped, oriented_stabilizer, MonitorSpec,
};

/// Default bound on iteration steps.
pub const DEFAULT_CAP: u64 = 10_000;

/// The least integer `k` with `a − k ≤ b`; `a` and `b` may lie in
/// different quadratic fields.
pub(crate) fn ceil_diff(a: &QuadReal, b: &QuadReal) -> BigInt {
    let mut k: BigInt = a.floor() - b.floor();
    while a.add_int(&-&k) > *b {
        k += 1;
    }
    while a.add_int(&(BigInt::from(1) - &k)) <= *b {
        k -= 1;
    }
    k
}

fn is_unit_translation<P: Piece>(p: &P) -> bool {
    *p == P::translation(&BigInt::from(1))
}

/// Iterates `g` from `y` until the orbit reaches `target`; returns the first
/// orbit point `≥ target` and the number of applications.
pub(crate) fn orbit_until<P: Piece>(
    g: &PwMap<P>,
    mut y: QuadReal,
    target: &QuadReal,
    cap: u64,
) -> Result<(QuadReal, BigInt)> {
    let pieces = g.pieces();
    let left_t = is_unit_translation(&pieces[0]);
    let right_t = is_unit_translation(&pieces[pieces.len() - 1]);
    let (first, last) = (g.breaks().first(), g.breaks().last());
    let mut count = BigInt::from(0);
    let mut steps = 0u64;
    while y < *target {
        if steps >= cap {
            return Err(Error::IterationCap(cap));
        }
        steps += 1;
        let jump_to = match (first, last) {
            _ if left_t && right_t && first.is_none() => Some(target.clone()),
            (Some(f), _) if left_t && y < *f => Some(f.min(target).clone()),
            (_, Some(l)) if right_t && y >= *l => Some(target.clone()),
            _ => None,
        };
        match jump_to {
            Some(to) => {
                let k = ceil_diff(&to, &y);
                y = y.add_int(&k);
                count += k;
            }
            None => {
                y = g.at(&y);
                count += 1;
            }
        }
    }
    Ok((y, count))
}

/// `g^k(y)` for any integer `k`; forward runs skip `t + 1` zones.
pub(crate) fn orbit_point<P: Piece>(g: &PwMap<P>, y: &QuadReal, k: i64) -> QuadReal {
    let h = if k < 0 { g.invert() } else { g.clone() };
    let pieces = h.pieces();
    let left_t = is_unit_translation(&pieces[0]);
    let right_t = is_unit_translation(&pieces[pieces.len() - 1]);
    let (first, last) = (h.breaks().first(), h.breaks().last());
    let mut y = y.clone();
    let mut left = k.unsigned_abs();
    while left > 0 {
        let room = match (first, last) {
            _ if left_t && right_t && first.is_none() => Some(left),
            (Some(f), _) if left_t && y < *f => {
                let k = ceil_diff(f, &y);
                Some(u64::try_from(k).unwrap_or(u64::MAX).clamp(1, left))
            }
            (_, Some(l)) if right_t && y >= *l => Some(left),
            _ => None,
        };
        match room {
            Some(k) => {
                y = y.add_int(&BigInt::from(k));
                left -= k;
            }
            None => {
                y = h.at(&y);
                left -= 1;
            }
        }
    }
    y
}
