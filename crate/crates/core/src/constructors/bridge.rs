//! Gluing two Möbius pieces along an interval with breakpoints that are
//! transversal crossings.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::exactnum::{rational_between, ExtReal, QuadReal};
use crate::moebius::{aux_hyperbolic, Mob, MobClass};

/// Where two pieces meet inside an interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Crossing {
    /// The graphs cross; `u⁻¹w` is hyperbolic.
    Transversal(QuadReal),
    /// The graphs touch at a double root; `u⁻¹w` is parabolic.
    Tangent(QuadReal),
    /// No common point strictly inside.
    Disjoint,
}

/// Pieces on `[s, e]` with the breakpoints between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bridge {
    pub breaks: Vec<QuadReal>,
    pub pieces: Vec<Mob>,
}

fn strictly_inside(t: &QuadReal, s: &QuadReal, e: &QuadReal) -> bool {
    s < t && t < e
}

/// All transversal crossings of `u` and `w` strictly inside `(s, e)`.
pub(crate) fn crossings(u: &Mob, w: &Mob, s: &QuadReal, e: &QuadReal) -> Vec<QuadReal> {
    let m = u.inverse().compose(w);
    if m.classify() != MobClass::Hyperbolic {
        return Vec::new();
    }
    m.fixed_points().into_iter().filter(|t| strictly_inside(t, s, e)).collect()
}

pub fn transversal_crossing(u: &Mob, w: &Mob, s: &QuadReal, e: &QuadReal) -> Result<Crossing> {
    let m = u.inverse().compose(w);
    match m.classify() {
        MobClass::Identity => Err(Error::IdenticalPieces),
        MobClass::Hyperbolic => Ok(crossings(u, w, s, e)
            .into_iter()
            .next()
            .map_or(Crossing::Disjoint, Crossing::Transversal)),
        MobClass::Parabolic => Ok(m
            .fixed_points()
            .into_iter()
            .find(|t| strictly_inside(t, s, e))
            .map_or(Crossing::Disjoint, Crossing::Tangent)),
        MobClass::Elliptic => Ok(Crossing::Disjoint),
    }
}

pub(crate) fn pole_free(p: &Mob, lo: &QuadReal, hi: &QuadReal) -> bool {
    p.pole().is_none_or(|z| z < *lo || z > *hi)
}

/// `u` up to a crossing, then `w`.
fn direct(u: &Mob, w: &Mob, s: &QuadReal, e: &QuadReal) -> Option<Bridge> {
    crossings(u, w, s, e)
        .into_iter()
        .find(|p| pole_free(u, s, p) && pole_free(w, p, e))
        .map(|p| Bridge {
            breaks: vec![p],
            pieces: vec![u.clone(), w.clone()],
        })
}

/// Glue `u / v / w` where `v` runs from `−∞` at its pole `d` upwards.
fn through(u: &Mob, v: &Mob, w: &Mob, s: &QuadReal, e: &QuadReal, d: &QuadReal) -> Option<Bridge> {
    let ps = crossings(u, v, d, e);
    let qs = crossings(v, w, d, e);
    for p in &ps {
        for q in &qs {
            if p < q && pole_free(u, s, p) && pole_free(v, p, q) && pole_free(w, q, e) {
                return Some(Bridge {
                    breaks: vec![p.clone(), q.clone()],
                    pieces: vec![u.clone(), v.clone(), w.clone()],
                });
            }
        }
    }
    None
}

fn upper_value(u: &Mob, w: &Mob, e: &QuadReal) -> Option<QuadReal> {
    match (u.apply(e), w.apply(e)) {
        (ExtReal::Finite(a), ExtReal::Finite(b)) => Some(a.max(b)),
        _ => None,
    }
}

/// A unimodular `V` with pole `d = P/Q`, `V(t) = k − 1/(Q²(t − d))` up to
/// a rational shift, and `V(e)` above `bound`.
pub(crate) fn anchored_piece(d: &QuadReal, e: &QuadReal, bound: &QuadReal) -> Mob {
    let (p, q) = (d.p().clone(), d.r().clone());
    let g = p.extended_gcd(&q);
    debug_assert!(g.gcd.is_one());
    let (a, b) = (-g.x, -g.y);
    let base = Mob::new(a, b, q, -p).expect("determinant one");
    let at_e = base.at(e);
    let k = (bound - &at_e).floor() + BigInt::one();
    let k = if k.is_negative() { BigInt::from(0) } else { k };
    Mob::translation(&k).compose(&base)
}

/// Equal to `u` near `s` and `w` near `e`, all junctions transversal: the
/// single crossing when there is one, else `u / V / w` with
/// `V = aux_hyperbolic(d, ·)` anchored at the integer `d ∈ (s, e)`.
pub fn bridge_pz(u: &Mob, w: &Mob, s: &QuadReal, e: &QuadReal) -> Result<Bridge> {
    if u == w {
        return Ok(Bridge {
            breaks: Vec::new(),
            pieces: vec![u.clone()],
        });
    }
    if let Some(b) = direct(u, w, s, e) {
        return Ok(b);
    }
    let d = s.floor() + BigInt::one();
    let dq = QuadReal::from_int(d.clone());
    if s.is_integer() || dq >= *e {
        return Err(Error::NoAnchor(s.to_string(), e.to_string()));
    }
    let top = upper_value(u, w, e).ok_or_else(|| Error::BridgeFail(format!("a piece has its pole at {e}")))?;
    let lift = (e - &dq).recip()?;
    let v = aux_hyperbolic(&d, &(&top + &lift));
    through(u, &v, w, s, e, &dq).ok_or_else(|| Error::BridgeFail(format!("no ordered crossings for {u} / {v} / {w}")))
}

/// `bridge_pz`, then auxiliary pieces anchored at rational points of
/// `(s, e)` when no integer anchor works.
pub fn bridge_any(u: &Mob, w: &Mob, s: &QuadReal, e: &QuadReal) -> Result<Bridge> {
    let first = match bridge_pz(u, w, s, e) {
        Ok(b) => return Ok(b),
        Err(err) => err,
    };
    let Some(top) = upper_value(u, w, e) else {
        return Err(first);
    };
    let (sx, ex) = (ExtReal::Finite(s.clone()), ExtReal::Finite(e.clone()));
    let mid = rational_between(&sx, &ex);
    let mut anchors = vec![mid.clone()];
    anchors.push(rational_between(&sx, &ExtReal::Finite(mid.clone())));
    anchors.push(rational_between(&ExtReal::Finite(mid), &ex));
    for d in anchors {
        let v = anchored_piece(&d, e, &top);
        if let Some(b) = through(u, &v, w, s, e, &d) {
            return Ok(b);
        }
    }
    Err(first)
}
