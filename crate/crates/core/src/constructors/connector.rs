//! Connectors with prescribed `β`, end-offset elements and `G(I)₁` seeds.

use num_bigint::BigInt;
use num_traits::One;

use super::bridge::{bridge_any, pole_free, Bridge};
use crate::error::{Error, Result};
use crate::exactnum::{parse_quad, ExtReal, QuadReal};
use crate::invariants::{check_gi1, oriented_stabilizer};
use crate::moebius::Mob;
use crate::piecewise::{Domain, GroupTag, PwMap};

/// How far the coset search `w ∘ Sʲ` runs in each direction.
const COSET_RANGE: i64 = 4;

fn t1() -> Mob {
    Mob::translation(&BigInt::one())
}

fn affine_between(s0: &QuadReal, e0: &QuadReal, s1: &QuadReal, e1: &QuadReal) -> Result<Mob> {
    let slope = (e1 - s1).try_div(&(e0 - s0))?;
    let offset = s1 - &(&slope * s0);
    Mob::from_rational([&slope, &offset, &QuadReal::zero(), &QuadReal::one()])
}

fn connector_ok(g: &PwMap, x: &QuadReal, c: &QuadReal, tag: GroupTag) -> bool {
    let x1 = x.add_int(&BigInt::one());
    g.is_g1()
        && g.is_member(tag).is_ok()
        && g.at(x) == x1
        && g.at(&x1) == *c
        && g.at(c) == c.add_int(&BigInt::one())
}

fn push_bridge(breaks: &mut Vec<QuadReal>, pieces: &mut Vec<Mob>, b: Bridge) {
    breaks.extend(b.breaks);
    pieces.extend(b.pieces);
}

/// Search order `0, −1, 1, −2, 2, …`.
fn coset_exponents() -> impl Iterator<Item = i64> {
    std::iter::once(0).chain((1..=COSET_RANGE).flat_map(|k| [-k, k]))
}

/// `g ∈ G₁` with `g = t + 1` off `(x, c)`, `g([x, x+1]) = [x+1, c]` and
/// `g([x+1, c]) = [c, c+1]`, where `c = h(x) + m`; then `β_x(g) = h(x)`.
pub fn connector(x: &QuadReal, h: &Mob, m: i64, tag: GroupTag) -> Result<PwMap> {
    let tag = match tag {
        GroupTag::HZ | GroupTag::HZ1 => GroupTag::HZ1,
        GroupTag::PPQ1 => GroupTag::PPQ1,
        other => return Err(Error::Usage(format!("connector is defined for HZ1 and PPQ1, not {other}"))),
    };
    if tag == GroupTag::HZ1 && (x.is_rational() || !h.is_unimodular()) {
        return Err(Error::BadTarget(format!("x = {x} must be in P_Z and h in PSL(2,Z)")));
    }
    if tag == GroupTag::PPQ1 && !x.is_rational() {
        return Err(Error::BadTarget(format!("x = {x} must be rational")));
    }
    let y = match h.apply(x) {
        ExtReal::Finite(y) if !y.is_negative() && y < QuadReal::one() => y,
        other => return Err(Error::BadTarget(format!("h(x) = {other} is not in [0, 1)"))),
    };
    let x1 = x.add_int(&BigInt::one());
    let c = y.add_int(&BigInt::from(m));
    if !(x1 < c && c.add_int(&-BigInt::one()) <= x1) {
        return Err(Error::BadShift(format!("m = {m} for h(x) = {y}")));
    }
    let g = match tag {
        GroupTag::PPQ1 => {
            let a1 = affine_between(x, &x1, &x1, &c)?;
            let a2 = affine_between(&x1, &c, &c, &c.add_int(&BigInt::one()))?;
            PwMap::new(Domain::RealLine, vec![x.clone(), x1.clone(), c.clone()], vec![t1(), a1, a2, t1()])?
        }
        _ => hz_connector(x, h, m, &c)?,
    };
    if !connector_ok(&g, x, &c, tag) {
        return Err(Error::BridgeFail(format!("assembled map fails the connector postconditions: {}", g.serialize())));
    }
    Ok(g)
}

fn hz_connector(x: &QuadReal, h: &Mob, m: i64, c: &QuadReal) -> Result<PwMap> {
    let x1 = x.add_int(&BigInt::one());
    let t = t1();
    let w0 = Mob::translation(&BigInt::from(m)).compose(h).compose(&t.inverse());
    let s = oriented_stabilizer(&x1)?;
    let sc = oriented_stabilizer(c)?;
    // Pieces sending x+1 to c, for either side of x+1.
    let mut ws = Vec::new();
    if t.at(&x1) == *c {
        ws.push(t.clone());
    }
    ws.extend(coset_exponents().map(|j| w0.compose(&s.pow(j))));
    ws.dedup();
    // Pieces sending c to c+1.
    let mut rs = vec![t.clone()];
    rs.extend(coset_exponents().skip(1).map(|i| t.compose(&sc.pow(i))));

    let mut last_err = Error::BridgeFail("no candidate pieces".into());
    let usable = |p: &Mob, lo: &QuadReal, hi: &QuadReal| pole_free(p, lo, hi);
    for w1 in ws.iter().filter(|w| usable(w, &x1, &x1)) {
        let b1 = match bridge_any(&t, w1, x, &x1) {
            Ok(b) => b,
            Err(e) => {
                last_err = e;
                continue;
            }
        };
        for w2 in std::iter::once(w1).chain(ws.iter().filter(|w| *w != w1)) {
            for r in &rs {
                let b2 = match bridge_any(w2, r, &x1, c) {
                    Ok(b) => b,
                    Err(e) => {
                        last_err = e;
                        continue;
                    }
                };
                let mut breaks = vec![x.clone()];
                let mut pieces = vec![t.clone()];
                push_bridge(&mut breaks, &mut pieces, b1.clone());
                breaks.push(x1.clone());
                push_bridge(&mut breaks, &mut pieces, b2);
                breaks.push(c.clone());
                pieces.push(t.clone());
                let Ok(g) = PwMap::new(Domain::RealLine, breaks, pieces) else {
                    continue;
                };
                if connector_ok(&g, x, c, GroupTag::HZ1) {
                    return Ok(g);
                }
            }
        }
    }
    Err(last_err)
}

/// `B₀₁`: identity up to `1 − √2`, `[[5,2],[2,1]]`, then `t + 1` from
/// `(1 + √3)/2`.
pub fn b01() -> PwMap {
    let p = parse_quad("1-1*sqrt(2)").expect("literal");
    let q = parse_quad("(1+1*sqrt(3))/2").expect("literal");
    PwMap::new(Domain::RealLine, vec![p, q], vec![Mob::identity(), Mob::from_ints(5, 2, 2, 1), t1()])
        .expect("valid base element")
}

/// An element with germ `t + i` at `−∞` and `t + j` at `+∞`.
pub fn make_end_offset(i: i64, j: i64, tag: GroupTag) -> Result<PwMap> {
    match tag {
        GroupTag::HZ | GroupTag::HZ1 | GroupTag::PZpw => {
            let ti = PwMap::translation(i);
            ti.compose(&b01().pow(j - i))
        }
        GroupTag::PPQ1 => {
            if i == j {
                return Ok(PwMap::translation(i));
            }
            let len = QuadReal::from_int((i - j + 1).max(1));
            let zero = QuadReal::zero();
            let mid = affine_between(&zero, &len, &QuadReal::from_int(i), &len.add_int(&BigInt::from(j)))?;
            PwMap::new(
                Domain::RealLine,
                vec![zero, len],
                vec![Mob::translation(&BigInt::from(i)), mid, Mob::translation(&BigInt::from(j))],
            )
        }
        other => Err(Error::Usage(format!("end offsets live on the real line, not {other}"))),
    }
}

/// The first point right of `v` where the stabilizer generator stops being
/// an increasing map above the identity.
fn stabilizer_reach(f: &Mob, v: &QuadReal) -> Option<QuadReal> {
    f.pole()
        .into_iter()
        .chain(f.fixed_points())
        .filter(|p| p > v)
        .min()
}

/// A `G(I)₁` element for `I = [v, ∞)`: identity, then `f_v`, glued to
/// `t + 1` through transversal crossings.
pub fn make_gi1(v: &QuadReal) -> Result<PwMap> {
    if v.is_rational() {
        return Err(Error::NotInPZ(v.to_string()));
    }
    let f = oriented_stabilizer(v)?;
    let t = t1();
    let reach = stabilizer_reach(&f, v).unwrap_or_else(|| v.add_int(&BigInt::from(4)));
    let span = &reach - v;
    let mut ends = vec![reach.clone()];
    for k in [3, 2, 1] {
        let e = v + &span.try_mul(&QuadReal::ratio(k, 4))?;
        ends.push(e);
    }
    let mut last_err = Error::BridgeFail(format!("no bridge from {f} to t+1 right of {v}"));
    for e in &ends {
        let b = match bridge_any(&f, &t, v, e) {
            Ok(b) => b,
            Err(err) => {
                last_err = err;
                continue;
            }
        };
        let mut breaks = vec![v.clone()];
        breaks.extend(b.breaks);
        let mut pieces = vec![Mob::identity()];
        pieces.extend(b.pieces);
        let Ok(g) = PwMap::new(Domain::RealLine, breaks, pieces) else {
            continue;
        };
        if check_gi1(&g, v).is_ok() && g.is_member(GroupTag::HZ).is_ok() {
            return Ok(g);
        }
    }
    Err(last_err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::beta_hz;

    fn q(s: &str) -> QuadReal {
        parse_quad(s).unwrap()
    }

    #[test]
    fn connector_examples() {
        let sqrt2 = q("1*sqrt(2)");
        let h = Mob::from_ints(1, -1, 1, 0);
        let g = connector(&sqrt2, &h, 3, GroupTag::HZ1).unwrap();
        assert_eq!(beta_hz(&g, &sqrt2).unwrap(), q("(2-1*sqrt(2))/2"));

        let phi = q("(1+1*sqrt(5))/2");
        let g = connector(&phi, &Mob::from_ints(1, -1, 0, 1), 3, GroupTag::HZ1).unwrap();
        assert_eq!(g, PwMap::translation(1));
        assert_eq!(beta_hz(&g, &phi).unwrap(), phi.add_int(&-BigInt::one()));

        assert!(matches!(connector(&q("1/2"), &h, 3, GroupTag::HZ1), Err(Error::BadTarget(_))));
        assert!(matches!(connector(&sqrt2, &h, 4, GroupTag::HZ1), Err(Error::BadShift(_))));
        assert!(matches!(connector(&sqrt2, &Mob::identity(), 3, GroupTag::HZ1), Err(Error::BadTarget(_))));
    }

    #[test]
    fn ppq_connector() {
        let x = q("1/3");
        let h = Mob::from_ints(1, 0, 2, 1);
        let g = connector(&x, &h, 2, GroupTag::PPQ1).unwrap();
        assert_eq!(beta_hz(&g, &x).unwrap(), q("1/5"));
    }

    #[test]
    fn end_offsets() {
        let b = make_end_offset(0, 1, GroupTag::HZ).unwrap();
        assert_eq!(b, b01());
        let a = Mob::from_ints(5, 2, 2, 1);
        let p = q("1-1*sqrt(2)");
        let r = q("(1+1*sqrt(3))/2");
        assert_eq!(a.at(&p), p);
        assert_eq!(a.at(&r), r.add_int(&BigInt::one()));
        assert!(b.is_member(GroupTag::HZ).is_ok());
        assert!(make_end_offset(0, 0, GroupTag::HZ).unwrap().is_identity());
        assert_eq!(make_end_offset(1, 1, GroupTag::HZ).unwrap(), PwMap::translation(1));
        for (i, j) in [(2, -1), (-3, 1), (0, 4)] {
            let f = make_end_offset(i, j, GroupTag::PPQ1).unwrap();
            assert!(f.is_member(GroupTag::PPQ1).is_ok());
            assert_eq!(f.pieces()[0], Mob::translation(&BigInt::from(i)));
            assert_eq!(*f.pieces().last().unwrap(), Mob::translation(&BigInt::from(j)));
        }
    }

    #[test]
    fn gi1_seeds() {
        for v in ["(1+1*sqrt(5))/2", "1*sqrt(2)", "1+1*sqrt(3)", "-1*sqrt(7)"] {
            let v = q(v);
            let g = make_gi1(&v).unwrap();
            check_gi1(&g, &v).unwrap();
            assert!(g.is_member(GroupTag::HZ).is_ok());
        }
        let g = make_gi1(&q("(1+1*sqrt(5))/2")).unwrap();
        assert_eq!(g.breaks()[1], q("1*sqrt(3)"));
        let g = make_gi1(&q("1*sqrt(2)")).unwrap();
        assert_eq!(g.breaks()[1], q("(-1+1*sqrt(15))/2"));
        assert!(matches!(make_gi1(&q("1/2")), Err(Error::NotInPZ(_))));
    }
}
