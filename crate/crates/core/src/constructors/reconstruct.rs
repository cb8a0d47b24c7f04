//! Rebuilding a segment map from an element that monitors it.

use num_bigint::BigInt;

use super::connector::make_end_offset;
use crate::error::{Error, Result};
use crate::invariants::{information, MonitorSpec};
use crate::moebius::Mob;
use crate::piecewise::{Domain, GroupTag, Interval, PwMap};

fn require_info(h: &PwMap, m: &MonitorSpec, want: &PwMap, what: &str) -> Result<()> {
    let found = MonitorSpec::find(h, &m.x, m.a, m.b)?;
    if found.n != m.n {
        return Err(Error::NotMonitorable(format!("{what}: exponent is {}, not {}", found.n, m.n)));
    }
    let info = information(h, &m.x, m.a, m.b)?;
    if info != *want {
        return Err(Error::NotMonitorable(format!("{what}: information differs from the expected segment map")));
    }
    Ok(())
}

/// `W = h0^{−N0−n} ∘ h2⁻¹ ∘ h1^{N1+2n} ∘ h2 ∘ h0^{−n}`, where `h0` monitors
/// the identity at `(a, b)`, `h1` monitors `fhat` moved to `J_{x,0}` at
/// `(c, d)`, and `h2` has end germs `t + c − a`, `t + d − b`. Then `W`
/// restricted to `J_{x,a}` is `fhat`.
pub fn reconstruct_via_monitoring(
    fhat: &PwMap,
    h0: &PwMap,
    h1: &PwMap,
    m0: &MonitorSpec,
    m1: &MonitorSpec,
    n: u64,
    tag: GroupTag,
) -> Result<PwMap> {
    if m0.x != m1.x {
        return Err(Error::NotMonitorable(format!("monitor bases {} and {} differ", m0.x, m1.x)));
    }
    let x = &m0.x;
    let ja = Interval::unit_at(x, m0.a);
    let (Some(s), Some(e)) = (ja.lo.finite(), ja.hi.finite()) else {
        unreachable!("unit intervals are bounded");
    };
    if *fhat.domain() != Domain::Segment(s.clone(), e.clone()) {
        return Err(Error::DomainMismatch);
    }
    let f = fhat.transport(&Mob::translation(&BigInt::from(-m0.a)))?;
    let id = PwMap::identity(Domain::Segment(x.clone(), x.add_int(&BigInt::from(1))));
    require_info(h0, m0, &id, "h0")?;
    require_info(h1, m1, &f, "h1")?;

    let h2 = make_end_offset(m1.a - m0.a, m1.b - m0.b, tag)?;
    let k = n as i64;
    let (left, right) = h2.end_zones();
    let (jl, jr) = (Interval::unit_at(x, m0.a - k), Interval::unit_at(x, m0.b + k));
    if !left.contains(&jl) || !right.contains(&jr) {
        return Err(Error::ZoneFail(format!("{jl} and {jr} are not in the end zones of the offset element")));
    }
    let n0 = m0.n as i64;
    let n1 = m1.n as i64;
    let w = h0
        .pow(-n0 - k)
        .compose(&h2.invert())?
        .compose(&h1.pow(n1 + 2 * k))?
        .compose(&h2)?
        .compose(&h0.pow(-k))?;
    Ok(w)
}
