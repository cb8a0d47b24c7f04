//! Monitoring intervals `J_{x,n} = [x + n, x + n + 1]`, the information
//! map, and the real-line invariants `β_x` and `γ_x`.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use super::{ceil_diff, orbit_point, orbit_until, DEFAULT_CAP};
use crate::error::{Error, Result};
use crate::exactnum::{rational_between, ExtReal, QuadReal};
use crate::moebius::{stabilizer_generator, Mob};
use crate::piecewise::{Domain, GroupTag, Interval, Piece, PwMap};

/// Monitors `J_{x,a}`, `J_{x,b}` with `g^N(J_{x,a}) = J_{x,b}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonitorSpec {
    pub x: QuadReal,
    pub a: i64,
    pub b: i64,
    pub n: u64,
}

impl MonitorSpec {
    /// Finds `N` for the given monitors; `NotMonitorable` when there is none.
    pub fn find<P: Piece>(g: &PwMap<P>, x: &QuadReal, a: i64, b: i64) -> Result<Self> {
        match monitoring_exponent(g, x, a, b)? {
            Some(n) => Ok(MonitorSpec { x: x.clone(), a, b, n }),
            None => Err(Error::NotMonitorable(format!("g^N never maps J_{a} onto J_{b} at base {x}"))),
        }
    }

    /// `(a − k, b + k', N + k + k')`; the information is unchanged.
    pub fn widened(&self, k: u64, k2: u64) -> Self {
        MonitorSpec {
            x: self.x.clone(),
            a: self.a - k as i64,
            b: self.b + k2 as i64,
            n: self.n + k + k2,
        }
    }

    pub fn j_a(&self) -> Interval {
        Interval::unit_at(&self.x, self.a)
    }

    pub fn j_b(&self) -> Interval {
        Interval::unit_at(&self.x, self.b)
    }
}

fn g1_violation<P: Piece>(g: &PwMap<P>) -> Option<String> {
    if *g.domain() != Domain::RealLine {
        return Some("domain is not the real line".into());
    }
    let t1 = P::translation(&BigInt::one());
    let (first, last) = (&g.pieces()[0], &g.pieces()[g.pieces().len() - 1]);
    if *first != t1 || *last != t1 {
        return Some(format!("end germs are {first} and {last}, not t+1"));
    }
    if !g.dominates_identity() {
        return Some("not strictly above the identity".into());
    }
    None
}

fn require_g1<P: Piece>(g: &PwMap<P>) -> Result<()> {
    match g1_violation(g) {
        Some(msg) => Err(Error::NotInG1(msg)),
        None => Ok(()),
    }
}

pub fn monitoring_exponent<P: Piece>(g: &PwMap<P>, x: &QuadReal, a: i64, b: i64) -> Result<Option<u64>> {
    monitoring_exponent_capped(g, x, a, b, DEFAULT_CAP)
}

/// The `N` with `g^N(J_{x,a}) = J_{x,b}`, or `None` when the orbit of
/// `x + a` steps over `x + b`.
pub fn monitoring_exponent_capped<P: Piece>(
    g: &PwMap<P>,
    x: &QuadReal,
    a: i64,
    b: i64,
    cap: u64,
) -> Result<Option<u64>> {
    require_g1(g)?;
    if b <= a {
        return Ok(None);
    }
    let (left, right) = g.end_zones();
    let (ja, jb) = (Interval::unit_at(x, a), Interval::unit_at(x, b));
    if !left.contains(&ja) {
        return Err(Error::NotMonitorable(format!("J_{a} = {ja} is not in the left end zone {left}")));
    }
    if !right.contains(&jb) {
        return Err(Error::NotMonitorable(format!("J_{b} = {jb} is not in the right end zone {right}")));
    }
    let start = x.add_int(&BigInt::from(a));
    let target = x.add_int(&BigInt::from(b));
    let (y, n) = orbit_until(g, start, &target, cap)?;
    if y != target {
        return Ok(None);
    }
    let n = n.to_u64().ok_or(Error::IterationCap(cap))?;
    let hi = orbit_point(g, &x.add_int(&BigInt::from(a + 1)), n as i64);
    Ok((hi == target.add_int(&BigInt::one())).then_some(n))
}

/// `g^n` restricted to `[s, e]`, as breakpoints and pieces.
fn iterate_on<P: Piece>(g: &PwMap<P>, s: &QuadReal, e: &QuadReal, n: u64) -> (Vec<QuadReal>, Vec<P>) {
    let gp = g.pieces();
    let t1 = P::translation(&BigInt::one());
    let (left_t, right_t) = (gp[0] == t1, gp[gp.len() - 1] == t1);
    let mut breaks: Vec<QuadReal> = Vec::new();
    let mut pieces = vec![P::identity()];
    let mut left = n;
    while left > 0 {
        let lo = pieces[0].at(s);
        let hi = pieces[pieces.len() - 1].at(e);
        let jump = match (g.breaks().first(), g.breaks().last()) {
            (None, _) if left_t => Some(left),
            (Some(f), _) if left_t && hi <= *f => {
                // Steps taken while the image stays at or left of `f`.
                let j = ceil_diff(f, &hi);
                let k = if f.add_int(&-&j) == hi { j + BigInt::one() } else { j };
                Some(k.to_u64().unwrap_or(u64::MAX).min(left))
            }
            (_, Some(l)) if right_t && lo >= *l => Some(left),
            _ => None,
        };
        if let Some(k) = jump {
            let tk = P::translation(&BigInt::from(k));
            pieces = pieces.iter().map(|p| tk.compose(p)).collect();
            left -= k;
            continue;
        }
        let mut nb: Vec<QuadReal> = Vec::new();
        let mut np: Vec<P> = Vec::new();
        let push = |cut: Option<QuadReal>, p: P, nb: &mut Vec<QuadReal>, np: &mut Vec<P>| {
            if np.last() == Some(&p) {
                return;
            }
            if let Some(c) = cut {
                nb.push(c);
            }
            np.push(p);
        };
        for (i, p) in pieces.iter().enumerate() {
            let l = if i == 0 { s } else { &breaks[i - 1] };
            let h = if i == breaks.len() { e } else { &breaks[i] };
            let (yl, yh) = (p.at(l), p.at(h));
            let (k0, k1) = (g.index_right(&yl), g.index_left(&yh));
            let pinv = p.inverse();
            for k in k0..=k1.max(k0) {
                let cut = if k > k0 {
                    Some(pinv.at(&g.breaks()[k - 1]))
                } else if i > 0 {
                    Some(l.clone())
                } else {
                    None
                };
                push(cut, gp[k].compose(p), &mut nb, &mut np);
            }
        }
        breaks = nb;
        pieces = np;
        left -= 1;
    }
    (breaks, pieces)
}

/// The self-map `T^{−b} ∘ g^N ∘ T^{a}` of `[x, x + 1]`.
pub fn information<P: Piece>(g: &PwMap<P>, x: &QuadReal, a: i64, b: i64) -> Result<PwMap<P>> {
    let spec = MonitorSpec::find(g, x, a, b)?;
    let s = x.add_int(&BigInt::from(a));
    let e = s.add_int(&BigInt::one());
    let (breaks, pieces) = iterate_on(g, &s, &e, spec.n);
    let (ta, tb) = (P::translation(&BigInt::from(a)), P::translation(&BigInt::from(-b)));
    let back = BigInt::from(-a);
    PwMap::new(
        Domain::Segment(x.clone(), x.add_int(&BigInt::one())),
        breaks.iter().map(|c| c.add_int(&back)).collect(),
        pieces.iter().map(|p| tb.compose(p).compose(&ta)).collect(),
    )
}

/// `t + 1` off `[x, x + 1]` and `f(t) + 1` on it.
pub fn embed_information<P: Piece>(f: &PwMap<P>, tag: GroupTag) -> Result<PwMap<P>> {
    let (Some(x), Some(e)) = (f.domain().lo().finite().cloned(), f.domain().hi().finite().cloned()) else {
        return Err(Error::DomainMismatch);
    };
    let one = BigInt::one();
    if e != x.add_int(&one) {
        return Err(Error::NotMonitorable(format!("segment [{x}, {e}] does not have length 1")));
    }
    let t1 = P::translation(&one);
    let mut breaks = vec![x];
    breaks.extend(f.breaks().iter().cloned());
    breaks.push(e);
    let mut pieces = vec![t1.clone()];
    pieces.extend(f.pieces().iter().map(|p| t1.compose(p)));
    pieces.push(t1);
    let g = PwMap::new(Domain::RealLine, breaks, pieces)?;
    g.is_member(tag).map_err(|v| Error::MembershipFail(v.0))?;
    Ok(g)
}

/// `β_x(g)`: the fractional part of the first orbit point of `x − n` in the
/// right end zone, with `[x − n, x − n + 1]` the rightmost such interval in
/// the left end zone.
pub fn beta_hz<P: Piece>(g: &PwMap<P>, x: &QuadReal) -> Result<QuadReal> {
    require_g1(g)?;
    let (Some(first), Some(last)) = (g.breaks().first(), g.breaks().last()) else {
        return Ok(x.frac());
    };
    let n = ceil_diff(&x.add_int(&BigInt::one()), first);
    let (y, _) = orbit_until(g, x.add_int(&-n), last, DEFAULT_CAP)?;
    Ok(y.frac())
}

/// `β_x(g)` computed from explicit choices `(n, m)`: `frac(g^m(x − n))`.
pub fn beta_hz_at<P: Piece>(g: &PwMap<P>, x: &QuadReal, n: i64, m: u64) -> Result<QuadReal> {
    require_g1(g)?;
    let (left, right) = g.end_zones();
    let start = x.add_int(&BigInt::from(-n));
    let j = Interval::new(start.clone(), start.add_int(&BigInt::one()));
    if !left.contains(&j) {
        return Err(Error::NotMonitorable(format!("{j} is not in the left end zone {left}")));
    }
    let y = orbit_point(g, &start, m as i64);
    if !right.contains_point(&y) {
        return Err(Error::NotMonitorable(format!("g^{m}(x - {n}) = {y} is not in the right end zone")));
    }
    Ok(y.frac())
}

/// The generator of the stabilizer of `v` with `f'(v) > 1`, so that it lies
/// above the identity just right of `v`.
pub fn oriented_stabilizer(v: &QuadReal) -> Result<Mob> {
    let f = stabilizer_generator(v)?;
    let [_, _, c, d] = f.entries();
    let w = &v.scale(c) + &QuadReal::from_int(d.clone());
    let one = QuadReal::one();
    if -&one < w && w < one {
        Ok(f)
    } else {
        Ok(f.inverse())
    }
}

/// The `G(I)₁` shape for `I = [v, ∞)`: identity up to `v`, then
/// `oriented_stabilizer(v)`, strictly above the identity on `(v, ∞)`, and
/// `t + 1` at the right end.
pub fn check_gi1(g: &PwMap, v: &QuadReal) -> Result<()> {
    let bad = |m: String| Err(Error::NotInGI1(m));
    if *g.domain() != Domain::RealLine {
        return bad("domain is not the real line".into());
    }
    if g.breaks().first() != Some(v) || !g.pieces()[0].is_identity() {
        return bad(format!("not the identity up to {v}"));
    }
    let fv = oriented_stabilizer(v).map_err(|e| Error::NotInGI1(e.to_string()))?;
    if g.pieces()[1] != fv {
        return bad(format!("piece right of {v} is {}, expected {fv}", g.pieces()[1]));
    }
    if *g.pieces().last().expect("nonempty") != Mob::translation(&BigInt::one()) {
        return bad("right end germ is not t+1".into());
    }
    let vv = ExtReal::Finite(v.clone());
    for (iv, p) in g.iter_pieces().skip(1) {
        for fp in p.fixed_points() {
            if fp > *v && iv.contains_point(&fp) {
                return bad(format!("{p} fixes {fp}"));
            }
        }
        let lo = if iv.lo < vv { vv.clone() } else { iv.lo.clone() };
        let s = rational_between(&lo, &iv.hi);
        if p.at(&s) <= s {
            return bad(format!("not above the identity at {s}"));
        }
    }
    Ok(())
}

fn gi1_bound(g: &PwMap, g0: &PwMap) -> QuadReal {
    g.breaks()[1].clone().min(g0.breaks()[1].clone())
}

fn gamma_pre(g: &PwMap, g0: &PwMap, v: &QuadReal, x: &QuadReal) -> Result<QuadReal> {
    check_gi1(g, v)?;
    check_gi1(g0, v)?;
    if x <= v {
        return Err(Error::OutOfDomain(format!("base {x} is not right of {v}")));
    }
    Ok(gi1_bound(g, g0))
}

/// `γ_x(g)`: fractional part of the right-zone image of the left end of
/// `K_n = [g0ⁿ(x), g0ⁿ⁺¹(x)]`, with `n` the largest nonpositive index putting
/// `K_n` below the second breakpoints of `g` and `g0`.
pub fn gamma_hz(g: &PwMap, g0: &PwMap, v: &QuadReal, x: &QuadReal) -> Result<QuadReal> {
    let bound = gamma_pre(g, g0, v, x)?;
    let back = g0.invert();
    let (mut p0, mut p1) = (x.clone(), g0.at(x));
    let mut steps = 0;
    while p1 > bound {
        steps += 1;
        if steps > DEFAULT_CAP {
            return Err(Error::IterationCap(DEFAULT_CAP));
        }
        p1 = p0;
        p0 = back.at(&p1);
    }
    let last = g.breaks().last().expect("at least two breakpoints");
    let (y, _) = orbit_until(g, p0, last, DEFAULT_CAP)?;
    Ok(y.frac())
}

/// `γ_x(g)` from explicit choices: `frac(g^m(g0ⁿ(x)))`.
pub fn gamma_hz_at(g: &PwMap, g0: &PwMap, v: &QuadReal, x: &QuadReal, n: i64, m: u64) -> Result<QuadReal> {
    let bound = gamma_pre(g, g0, v, x)?;
    let p0 = orbit_point(g0, x, n);
    if g0.at(&p0) > bound {
        return Err(Error::NotMonitorable(format!("K_{n} reaches past {bound}")));
    }
    let y = orbit_point(g, &p0, m as i64);
    if y < *g.breaks().last().expect("at least two breakpoints") {
        return Err(Error::NotMonitorable(format!("g^{m} image {y} is not in the right end zone")));
    }
    Ok(y.frac())
}
