//! Piecewise projective and piecewise affine homeomorphisms with exact
//! breakpoints.

mod member;
mod piece;
mod text;

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exactnum::{rational_between, ExtReal, QuadReal};
use crate::moebius::Mob;

pub use member::{log_base, GroupTag, Violation};
pub use piece::{Affine, Piece};
pub use text::{parse_any, parse_tagged, AnyMap};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Domain {
    RealLine,
    UnitInterval,
    /// `[s, e]`; segment maps always fix both endpoints.
    Segment(QuadReal, QuadReal),
}

impl Domain {
    pub fn lo(&self) -> ExtReal {
        match self {
            Domain::RealLine => ExtReal::NegInf,
            Domain::UnitInterval => ExtReal::int(0),
            Domain::Segment(s, _) => ExtReal::Finite(s.clone()),
        }
    }

    pub fn hi(&self) -> ExtReal {
        match self {
            Domain::RealLine => ExtReal::PosInf,
            Domain::UnitInterval => ExtReal::int(1),
            Domain::Segment(_, e) => ExtReal::Finite(e.clone()),
        }
    }

    pub fn contains(&self, t: &QuadReal) -> bool {
        let t = ExtReal::Finite(t.clone());
        self.lo() <= t && t <= self.hi()
    }
}

/// A closed interval of the extended line; infinite ends are open in `R`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Interval {
    pub lo: ExtReal,
    pub hi: ExtReal,
}

impl Interval {
    pub fn new(lo: impl Into<ExtReal>, hi: impl Into<ExtReal>) -> Self {
        Interval {
            lo: lo.into(),
            hi: hi.into(),
        }
    }

    pub fn whole() -> Self {
        Interval::new(ExtReal::NegInf, ExtReal::PosInf)
    }

    /// `[x + n, x + n + 1]`.
    pub fn unit_at(x: &QuadReal, n: i64) -> Self {
        let s = x.add_int(&BigInt::from(n));
        let e = s.add_int(&BigInt::from(1));
        Interval::new(s, e)
    }

    pub fn contains_point(&self, t: &QuadReal) -> bool {
        let t = ExtReal::Finite(t.clone());
        self.lo <= t && t <= self.hi
    }

    pub fn contains(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// A homeomorphism given by strictly increasing breakpoints and one piece
/// per complementary interval, in canonical form (adjacent pieces differ).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PwMap<P: Piece = Mob> {
    domain: Domain,
    breaks: Vec<QuadReal>,
    pieces: Vec<P>,
}

fn violation<T>(kind: &'static str, detail: String) -> Result<T> {
    Err(Error::InvariantViolation { kind, detail })
}

impl<P: Piece> PwMap<P> {
    /// Validates every invariant, then merges equal neighbours.
    pub fn new(domain: Domain, breaks: Vec<QuadReal>, pieces: Vec<P>) -> Result<Self> {
        if pieces.len() != breaks.len() + 1 {
            return violation(
                "shape",
                format!("{} breakpoints need {} pieces, got {}", breaks.len(), breaks.len() + 1, pieces.len()),
            );
        }
        if let Domain::Segment(s, e) = &domain {
            if s >= e {
                return violation("ordering", format!("empty segment [{s}, {e}]"));
            }
        }
        let (lo, hi) = (domain.lo(), domain.hi());
        for w in breaks.windows(2) {
            if w[0] >= w[1] {
                return violation("ordering", format!("breakpoint {} is not below {}", w[0], w[1]));
            }
        }
        if let (Some(first), Some(last)) = (breaks.first(), breaks.last()) {
            if ExtReal::Finite(first.clone()) <= lo || ExtReal::Finite(last.clone()) >= hi {
                return violation("ordering", "breakpoint outside the open domain".into());
            }
        }
        let map = PwMap {
            domain,
            breaks,
            pieces,
        };
        for i in 0..map.pieces.len() {
            let iv = map.piece_interval(i);
            let p = &map.pieces[i];
            if !iv.lo.is_finite() || !iv.hi.is_finite() {
                if !p.fixes_infinity() {
                    return violation("monotonicity", format!("end piece {p} is not affine"));
                }
            } else if let Some(pole) = p.pole() {
                if iv.contains_point(&pole) {
                    return violation("monotonicity", format!("piece {p} has its pole {pole} in {iv}"));
                }
            }
        }
        for (i, b) in map.breaks.iter().enumerate() {
            let l = map.pieces[i].apply(b);
            let r = map.pieces[i + 1].apply(b);
            if l != r {
                return violation("continuity", format!("pieces disagree at {b}: {l} vs {r}"));
            }
        }
        for end in [&lo, &hi] {
            if let ExtReal::Finite(t) = end {
                let piece = if end == &lo { map.pieces.first() } else { map.pieces.last() };
                let v = piece.expect("nonempty").apply(t);
                if v != *end {
                    return violation("ends", format!("endpoint {t} maps to {v}"));
                }
            }
        }
        Ok(map.normalized())
    }

    fn normalized(mut self) -> Self {
        let mut breaks = Vec::with_capacity(self.breaks.len());
        let mut pieces = Vec::with_capacity(self.pieces.len());
        let mut it = self.pieces.into_iter();
        pieces.push(it.next().expect("at least one piece"));
        for (b, p) in self.breaks.into_iter().zip(it) {
            if pieces.last() != Some(&p) {
                breaks.push(b);
                pieces.push(p);
            }
        }
        self.breaks = breaks;
        self.pieces = pieces;
        self
    }

    pub fn identity(domain: Domain) -> Self {
        PwMap {
            domain,
            breaks: Vec::new(),
            pieces: vec![P::identity()],
        }
    }

    /// The global translation `t ↦ t + k` on the real line.
    pub fn translation(k: i64) -> Self {
        PwMap {
            domain: Domain::RealLine,
            breaks: Vec::new(),
            pieces: vec![P::translation(&BigInt::from(k))],
        }
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn breaks(&self) -> &[QuadReal] {
        &self.breaks
    }

    pub fn pieces(&self) -> &[P] {
        &self.pieces
    }

    pub fn is_identity(&self) -> bool {
        self.breaks.is_empty() && self.pieces[0].is_identity()
    }

    /// Closed interval of the `i`-th piece.
    pub fn piece_interval(&self, i: usize) -> Interval {
        let lo = if i == 0 {
            self.domain.lo()
        } else {
            ExtReal::Finite(self.breaks[i - 1].clone())
        };
        let hi = if i == self.breaks.len() {
            self.domain.hi()
        } else {
            ExtReal::Finite(self.breaks[i].clone())
        };
        Interval { lo, hi }
    }

    /// Index of the piece in force just to the right of `t`.
    pub fn index_right(&self, t: &QuadReal) -> usize {
        self.breaks.partition_point(|b| b <= t)
    }

    /// Index of the piece in force just to the left of `t`.
    pub fn index_left(&self, t: &QuadReal) -> usize {
        self.breaks.partition_point(|b| b < t)
    }

    pub fn eval(&self, t: &QuadReal) -> Result<QuadReal> {
        if !self.domain.contains(t) {
            return Err(Error::OutOfDomain(t.to_string()));
        }
        Ok(self.at(t))
    }

    pub fn eval_ext(&self, t: &ExtReal) -> Result<ExtReal> {
        match t {
            ExtReal::Finite(x) => self.eval(x).map(ExtReal::Finite),
            _ if self.domain == Domain::RealLine => Ok(t.clone()),
            _ => Err(Error::OutOfDomain(t.to_string())),
        }
    }

    /// Evaluation without the domain check.
    pub fn at(&self, t: &QuadReal) -> QuadReal {
        self.pieces[self.index_right(t)].at(t)
    }

    fn at_ext(&self, t: &ExtReal) -> ExtReal {
        match t {
            ExtReal::Finite(x) => ExtReal::Finite(self.at(x)),
            other => other.clone(),
        }
    }

    pub fn invert(&self) -> Self {
        PwMap {
            domain: self.domain.clone(),
            breaks: self.breaks.iter().map(|b| self.at(b)).collect(),
            pieces: self.pieces.iter().map(|p| p.inverse()).collect(),
        }
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        if self.domain != g.domain {
            return Err(Error::DomainMismatch);
        }
        Ok(self.compose_unchecked(g))
    }

    fn compose_unchecked(&self, g: &Self) -> Self {
        if self.is_identity() {
            return g.clone();
        }
        if g.is_identity() {
            return self.clone();
        }
        let ginv = g.invert();
        let mut cuts: Vec<QuadReal> = g.breaks.clone();
        cuts.extend(self.breaks.iter().map(|b| ginv.at(b)));
        cuts.sort();
        cuts.dedup();
        let mut pieces = Vec::with_capacity(cuts.len() + 1);
        let lo = self.domain.lo();
        for k in 0..=cuts.len() {
            let left = if k == 0 { lo.clone() } else { ExtReal::Finite(cuts[k - 1].clone()) };
            let (gi, fi) = match &left {
                ExtReal::Finite(t) => {
                    let gi = g.index_right(t);
                    let y = g.pieces[gi].at(t);
                    (gi, self.index_right(&y))
                }
                _ => (0, 0),
            };
            pieces.push(self.pieces[fi].compose(&g.pieces[gi]));
        }
        PwMap {
            domain: self.domain.clone(),
            breaks: cuts,
            pieces,
        }
        .normalized()
    }

    /// `h ∘ self ∘ h⁻¹`.
    pub fn conjugate(&self, h: &Self) -> Result<Self> {
        h.compose(self)?.compose(&h.invert())
    }

    pub fn pow(&self, k: i64) -> Self {
        let mut base = if k < 0 { self.invert() } else { self.clone() };
        let mut acc = PwMap::identity(self.domain.clone());
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.compose_unchecked(&base);
            }
        }
        acc
    }

    /// Maximal closed end intervals on which the map is affine; the whole
    /// line for an affine map.
    pub fn end_zones(&self) -> (Interval, Interval) {
        match (self.breaks.first(), self.breaks.last()) {
            (Some(first), Some(last)) => (
                Interval::new(self.domain.lo(), first.clone()),
                Interval::new(last.clone(), self.domain.hi()),
            ),
            _ => {
                let all = Interval::new(self.domain.lo(), self.domain.hi());
                (all.clone(), all)
            }
        }
    }

    /// `sup { t : f = id on (−∞, t] }`, with `s(id) = +∞`.
    pub fn s_of(&self) -> ExtReal {
        if self.is_identity() {
            return ExtReal::PosInf;
        }
        match self.breaks.first() {
            Some(b) if self.pieces[0].is_identity() => ExtReal::Finite(b.clone()),
            _ => ExtReal::NegInf,
        }
    }

    /// `inf { t : f = id on [t, ∞) }`, with `i(id) = −∞`.
    pub fn i_of(&self) -> ExtReal {
        if self.is_identity() {
            return ExtReal::NegInf;
        }
        match self.breaks.last() {
            Some(b) if self.pieces.last().is_some_and(|p| p.is_identity()) => ExtReal::Finite(b.clone()),
            _ => ExtReal::PosInf,
        }
    }

    /// Whether the map is the identity outside `iv`.
    pub fn supported_in(&self, iv: &Interval) -> bool {
        (0..self.pieces.len()).all(|i| self.pieces[i].is_identity() || iv.contains(&self.piece_interval(i)))
    }

    /// Whether `f(iv) = iv`.
    pub fn maps_interval(&self, iv: &Interval) -> bool {
        self.at_ext(&iv.lo) == iv.lo && self.at_ext(&iv.hi) == iv.hi
    }

    /// The segment map `f|_iv` for a finite invariant interval.
    pub fn restrict_to(&self, iv: &Interval) -> Result<Self> {
        let (Some(s), Some(e)) = (iv.lo.finite(), iv.hi.finite()) else {
            return Err(Error::NotInvariant(format!("{iv} is unbounded")));
        };
        if !self.maps_interval(iv) || !self.domain.contains(s) || !self.domain.contains(e) {
            return Err(Error::NotInvariant(iv.to_string()));
        }
        let i0 = self.index_right(s);
        let i1 = self.index_left(e);
        PwMap::new(
            Domain::Segment(s.clone(), e.clone()),
            self.breaks[i0..i1].to_vec(),
            self.pieces[i0..=i1].to_vec(),
        )
    }

    /// Conjugates by an affine change of variable `h`, moving the domain to
    /// its image: `h ∘ f ∘ h⁻¹` on `h(domain)`.
    pub fn transport(&self, h: &P) -> Result<Self> {
        if !h.fixes_infinity() {
            return Err(Error::Usage(format!("transport needs an affine map, got {h}")));
        }
        let domain = match &self.domain {
            Domain::RealLine => Domain::RealLine,
            d => {
                let (Some(s), Some(e)) = (d.lo().finite().cloned(), d.hi().finite().cloned()) else {
                    unreachable!("bounded domain")
                };
                Domain::Segment(h.at(&s), h.at(&e))
            }
        };
        let hinv = h.inverse();
        PwMap::new(
            domain,
            self.breaks.iter().map(|b| h.at(b)).collect(),
            self.pieces.iter().map(|p| h.compose(p).compose(&hinv)).collect(),
        )
    }

    /// Same pieces on the unit interval; for segment maps on `[0, 1]`.
    pub fn as_unit(&self) -> Result<Self> {
        if self.domain.lo() != ExtReal::int(0) || self.domain.hi() != ExtReal::int(1) {
            return Err(Error::DomainMismatch);
        }
        Ok(PwMap {
            domain: Domain::UnitInterval,
            ..self.clone()
        })
    }

    /// Strictly above the identity on the open domain.
    pub fn dominates_identity(&self) -> bool {
        let (lo, hi) = (self.domain.lo(), self.domain.hi());
        for i in 0..self.pieces.len() {
            let p = &self.pieces[i];
            if p.is_identity() {
                return false;
            }
            let iv = self.piece_interval(i);
            for fp in p.fixed_points() {
                let e = ExtReal::Finite(fp.clone());
                if iv.contains_point(&fp) && lo < e && e < hi {
                    return false;
                }
            }
            let s = rational_between(&iv.lo, &iv.hi);
            if p.at(&s) <= s {
                return false;
            }
        }
        true
    }

    /// Both end germs equal `t + 1` and the map lies above the identity.
    pub fn is_g1(&self) -> bool {
        let t1 = P::translation(&BigInt::from(1));
        self.domain == Domain::RealLine
            && self.pieces[0] == t1
            && *self.pieces.last().expect("nonempty") == t1
            && self.dominates_identity()
    }

    /// Pieces with the intervals they act on.
    pub fn iter_pieces(&self) -> impl Iterator<Item = (Interval, &P)> {
        self.pieces.iter().enumerate().map(|(i, p)| (self.piece_interval(i), p))
    }
}

impl<P: Piece> fmt::Debug for PwMap<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.serialize())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::parse_quad;

    fn q(s: &str) -> QuadReal {
        parse_quad(s).unwrap()
    }

    /// 2t on [0,1/4], t+1/4 on [1/4,1/2], (t+1)/2 on [1/2,1].
    pub(crate) fn f2_element() -> PwMap {
        PwMap::new(
            Domain::UnitInterval,
            vec![q("1/4"), q("1/2")],
            vec![Mob::from_ints(2, 0, 0, 1), Mob::from_ints(4, 1, 0, 4), Mob::from_ints(1, 1, 0, 2)],
        )
        .unwrap()
    }

    fn end_offset() -> PwMap {
        PwMap::new(
            Domain::RealLine,
            vec![q("1-1*sqrt(2)"), q("(1+1*sqrt(3))/2")],
            vec![Mob::identity(), Mob::from_ints(5, 2, 2, 1), Mob::from_ints(1, 1, 0, 1)],
        )
        .unwrap()
    }

    #[test]
    fn evaluation() {
        let id: PwMap = PwMap::identity(Domain::RealLine);
        let phi = q("(1+1*sqrt(5))/2");
        assert_eq!(id.eval(&phi).unwrap(), phi);
        let t: PwMap = PwMap::translation(1);
        assert_eq!(t.eval(&q("1*sqrt(2)")).unwrap(), q("1+1*sqrt(2)"));
        let f = f2_element();
        assert_eq!(f.eval(&q("1/4")).unwrap(), q("1/2"));
        assert_eq!(f.eval(&q("1/8")).unwrap(), q("1/4"));
        assert!(matches!(f.eval(&q("2")), Err(Error::OutOfDomain(_))));
    }

    #[test]
    fn group_operations() {
        let f = f2_element();
        assert!(f.compose(&f.invert()).unwrap().is_identity());
        let h = end_offset();
        let id: PwMap = PwMap::identity(Domain::RealLine);
        assert!(id.conjugate(&h).unwrap().is_identity());
        let g = h.compose(&PwMap::translation(3)).unwrap();
        for s in ["-5", "1/3", "1*sqrt(2)", "7/2", "-1*sqrt(5)"] {
            let t = q(s);
            assert_eq!(g.at(&t), h.at(&t.add_int(&3.into())));
        }
        assert_eq!(f.pow(3), f.compose(&f).unwrap().compose(&f).unwrap());
        assert_eq!(f.pow(-2), f.invert().pow(2));
        assert!(matches!(f.compose(&id), Err(Error::DomainMismatch)));
    }

    #[test]
    fn validation_reports_first_violation() {
        let bad_order = PwMap::new(
            Domain::UnitInterval,
            vec![q("1/2"), q("1/4")],
            vec![Mob::from_ints(2, 0, 0, 1), Mob::from_ints(4, 1, 0, 4), Mob::from_ints(1, 1, 0, 2)],
        );
        assert!(matches!(bad_order, Err(Error::InvariantViolation { kind: "ordering", .. })));
        let bad_cont = PwMap::new(
            Domain::UnitInterval,
            vec![q("1/4")],
            vec![Mob::from_ints(2, 0, 0, 1), Mob::from_ints(1, 1, 0, 2)],
        );
        assert!(matches!(bad_cont, Err(Error::InvariantViolation { kind: "continuity", .. })));
        let bad_end = PwMap::new(Domain::RealLine, vec![], vec![Mob::from_ints(2, 1, 1, 1)]);
        assert!(matches!(bad_end, Err(Error::InvariantViolation { kind: "monotonicity", .. })));
        let merged = PwMap::new(
            Domain::RealLine,
            vec![q("0")],
            vec![Mob::translation(&1.into()), Mob::translation(&1.into())],
        )
        .unwrap();
        assert!(merged.breaks().is_empty());
    }

    #[test]
    fn zones_and_support() {
        let h = end_offset();
        let (l, r) = h.end_zones();
        assert_eq!(l, Interval::new(ExtReal::NegInf, q("1-1*sqrt(2)")));
        assert_eq!(r, Interval::new(q("(1+1*sqrt(3))/2"), ExtReal::PosInf));
        assert_eq!(h.s_of(), ExtReal::Finite(q("1-1*sqrt(2)")));
        assert_eq!(h.i_of(), ExtReal::PosInf);
        let id: PwMap = PwMap::identity(Domain::RealLine);
        assert_eq!(id.s_of(), ExtReal::PosInf);
        assert_eq!(id.i_of(), ExtReal::NegInf);
        assert_eq!(id.end_zones().0, Interval::whole());
        let t: PwMap = PwMap::translation(1);
        assert_eq!(t.s_of(), ExtReal::NegInf);
        assert!(id.supported_in(&Interval::unit_at(&QuadReal::zero(), 0)));
        assert!(!t.supported_in(&Interval::unit_at(&QuadReal::zero(), 0)));
        assert!(!t.maps_interval(&Interval::unit_at(&QuadReal::zero(), 0)));
        assert!(matches!(t.restrict_to(&Interval::unit_at(&QuadReal::zero(), 0)), Err(Error::NotInvariant(_))));
    }

    #[test]
    fn restriction_and_transport() {
        let f = f2_element();
        let seg = f.restrict_to(&Interval::new(q("0"), q("1"))).unwrap();
        assert_eq!(seg.breaks(), f.breaks());
        let moved = seg.transport(&Mob::translation(&5.into())).unwrap();
        assert_eq!(moved.domain(), &Domain::Segment(q("5"), q("6")));
        assert_eq!(moved.at(&q("41/8")), q("21/4"));
        assert_eq!(moved.transport(&Mob::translation(&(-5).into())).unwrap().as_unit().unwrap(), f);
    }

    #[test]
    fn domination() {
        let id: PwMap = PwMap::identity(Domain::RealLine);
        assert!(!id.dominates_identity());
        assert!(PwMap::<Mob>::translation(1).dominates_identity());
        assert!(f2_element().dominates_identity());
        assert!(!f2_element().invert().dominates_identity());
        assert!(!end_offset().dominates_identity());
        assert!(PwMap::<Mob>::translation(1).is_g1());
    }
}
