use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exactnum::{parse_quad, ExtReal, QuadReal};
use crate::moebius::Mob;

/// One branch of a piecewise map: an increasing projective map.
pub trait Piece:
    Clone + PartialEq + Eq + Hash + fmt::Display + fmt::Debug + Send + Sync + 'static
{
    fn identity() -> Self;
    /// `t ↦ t + k`.
    fn translation(k: &BigInt) -> Self;
    fn apply(&self, t: &QuadReal) -> ExtReal;
    fn apply_ext(&self, t: &ExtReal) -> ExtReal;
    /// `self ∘ other`.
    fn compose(&self, other: &Self) -> Self;
    fn inverse(&self) -> Self;
    fn pole(&self) -> Option<QuadReal>;
    fn fixes_infinity(&self) -> bool;
    /// Finite fixed points, ascending; empty for the identity.
    fn fixed_points(&self) -> Vec<QuadReal>;
    fn is_identity(&self) -> bool;
    /// `(slope, offset)` when the piece is affine.
    fn as_affine(&self) -> Option<(QuadReal, QuadReal)>;
    /// The integer matrix form, when the coefficients are rational.
    fn as_mob(&self) -> Option<Mob>;
    fn parse_literal(text: &str) -> Result<Self>;

    fn at(&self, t: &QuadReal) -> QuadReal {
        match self.apply(t) {
            ExtReal::Finite(v) => v,
            _ => panic!("{self} evaluated at its pole {t}"),
        }
    }
}

impl Piece for Mob {
    fn identity() -> Self {
        Mob::identity()
    }
    fn translation(k: &BigInt) -> Self {
        Mob::translation(k)
    }
    fn apply(&self, t: &QuadReal) -> ExtReal {
        Mob::apply(self, t)
    }
    fn apply_ext(&self, t: &ExtReal) -> ExtReal {
        Mob::apply_ext(self, t)
    }
    fn compose(&self, other: &Self) -> Self {
        Mob::compose(self, other)
    }
    fn inverse(&self) -> Self {
        Mob::inverse(self)
    }
    fn pole(&self) -> Option<QuadReal> {
        Mob::pole(self)
    }
    fn fixes_infinity(&self) -> bool {
        Mob::fixes_infinity(self)
    }
    fn fixed_points(&self) -> Vec<QuadReal> {
        Mob::fixed_points(self)
    }
    fn is_identity(&self) -> bool {
        Mob::is_identity(self)
    }
    fn as_affine(&self) -> Option<(QuadReal, QuadReal)> {
        Some((self.affine_slope()?, self.affine_offset()?))
    }
    fn as_mob(&self) -> Option<Mob> {
        Some(self.clone())
    }
    fn parse_literal(text: &str) -> Result<Self> {
        Mob::parse(text)
    }
}

/// `t ↦ slope·t + offset` with quadratic coefficients, `slope > 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Affine {
    slope: QuadReal,
    offset: QuadReal,
}

impl Affine {
    pub fn new(slope: QuadReal, offset: QuadReal) -> Result<Self> {
        if !slope.is_positive() {
            return Err(Error::NonPositiveDet);
        }
        Ok(Affine { slope, offset })
    }

    pub fn slope(&self) -> &QuadReal {
        &self.slope
    }

    pub fn offset(&self) -> &QuadReal {
        &self.offset
    }

    /// The affine map sending `[s0, e0]` onto `[s1, e1]`.
    pub fn between(s0: &QuadReal, e0: &QuadReal, s1: &QuadReal, e1: &QuadReal) -> Result<Self> {
        let slope = (e1 - s1).try_div(&(e0 - s0))?;
        let offset = s1 - &(&slope * s0);
        Affine::new(slope, offset)
    }
}

impl Piece for Affine {
    fn identity() -> Self {
        Affine {
            slope: QuadReal::one(),
            offset: QuadReal::zero(),
        }
    }
    fn translation(k: &BigInt) -> Self {
        Affine {
            slope: QuadReal::one(),
            offset: QuadReal::from_int(k.clone()),
        }
    }
    fn apply(&self, t: &QuadReal) -> ExtReal {
        ExtReal::Finite(&(&self.slope * t) + &self.offset)
    }
    fn apply_ext(&self, t: &ExtReal) -> ExtReal {
        match t {
            ExtReal::Finite(x) => self.apply(x),
            other => other.clone(),
        }
    }
    fn compose(&self, o: &Self) -> Self {
        Affine {
            slope: &self.slope * &o.slope,
            offset: &(&self.slope * &o.offset) + &self.offset,
        }
    }
    fn inverse(&self) -> Self {
        let slope = self.slope.recip().expect("positive slope");
        let offset = -(&slope * &self.offset);
        Affine { slope, offset }
    }
    fn pole(&self) -> Option<QuadReal> {
        None
    }
    fn fixes_infinity(&self) -> bool {
        true
    }
    fn fixed_points(&self) -> Vec<QuadReal> {
        if self.slope.is_one() {
            return Vec::new();
        }
        let denom = QuadReal::one() - self.slope.clone();
        vec![self.offset.try_div(&denom).expect("slope differs from one")]
    }
    fn is_identity(&self) -> bool {
        self.slope.is_one() && self.offset.is_zero()
    }
    fn as_affine(&self) -> Option<(QuadReal, QuadReal)> {
        Some((self.slope.clone(), self.offset.clone()))
    }
    fn as_mob(&self) -> Option<Mob> {
        let zero = QuadReal::zero();
        let one = QuadReal::one();
        Mob::from_rational([&self.slope, &self.offset, &zero, &one]).ok()
    }
    fn parse_literal(text: &str) -> Result<Self> {
        let [a, b, c, d] = split_matrix(text)?;
        let bad = |msg: &str| Error::Parse {
            line: 1,
            msg: format!("{msg} in {text:?}"),
        };
        let [a, b, c, d] = [a, b, c, d].map(|s| parse_quad(s).map_err(Error::from));
        let (a, b, c, d) = (a?, b?, c?, d?);
        if !c.is_zero() {
            return Err(bad("affine piece needs c = 0"));
        }
        let slope = a.try_div(&d).map_err(|_| bad("zero d entry"))?;
        let offset = b.try_div(&d)?;
        Affine::new(slope, offset)
    }
}

/// The four entry strings of a `[[a,b],[c,d]]` literal.
pub(crate) fn split_matrix(text: &str) -> Result<[&str; 4]> {
    let bad = || Error::Parse {
        line: 1,
        msg: format!("expected [[a,b],[c,d]], got {text:?}"),
    };
    let inner = text
        .trim()
        .strip_prefix("[[")
        .and_then(|s| s.strip_suffix("]]"))
        .ok_or_else(bad)?;
    let (r1, r2) = inner.split_once("],[").ok_or_else(bad)?;
    let (a, b) = r1.split_once(',').ok_or_else(bad)?;
    let (c, d) = r2.split_once(',').ok_or_else(bad)?;
    Ok([a, b, c, d])
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[0,1]]", self.slope, self.offset)
    }
}

impl fmt::Debug for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> QuadReal {
        parse_quad(s).unwrap()
    }

    #[test]
    fn affine_group_operations() {
        let tau = q("(-1+1*sqrt(5))/2");
        let f = Affine::new(tau.clone(), q("1/2")).unwrap();
        assert!(f.compose(&f.inverse()).is_identity());
        assert_eq!(f.fixed_points().len(), 1);
        let x = &f.fixed_points()[0];
        assert_eq!(f.at(x), *x);
        assert_eq!(Affine::translation(&BigInt::from(2)).at(&tau), q("(3+1*sqrt(5))/2"));
    }

    #[test]
    fn affine_literal_round_trip() {
        let f = Affine::new(q("(1+1*sqrt(5))/2"), q("-3/4")).unwrap();
        let text = f.to_string();
        assert_eq!(text, "[[(1+1*sqrt(5))/2,-3/4],[0,1]]");
        assert_eq!(Affine::parse_literal(&text).unwrap(), f);
        assert!(Affine::parse_literal("[[1,0],[1,1]]").is_err());
    }

    #[test]
    fn rational_affine_converts_to_matrix() {
        let f = Affine::new(q("2"), q("1/4")).unwrap();
        assert_eq!(f.as_mob().unwrap(), Mob::from_ints(8, 1, 0, 4));
        let g = Affine::new(q("1*sqrt(2)"), q("0")).unwrap();
        assert!(g.as_mob().is_none());
    }
}
