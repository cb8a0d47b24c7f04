use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use super::{Domain, Piece, PwMap};
use crate::error::{Error, Result};
use crate::exactnum::{is_n_adic, GoldenElt, QuadReal};
use crate::moebius::{pz_witness, MobClass};

/// The groups the calculus works in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupTag {
    /// Piecewise `PSL(2, Q)`, rational breakpoints, slope-1 ends.
    PPQ1,
    /// Piecewise `PSL(2, Z)`.
    PZpw,
    /// Piecewise `PSL(2, Z)` with breakpoints in `P_Z`.
    HZ,
    /// `HZ` with translation ends; every affine `PSL(2, Z)` piece is a
    /// translation, so this coincides with `HZ`.
    HZ1,
    /// Slopes `nᵏ`, `n`-adic breakpoints, on `[0, 1]`.
    Fn(u32),
    /// Slopes `τᵏ`, breakpoints in `Z[τ]`, on `[0, 1]`.
    Ftau,
}

impl fmt::Display for GroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupTag::PPQ1 => write!(f, "PPQ1"),
            GroupTag::PZpw => write!(f, "PZpw"),
            GroupTag::HZ => write!(f, "HZ"),
            GroupTag::HZ1 => write!(f, "HZ1"),
            GroupTag::Fn(n) => write!(f, "Fn({n})"),
            GroupTag::Ftau => write!(f, "Ftau"),
        }
    }
}

impl FromStr for GroupTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "PPQ1" => GroupTag::PPQ1,
            "PZpw" => GroupTag::PZpw,
            "HZ" => GroupTag::HZ,
            "HZ1" => GroupTag::HZ1,
            "Ftau" => GroupTag::Ftau,
            _ => {
                let n = s
                    .strip_prefix("Fn(")
                    .and_then(|r| r.strip_suffix(')'))
                    .and_then(|n| n.parse::<u32>().ok())
                    .filter(|&n| n >= 2)
                    .ok_or_else(|| Error::Usage(format!("unknown group tag {s:?}")))?;
                GroupTag::Fn(n)
            }
        })
    }
}

impl GroupTag {
    pub fn domain(&self) -> Domain {
        match self {
            GroupTag::Fn(_) | GroupTag::Ftau => Domain::UnitInterval,
            _ => Domain::RealLine,
        }
    }

    /// Base `b > 1` with slopes `bᵏ`: `n`, or `τ⁻¹` for `F_τ`.
    pub fn slope_base(&self) -> Option<QuadReal> {
        match self {
            GroupTag::Fn(n) => Some(QuadReal::from_int(*n)),
            GroupTag::Ftau => Some(GoldenElt::tau_pow(-1).to_quad()),
            _ => None,
        }
    }
}

/// The first piece or breakpoint that breaks membership.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation(pub String);

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// `k` with `x = baseᵏ`, for `base > 1` in the field of `x`.
pub fn log_base(x: &QuadReal, base: &QuadReal) -> Option<i64> {
    if !x.is_positive() {
        return None;
    }
    if !x.is_rational() && (base.is_rational() || base.radicand() != x.radicand()) {
        return None;
    }
    let one = QuadReal::one();
    let mut v = x.clone();
    let mut k = 0i64;
    while v > one {
        v = v.try_div(base).ok()?;
        k += 1;
    }
    while v < one {
        v = v.try_mul(base).ok()?;
        k -= 1;
    }
    (v == one).then_some(k)
}

fn fail<T>(msg: String) -> std::result::Result<T, Violation> {
    Err(Violation(msg))
}

impl<P: Piece> PwMap<P> {
    pub fn is_member(&self, tag: GroupTag) -> std::result::Result<(), Violation> {
        let want = tag.domain();
        if *self.domain() != want {
            return fail(format!("domain {:?}, {tag} needs {want:?}", self.domain()));
        }
        match tag {
            GroupTag::PPQ1 => {
                for p in self.pieces() {
                    if p.as_mob().is_none() {
                        return fail(format!("piece {p} is not in PSL(2,Q)"));
                    }
                }
                for b in self.breaks() {
                    if !b.is_rational() {
                        return fail(format!("breakpoint {b} is not rational"));
                    }
                }
                let ends = [self.pieces().first(), self.pieces().last()];
                for p in ends.into_iter().flatten() {
                    let slope = p.as_affine().map(|(s, _)| s);
                    if !slope.is_some_and(|s| s.is_one()) {
                        return fail(format!("end piece {p} does not have slope 1"));
                    }
                }
            }
            GroupTag::PZpw | GroupTag::HZ | GroupTag::HZ1 => {
                for p in self.pieces() {
                    if !p.as_mob().is_some_and(|m| m.is_unimodular()) {
                        return fail(format!("piece {p} is not in PSL(2,Z)"));
                    }
                }
                if tag != GroupTag::PZpw {
                    for b in self.breaks() {
                        certify_pz(b)?;
                    }
                }
            }
            GroupTag::Fn(n) => {
                let base = tag.slope_base().expect("slope base");
                let n = BigInt::from(n);
                for p in self.pieces() {
                    match p.as_affine() {
                        Some((s, o)) if log_base(&s, &base).is_some() && is_n_adic(&o, &n) => {}
                        _ => return fail(format!("piece {p} is not an {n}-adic affine map with slope a power of {n}")),
                    }
                }
                for b in self.breaks() {
                    if !is_n_adic(b, &n) {
                        return fail(format!("breakpoint {b} is not {n}-adic"));
                    }
                }
            }
            GroupTag::Ftau => {
                let base = tag.slope_base().expect("slope base");
                for p in self.pieces() {
                    match p.as_affine() {
                        Some((s, _)) if log_base(&s, &base).is_some() => {}
                        _ => return fail(format!("piece {p} is not affine with slope a power of tau")),
                    }
                }
                for b in self.breaks() {
                    if GoldenElt::from_quad(b).is_none() {
                        return fail(format!("breakpoint {b} is not in Z[tau]"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_in(&self, tag: GroupTag) -> bool {
        self.is_member(tag).is_ok()
    }

    /// Exponents of the end slopes `f'(0)`, `f'(1)` in the tag's base.
    pub fn alpha_ends(&self, tag: GroupTag) -> Result<(i64, i64)> {
        let base = tag
            .slope_base()
            .ok_or_else(|| Error::Usage(format!("{tag} has no slope base")))?;
        if *self.domain() != Domain::UnitInterval {
            return Err(Error::DomainMismatch);
        }
        let exp = |p: &P| -> Result<i64> {
            let (s, _) = p
                .as_affine()
                .ok_or_else(|| Error::MalformedSlope(p.to_string()))?;
            log_base(&s, &base).ok_or_else(|| Error::MalformedSlope(s.to_string()))
        };
        let pieces = self.pieces();
        Ok((exp(&pieces[0])?, exp(&pieces[pieces.len() - 1])?))
    }

    /// Membership in `F_{n,1,−1}` / `F_{τ,1,−1}`: `α = (1, −1)` and above
    /// the identity.
    pub fn in_f11(&self, tag: GroupTag) -> bool {
        self.is_in(tag) && self.alpha_ends(tag).ok() == Some((1, -1)) && self.dominates_identity()
    }
}

/// A hyperbolic witness that `b ∈ P_Z`, checked exactly.
pub fn certify_pz(b: &QuadReal) -> std::result::Result<(), Violation> {
    match pz_witness(b) {
        Ok(a) if a.classify() == MobClass::Hyperbolic && a.at(b) == *b => Ok(()),
        _ => fail(format!("breakpoint {b} is not in P_Z")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::parse_quad;
    use crate::moebius::Mob;
    use crate::piecewise::Affine;

    fn q(s: &str) -> QuadReal {
        parse_quad(s).unwrap()
    }

    fn f2_element() -> PwMap {
        PwMap::new(
            Domain::UnitInterval,
            vec![q("1/4"), q("1/2")],
            vec![Mob::from_ints(2, 0, 0, 1), Mob::from_ints(4, 1, 0, 4), Mob::from_ints(1, 1, 0, 2)],
        )
        .unwrap()
    }

    /// τ⁻¹t on [0,τ²], τt + τ² on [τ²,1].
    fn ftau_element() -> PwMap<Affine> {
        let tau = GoldenElt::tau().to_quad();
        let tau2 = GoldenElt::tau_pow(2).to_quad();
        PwMap::new(
            Domain::UnitInterval,
            vec![tau2.clone()],
            vec![
                Affine::new(GoldenElt::tau_pow(-1).to_quad(), QuadReal::zero()).unwrap(),
                Affine::new(tau, tau2).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn tag_names_round_trip() {
        for t in [GroupTag::PPQ1, GroupTag::PZpw, GroupTag::HZ, GroupTag::HZ1, GroupTag::Fn(3), GroupTag::Ftau] {
            assert_eq!(t.to_string().parse::<GroupTag>().unwrap(), t);
        }
        assert!("Fn(1)".parse::<GroupTag>().is_err());
    }

    #[test]
    fn membership_examples() {
        let t: PwMap = PwMap::translation(1);
        assert!(t.is_in(GroupTag::HZ1));
        // id, then the parabolic fixing 1/2, then t − 1 from 1 + √2/2 on.
        let g = PwMap::new(
            Domain::RealLine,
            vec![q("1/2"), q("(2+1*sqrt(2))/2")],
            vec![Mob::identity(), Mob::from_ints(3, -1, 4, -1), Mob::translation(&(-1).into())],
        )
        .unwrap();
        assert!(g.is_in(GroupTag::PZpw));
        let v = g.is_member(GroupTag::HZ).unwrap_err();
        assert!(v.0.contains("1/2"), "{v}");
        assert!(!g.is_in(GroupTag::PPQ1));
        let f2 = f2_element();
        assert!(f2.is_in(GroupTag::Fn(2)));
        assert!(!f2.is_in(GroupTag::Fn(3)));
        assert!(f2.is_member(GroupTag::HZ).is_err());
        assert!(ftau_element().is_in(GroupTag::Ftau));
        assert!(certify_pz(&q("1-1*sqrt(2)")).is_ok());
    }

    #[test]
    fn end_slope_exponents() {
        let id: PwMap = PwMap::identity(Domain::UnitInterval);
        assert_eq!(id.alpha_ends(GroupTag::Fn(2)).unwrap(), (0, 0));
        assert_eq!(f2_element().alpha_ends(GroupTag::Fn(2)).unwrap(), (1, -1));
        assert!(f2_element().in_f11(GroupTag::Fn(2)));
        assert_eq!(ftau_element().alpha_ends(GroupTag::Ftau).unwrap(), (1, -1));
        assert!(ftau_element().in_f11(GroupTag::Ftau));
        assert_eq!(log_base(&q("1/8"), &q("2")), Some(-3));
        assert_eq!(log_base(&q("2"), &q("4")), None);
    }
}
