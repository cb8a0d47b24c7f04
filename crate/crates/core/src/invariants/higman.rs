//! Invariants of the Higman–Thompson groups `F_n`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{orbit_point, orbit_until, DEFAULT_CAP};
use crate::error::{Error, Result};
use crate::exactnum::{int_pow, is_n_adic, n_adic_cofactor, QuadReal};
use crate::piecewise::{GroupTag, Piece, PwMap};

fn require_f11<P: Piece>(f: &PwMap<P>, n: u32, what: &str) -> Result<()> {
    let tag = GroupTag::Fn(n);
    if let Err(v) = f.is_member(tag) {
        return Err(Error::NotInFn11(format!("{what}: {v}")));
    }
    if !f.in_f11(tag) {
        let ends = f.alpha_ends(tag)?;
        return Err(Error::NotInFn11(format!("{what}: end exponents {ends:?}, or not above the identity")));
    }
    Ok(())
}

fn require_point(x: &QuadReal, n: u32) -> Result<()> {
    if !is_n_adic(x, &BigInt::from(n)) {
        return Err(Error::NotNAdic(x.to_string()));
    }
    if !x.is_positive() || *x >= QuadReal::one() {
        return Err(Error::OutOfRange(x.to_string()));
    }
    Ok(())
}

/// `Φ_j(y)` for the bin `(1 − n^{−j}, 1 − n^{−j−1}]` holding `y ∈ (0, 1)`.
fn bin_rescale(y: &QuadReal, n: u32) -> QuadReal {
    let n = BigInt::from(n);
    let w = QuadReal::one() - y.clone();
    let mut j = 0i64;
    while w < int_pow(&n, -j - 1) {
        j += 1;
    }
    let start = QuadReal::one() - int_pow(&n, -j);
    let scale = int_pow(&n, j + 1).try_div(&QuadReal::from_int(&n - 1)).expect("n > 1");
    &(y - &start) * &scale
}

/// `β_x(f)` relative to `g0`: the rescaled bin position of the first
/// right-zone orbit point of `g0^{−i}(x)`, for the least `i` placing
/// `[g0^{−i−1}(x), g0^{−i}(x)]` in the left end zone of `f`.
pub fn beta_fn<P: Piece>(f: &PwMap<P>, g0: &PwMap<P>, x: &QuadReal, n: u32) -> Result<QuadReal> {
    require_f11(f, n, "f")?;
    require_f11(g0, n, "g0")?;
    require_point(x, n)?;
    let first = &f.breaks()[0];
    let back = g0.invert();
    let mut z = x.clone();
    let mut steps = 0;
    while z > *first {
        steps += 1;
        if steps > DEFAULT_CAP {
            return Err(Error::IterationCap(DEFAULT_CAP));
        }
        z = back.at(&z);
    }
    let (y, _) = orbit_until(f, z, f.breaks().last().expect("nonempty"), DEFAULT_CAP)?;
    Ok(bin_rescale(&y, n))
}

/// `β_x(f)` from explicit choices `(i, m)`: `Φ_j(f^m(g0^{−i}(x)))`.
pub fn beta_fn_at<P: Piece>(f: &PwMap<P>, g0: &PwMap<P>, x: &QuadReal, n: u32, i: u64, m: u64) -> Result<QuadReal> {
    require_f11(f, n, "f")?;
    require_f11(g0, n, "g0")?;
    require_point(x, n)?;
    let z = orbit_point(g0, x, -(i as i64));
    if z > f.breaks()[0] {
        return Err(Error::NotMonitorable(format!("g0^-{i}(x) = {z} is not in the left end zone")));
    }
    let y = orbit_point(f, &z, m as i64);
    if y < *f.breaks().last().expect("nonempty") {
        return Err(Error::NotMonitorable(format!("f^{m} image {y} is not in the right end zone")));
    }
    Ok(bin_rescale(&y, n))
}

/// The residue of `x` under `Z[1/n] → Z/(n − 1)`, `n ↦ 1`; it labels the
/// `F_n`-orbit of `x` in `(0, 1)`.
pub fn fn_orbit_class(x: &QuadReal, n: u32) -> Result<u32> {
    if n < 2 {
        return Err(Error::Usage(format!("arity {n} is below 2")));
    }
    require_point(x, n)?;
    let modulus = BigInt::from(n - 1);
    let cof = n_adic_cofactor(x.r(), &BigInt::from(n)).expect("n-adic point");
    Ok((x.p() * cof).mod_floor(&modulus).to_u32().expect("residue below n"))
}

pub fn fn_same_orbit(x: &QuadReal, y: &QuadReal, n: u32) -> Result<bool> {
    Ok(fn_orbit_class(x, n)? == fn_orbit_class(y, n)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::parse_quad;
    use crate::moebius::Mob;
    use crate::piecewise::Domain;

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

    #[test]
    fn beta_fn_example() {
        let f = f2_element();
        let x = q("1/2");
        assert_eq!(beta_fn(&f, &f, &x, 2).unwrap(), q("1"));
        for (i, m) in [(1, 1), (1, 2), (2, 3), (3, 6)] {
            assert_eq!(beta_fn_at(&f, &f, &x, 2, i, m).unwrap(), q("1"), "i={i} m={m}");
        }
        let id: PwMap = PwMap::identity(Domain::UnitInterval);
        assert!(matches!(beta_fn(&id, &f, &x, 2), Err(Error::NotInFn11(_))));
        assert!(matches!(beta_fn(&f, &f, &q("1/3"), 2), Err(Error::NotNAdic(_))));
    }

    #[test]
    fn bins_are_half_open() {
        assert_eq!(bin_rescale(&q("1/2"), 2), q("1"));
        assert_eq!(bin_rescale(&q("5/8"), 2), q("1/2"));
        assert_eq!(bin_rescale(&q("1/3"), 3), q("1/2"));
    }

    #[test]
    fn orbit_classes() {
        assert_eq!(fn_orbit_class(&q("1/3"), 3).unwrap(), 1);
        assert_eq!(fn_orbit_class(&q("2/3"), 3).unwrap(), 0);
        assert!(fn_same_orbit(&q("1/9"), &q("1/3"), 3).unwrap());
        assert_eq!(fn_orbit_class(&q("3/8"), 2).unwrap(), 0);
        assert!(matches!(fn_orbit_class(&q("1/3"), 2), Err(Error::NotNAdic(_))));
        assert!(matches!(fn_orbit_class(&q("4/3"), 3), Err(Error::OutOfRange(_))));
    }
}
