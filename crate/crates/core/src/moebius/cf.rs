//! Continued fractions of quadratic irrationals, P_Z witnesses and
//! stabilizer generators.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Mob;
use crate::error::{Error, Result};
use crate::exactnum::{isqrt, rational_between, ExtReal, QuadReal};

/// `x = [pre; period, period, …]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CfExpansion {
    pub pre: Vec<BigInt>,
    pub period: Vec<BigInt>,
}

impl std::fmt::Display for CfExpansion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let list = |v: &[BigInt]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        write!(f, "pre=[{}] period=[{}]", list(&self.pre), list(&self.period))
    }
}

/// Raw integer matrix; continued-fraction products have determinant ±1,
/// which [`Mob`] cannot hold.
type Mat = [BigInt; 4];

fn mat_mul(x: &Mat, y: &Mat) -> Mat {
    [
        &x[0] * &y[0] + &x[1] * &y[2],
        &x[0] * &y[1] + &x[1] * &y[3],
        &x[2] * &y[0] + &x[3] * &y[2],
        &x[2] * &y[1] + &x[3] * &y[3],
    ]
}

fn mat_id() -> Mat {
    [BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one()]
}

/// `Π [[a_i, 1], [1, 0]]`, multiplied as a balanced tree so long periods
/// stay quasi-linear.
fn cf_matrix(quotients: &[BigInt]) -> Mat {
    match quotients.len() {
        0 => mat_id(),
        1 => [quotients[0].clone(), BigInt::one(), BigInt::one(), BigInt::zero()],
        n => {
            let (l, r) = quotients.split_at(n / 2);
            mat_mul(&cf_matrix(l), &cf_matrix(r))
        }
    }
}

fn mat_det(m: &Mat) -> BigInt {
    &m[0] * &m[3] - &m[1] * &m[2]
}

/// Inverse of a determinant ±1 matrix.
fn mat_inv_unimodular(m: &Mat) -> Mat {
    let s = mat_det(m);
    [&m[3] * &s, -&m[1] * &s, -&m[2] * &s, &m[0] * &s]
}

fn mat_apply(m: &Mat, t: &QuadReal) -> QuadReal {
    let num = t.scale(&m[0]).add_int(&m[1]);
    let den = t.scale(&m[2]).add_int(&m[3]);
    num / den
}

/// Eventually periodic expansion via the exact `(P + √D)/Q` recurrence.
pub fn cf_expand(x: &QuadReal) -> Result<CfExpansion> {
    if x.is_rational() {
        return Err(Error::RationalInput);
    }
    // x = (P0 + √D0)/Q0 after moving the sign of q into P0 and Q0.
    let s = if x.q().is_positive() { BigInt::one() } else { -BigInt::one() };
    let p0 = x.p() * &s;
    let q0 = x.r() * &s;
    let d0 = x.q() * x.q() * x.radicand();
    // Rescale so that Q | D − P².
    let q0a = q0.abs();
    let mut p = &p0 * &q0a;
    let mut q = &q0 * &q0a;
    let d = &d0 * &q0 * &q0;
    let sd = isqrt(&d);

    let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
    let mut quotients = Vec::new();
    loop {
        if let Some(&start) = seen.get(&(p.clone(), q.clone())) {
            let period = quotients.split_off(start);
            return Ok(CfExpansion {
                pre: quotients,
                period,
            });
        }
        seen.insert((p.clone(), q.clone()), quotients.len());
        // floor((P + √D)/Q); √D lies strictly between sd and sd + 1.
        let a = if q.is_positive() {
            (&p + &sd).div_floor(&q)
        } else {
            (-&p - &sd - BigInt::one()).div_floor(&-&q)
        };
        let p_next = &a * &q - &p;
        let q_next = (&d - &p_next * &p_next) / &q;
        quotients.push(a);
        p = p_next;
        q = q_next;
    }
}

/// Value of `[pre; period…]` rebuilt from the periodic tail's fixed point.
pub fn cf_value(cf: &CfExpansion) -> QuadReal {
    assert!(!cf.period.is_empty(), "empty period");
    let m = cf_matrix(&cf.period);
    // Purely periodic tails are reduced: the tail is the root above one.
    let roots = QuadReal::quadratic_roots(&m[2], &(&m[3] - &m[0]), &-&m[1]);
    let tail = roots.into_iter().max().expect("periodic tail has real roots");
    mat_apply(&cf_matrix(&cf.pre), &tail)
}

/// Stabilizer matrix from one period, squared when the period is odd,
/// conjugated by the preperiod.
fn one_period_witness(cf: &CfExpansion) -> Mob {
    let mut m = cf_matrix(&cf.period);
    if mat_det(&m).is_negative() {
        m = mat_mul(&m, &m);
    }
    let pre = cf_matrix(&cf.pre);
    let a = mat_mul(&mat_mul(&pre, &m), &mat_inv_unimodular(&pre));
    let [a, b, c, d] = a;
    Mob::new(a, b, c, d).expect("determinant one")
}

/// A hyperbolic `A ∈ PSL(2, Z)` with `A x = x`; errors for rationals.
pub fn pz_witness(x: &QuadReal) -> Result<Mob> {
    match cf_expand(x) {
        Ok(cf) => Ok(one_period_witness(&cf)),
        Err(_) => Err(Error::NotInPZ(x.to_string())),
    }
}

pub fn is_in_pz(x: &QuadReal) -> bool {
    !x.is_rational()
}

/// The generator `f_x` of `PSL(2, Z)_x`, oriented so that `f_x(y) ≥ y`
/// between `x` and its conjugate.
pub fn stabilizer_generator(x: &QuadReal) -> Result<Mob> {
    let a = pz_witness(x)?;
    let xc = x.conj();
    let (lo, hi) = if xc < *x { (xc, x.clone()) } else { (x.clone(), xc) };
    let y = rational_between(&ExtReal::Finite(lo), &ExtReal::Finite(hi));
    if a.at(&y) >= y {
        Ok(a)
    } else {
        Ok(a.inverse())
    }
}

/// `V = [[m, −m d − 1], [1, −d]]`: `t ↦ m − 1/(t − d)`, with `m` the least
/// integer above `lower_bound` such that `|m − d| > 2`.
pub fn aux_hyperbolic(d: &BigInt, lower_bound: &QuadReal) -> Mob {
    let two = BigInt::from(2);
    let mut m: BigInt = lower_bound.floor() + BigInt::one();
    while (&m - d).abs() <= two {
        m += 1;
    }
    let b = -(&m * d) - BigInt::one();
    Mob::new(m, b, BigInt::one(), -d).expect("determinant one")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::parse_quad;
    use crate::moebius::MobClass;

    fn q(s: &str) -> QuadReal {
        parse_quad(s).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&k| BigInt::from(k)).collect()
    }

    #[test]
    fn long_period_round_trip() {
        let x = q("(19+20*sqrt(10))/10");
        let cf = cf_expand(&x).unwrap();
        assert_eq!(cf.period.len(), 316);
        assert_eq!(cf_value(&cf), x);
    }

    #[test]
    fn classical_expansions() {
        let phi = q("(1+1*sqrt(5))/2");
        let cf = cf_expand(&phi).unwrap();
        assert_eq!((cf.pre.clone(), cf.period.clone()), (ints(&[]), ints(&[1])));
        assert_eq!(cf_value(&cf), phi);
        let r2 = q("1*sqrt(2)");
        let cf = cf_expand(&r2).unwrap();
        assert_eq!((cf.pre.clone(), cf.period.clone()), (ints(&[1]), ints(&[2])));
        assert_eq!(cf_value(&cf), r2);
        for s in ["(1+1*sqrt(3))/2", "-1*sqrt(7)/3", "(-17+5*sqrt(13))/11"] {
            assert_eq!(cf_value(&cf_expand(&q(s)).unwrap()), q(s));
        }
        assert_eq!(cf_expand(&q("3/7")), Err(Error::RationalInput));
    }

    #[test]
    fn witnesses_fix_their_point() {
        assert_eq!(pz_witness(&q("(1+1*sqrt(5))/2")).unwrap(), Mob::from_ints(2, 1, 1, 1));
        assert_eq!(pz_witness(&q("1*sqrt(2)")).unwrap(), Mob::from_ints(3, 4, 2, 3));
        for s in ["(1+1*sqrt(3))/2", "1-1*sqrt(2)", "(-17+5*sqrt(13))/11"] {
            let x = q(s);
            let a = pz_witness(&x).unwrap();
            assert_eq!(a.classify(), MobClass::Hyperbolic);
            assert_eq!(a.at(&x), x);
        }
        assert!(matches!(pz_witness(&q("1/2")), Err(Error::NotInPZ(_))));
    }

    #[test]
    fn stabilizer_orientation() {
        assert_eq!(stabilizer_generator(&q("(1+1*sqrt(5))/2")).unwrap(), Mob::from_ints(2, 1, 1, 1));
        let f = stabilizer_generator(&q("1*sqrt(2)")).unwrap();
        assert_eq!(f, Mob::from_ints(3, 4, 2, 3));
        assert_eq!(f.at(&QuadReal::zero()), q("4/3"));
        // Conjugate point: same generator up to orientation.
        let g = stabilizer_generator(&q("-1*sqrt(2)")).unwrap();
        assert_eq!(g, f);
    }

    #[test]
    fn auxiliary_matrices() {
        assert_eq!(aux_hyperbolic(&0.into(), &q("3")), Mob::from_ints(4, -1, 1, 0));
        assert_eq!(aux_hyperbolic(&2.into(), &q("5")), Mob::from_ints(6, -13, 1, -2));
        assert_eq!(aux_hyperbolic(&0.into(), &q("-1")), Mob::from_ints(3, -1, 1, 0));
        let v = aux_hyperbolic(&2.into(), &q("5"));
        assert!(v.is_unimodular());
        assert_eq!(v.classify(), MobClass::Hyperbolic);
    }
}
