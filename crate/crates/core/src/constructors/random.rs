//! Seeded random elements for the property suites and `igv gen`.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::Signed;
use rand::seq::SliceRandom;
use rand::Rng;

use super::bridge::bridge_any;
use super::connector::{b01, connector, make_end_offset, make_gi1};
use super::tree::{fn_beta_preimage, random_ftau_element, random_fn_element, tree_pair_to_map, NTree};
use crate::error::{Error, Result};
use crate::exactnum::{int_pow, GoldenElt, QuadReal};
use crate::invariants::{ceil_diff, fn_orbit_class, oriented_stabilizer};
use crate::moebius::Mob;
use crate::piecewise::{Affine, Domain, GroupTag, PwMap};

const SQUAREFREE: [i64; 12] = [2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19];

/// A quadratic irrational `(p + q√d)/r` with small coefficients.
pub fn random_pz_point<R: Rng + ?Sized>(rng: &mut R) -> QuadReal {
    let d = *SQUAREFREE.choose(rng).expect("nonempty");
    let q = loop {
        let q: i64 = rng.gen_range(-3..=3);
        if q != 0 {
            break q;
        }
    };
    QuadReal::from_parts(rng.gen_range(-5..=5), q, d, rng.gen_range(1..=4))
}

pub fn random_rational<R: Rng + ?Sized>(rng: &mut R, num: i64, den: i64) -> QuadReal {
    QuadReal::ratio(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

/// `a + bτ ∈ (0, 1)` with `0 < |b| ≤ bound`; `a` is then forced.
pub fn random_golden_unit<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> GoldenElt {
    let b = loop {
        let b = rng.gen_range(-bound..=bound);
        if b != 0 {
            break b;
        }
    };
    let bt = GoldenElt::from_ints(0, b).to_quad();
    let a = -bt.floor();
    GoldenElt::new(a, BigInt::from(b))
}

/// A word of length `len` in `T = t + 1` and `S = −1/t`, ending with the
/// translation that puts `h(x)` into `[0, 1)`.
pub fn random_unimodular_at<R: Rng + ?Sized>(x: &QuadReal, len: usize, rng: &mut R) -> Mob {
    let s = Mob::from_ints(0, -1, 1, 0);
    let mut h = Mob::identity();
    for _ in 0..len {
        let k = rng.gen_range(-2..=2);
        h = s.compose(&Mob::translation(&BigInt::from(k))).compose(&h);
    }
    let y = h.at(x);
    Mob::translation(&-y.floor()).compose(&h)
}

/// `T`, `B₀₁` and its integer translates, the compactly supported
/// `B₀₁ ∘ (T B₀₁ T⁻¹)⁻¹`, and one connector.
pub fn hz_generators() -> &'static [PwMap] {
    static GENS: OnceLock<Vec<PwMap>> = OnceLock::new();
    GENS.get_or_init(|| {
        let t = PwMap::translation(1);
        let b = b01();
        let shifted = |k: i64| b.conjugate(&PwMap::translation(k)).expect("same domain");
        let compact = b.compose(&shifted(1).invert()).expect("same domain");
        let sqrt2 = QuadReal::sqrt_of(2).expect("non-square");
        let conn = connector(&sqrt2, &Mob::from_ints(1, -1, 1, 0), 3, GroupTag::HZ1).expect("fixed connector");
        let (s1, s2) = (shifted(1), shifted(-1));
        vec![t, b, s1, s2, compact, conn]
    })
}

fn random_word<R: Rng + ?Sized>(gens: &[PwMap], len: usize, domain: Domain, rng: &mut R) -> PwMap {
    let mut w = PwMap::identity(domain);
    for _ in 0..len {
        let g = gens.choose(rng).expect("nonempty");
        let g = if rng.gen() { g.clone() } else { g.invert() };
        w = w.compose(&g).expect("same domain");
    }
    w
}

pub fn random_hz_word<R: Rng + ?Sized>(len: usize, rng: &mut R) -> PwMap {
    random_word(hz_generators(), len, Domain::RealLine, rng)
}

/// A connector `g ∈ G₁ ∩ HZ` at `x` with a random target `h(x)`.
pub fn random_connector<R: Rng + ?Sized>(x: &QuadReal, rng: &mut R) -> Result<PwMap> {
    let mut last = Error::BridgeFail("no attempt".into());
    for _ in 0..8 {
        let len = rng.gen_range(0..=3);
        let h = random_unimodular_at(x, len, rng);
        let y = h.at(x);
        let x1 = x.add_int(&BigInt::from(1));
        // Least m with x + 1 < y + m.
        let mut m: BigInt = x1.floor() - y.floor();
        while y.add_int(&m) <= x1 {
            m += 1;
        }
        while y.add_int(&(&m - 1)) > x1 {
            m -= 1;
        }
        let m = i64::try_from(m).map_err(|_| Error::BadShift("shift out of range".into()))?;
        match connector(x, &h, m, GroupTag::HZ1) {
            Ok(g) => return Ok(g),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// A `G₁ ∩ HZ` element: a connector at one of a few fixed points, possibly
/// multiplied by a translation and conjugated by an end-offset element.
pub fn random_hz_g1<R: Rng + ?Sized>(rng: &mut R) -> PwMap {
    let bases = ["(1+1*sqrt(5))/2", "1*sqrt(2)", "1+1*sqrt(3)"];
    loop {
        let x = crate::exactnum::parse_quad(bases.choose(rng).expect("nonempty")).expect("literal");
        let Ok(g) = random_connector(&x, rng) else {
            continue;
        };
        let (i, j) = (rng.gen_range(-1..=1), rng.gen_range(-1..=1));
        let e = make_end_offset(i, j, GroupTag::HZ).expect("HZ end offset");
        return g.conjugate(&e).expect("same domain");
    }
}

fn increasing_rationals<R: Rng + ?Sized>(lo: &QuadReal, hi: &QuadReal, k: usize, rng: &mut R) -> Vec<QuadReal> {
    let den = 12i64;
    let span = hi - lo;
    let mut out: Vec<QuadReal> = (0..k)
        .map(|_| lo + &span.try_mul(&QuadReal::ratio(rng.gen_range(1..den), den)).expect("rational"))
        .collect();
    out.sort();
    out.dedup();
    out
}

fn affine_mob(s0: &QuadReal, e0: &QuadReal, s1: &QuadReal, e1: &QuadReal) -> Mob {
    let a = Affine::between(s0, e0, s1, e1).expect("increasing");
    Mob::from_rational([a.slope(), a.offset(), &QuadReal::zero(), &QuadReal::one()]).expect("rational")
}

/// Piecewise affine through matched increasing point lists.
fn pl_through(domain: Domain, src: &[QuadReal], dst: &[QuadReal]) -> PwMap {
    let pieces = src
        .windows(2)
        .zip(dst.windows(2))
        .map(|(s, d)| affine_mob(&s[0], &s[1], &d[0], &d[1]))
        .collect();
    PwMap::new(domain, src[1..src.len() - 1].to_vec(), pieces).expect("valid PL map")
}

/// A rational PL self-map of `[s, s + 1]`.
pub fn random_segment_map<R: Rng + ?Sized>(s: &QuadReal, rng: &mut R) -> PwMap {
    let e = s.add_int(&BigInt::from(1));
    loop {
        let k = rng.gen_range(1..=3);
        let a = increasing_rationals(s, &e, k, rng);
        let b = increasing_rationals(s, &e, k, rng);
        if a.len() != b.len() {
            continue;
        }
        let src: Vec<_> = std::iter::once(s.clone()).chain(a).chain([e.clone()]).collect();
        let dst: Vec<_> = std::iter::once(s.clone()).chain(b).chain([e.clone()]).collect();
        return pl_through(Domain::Segment(s.clone(), e.clone()), &src, &dst);
    }
}

/// A self-map of `[x, x + 1]` in the piecewise `PSL(2, Z)` world: a power
/// of the stabilizer of `x` below the identity, then a power of the one of
/// `x + 1` above it, bridged inside the segment. Falls back to the identity
/// when every sampled pair needs large coefficients.
pub fn random_hz_segment_map<R: Rng + ?Sized>(x: &QuadReal, rng: &mut R) -> PwMap {
    let x1 = x.add_int(&BigInt::from(1));
    let domain = Domain::Segment(x.clone(), x1.clone());
    let (Ok(sx), Ok(sy)) = (oriented_stabilizer(x), oriented_stabilizer(&x1)) else {
        return PwMap::identity(domain);
    };
    let bound = BigInt::from(1_000_000_000u64);
    for _ in 0..8 {
        let (u, w) = (sx.pow(-rng.gen_range(1..=2)), sy.pow(-rng.gen_range(1..=2)));
        // Crossings are roots of u⁻¹w; keep their discriminants small.
        if u.inverse().compose(&w).trace().abs() > bound {
            continue;
        }
        let Ok(b) = bridge_any(&u, &w, x, &x1) else {
            continue;
        };
        if let Ok(f) = PwMap::new(domain.clone(), b.breaks, b.pieces) {
            return f;
        }
    }
    PwMap::identity(domain)
}

/// A rational PL map of the line with germs `t + i`, `t + j`.
pub fn random_ppq_element<R: Rng + ?Sized>(rng: &mut R) -> PwMap {
    let (i, j): (i64, i64) = (rng.gen_range(-2..=2), rng.gen_range(-2..=2));
    let p0 = QuadReal::from_int(rng.gen_range(-3..=0));
    let pk = p0.add_int(&BigInt::from(5));
    loop {
        let k = rng.gen_range(1..=3);
        let inner = increasing_rationals(&p0, &pk, k, rng);
        let (q0, qk) = (p0.add_int(&BigInt::from(i)), pk.add_int(&BigInt::from(j)));
        let images = increasing_rationals(&q0, &qk, k, rng);
        if inner.len() != images.len() {
            continue;
        }
        let src: Vec<_> = std::iter::once(p0.clone()).chain(inner).chain([pk.clone()]).collect();
        let dst: Vec<_> = std::iter::once(q0.clone()).chain(images).chain([qk]).collect();
        let mut breaks = src.clone();
        let mut pieces = vec![Mob::translation(&BigInt::from(i))];
        pieces.extend(src.windows(2).zip(dst.windows(2)).map(|(s, d)| affine_mob(&s[0], &s[1], &d[0], &d[1])));
        pieces.push(Mob::translation(&BigInt::from(j)));
        breaks.dedup();
        return PwMap::new(Domain::RealLine, breaks, pieces).expect("valid PL map");
    }
}

/// A `G₁ ∩ PPQ1` element: a rational connector conjugated by a random PPQ
/// element.
pub fn random_ppq_g1<R: Rng + ?Sized>(rng: &mut R) -> PwMap {
    let x = QuadReal::ratio(rng.gen_range(-6..=6), rng.gen_range(1..=5));
    let y = QuadReal::ratio(rng.gen_range(0..7), 7);
    let h = Mob::from_rational([&QuadReal::one(), &(&y - &x), &QuadReal::zero(), &QuadReal::one()]).expect("rational");
    let x1 = x.add_int(&BigInt::from(1));
    let mut m = 1i64;
    while y.add_int(&BigInt::from(m)) <= x1 {
        m += 1;
    }
    while y.add_int(&BigInt::from(m - 1)) > x1 {
        m -= 1;
    }
    let g = connector(&x, &h, m, GroupTag::PPQ1).expect("rational connector");
    g.conjugate(&random_ppq_element(rng)).expect("same domain")
}

/// The base element of `F_{n,1,−1}`: leaf `[0, 1/n²]` onto `[0, 1/n]`, leaf
/// `[1 − 1/n, 1]` onto `[1 − 1/n², 1]`.
pub fn fn_base(n: u32) -> PwMap {
    let mut a = NTree::leaf(n);
    a.split_leaf(0);
    a.split_leaf(0);
    let mut b = NTree::leaf(n);
    b.split_leaf(0);
    b.split_leaf(n as usize - 1);
    tree_pair_to_map(&a, &b).expect("equal leaf counts")
}

/// An `n`-adic point of `(0, 1)` with denominator `n^k`, `1 ≤ k ≤ depth`.
pub fn random_n_adic<R: Rng + ?Sized>(n: u32, depth: u32, rng: &mut R) -> QuadReal {
    let k = rng.gen_range(1..=depth);
    let den = BigInt::from(n).pow(k);
    let top: u64 = den.clone().try_into().expect("small denominator");
    QuadReal::ratio(rng.gen_range(1..top), den)
}

/// A `β`-preimage for a random target: a random `n`-adic point `w` of the
/// first bin in the orbit class of `x`, rescaled. Such targets need not be
/// `n`-adic; they lie in `Z[1/n]/(n − 1)`.
pub fn random_fn11<R: Rng + ?Sized>(n: u32, x: &QuadReal, g0: &PwMap, rng: &mut R) -> PwMap {
    let class = fn_orbit_class(x, n).expect("n-adic point");
    let nb = BigInt::from(n);
    let start = QuadReal::one() - int_pow(&nb, -1);
    let depth = 4;
    let steps = i64::from(n - 1) * i64::from(n).pow(depth - 2);
    let scale = int_pow(&nb, 2).try_div(&QuadReal::from_int(n - 1)).expect("n > 1");
    loop {
        let w = &start + &int_pow(&nb, -(depth as i64)).scale(&BigInt::from(rng.gen_range(1..=steps)));
        if fn_orbit_class(&w, n).ok() != Some(class) {
            continue;
        }
        let y = (&w - &start).try_mul(&scale).expect("rational");
        if let Ok(f) = fn_beta_preimage(&y, x, g0, n) {
            return f;
        }
    }
}

pub fn random_fn_conjugator<R: Rng + ?Sized>(n: u32, rng: &mut R) -> PwMap {
    let carets = rng.gen_range(1..=5);
    random_fn_element(n, carets, rng)
}

/// `τ⁻¹t` up to `τ²`, then `τ(t − τ²) + τ`: the base element of
/// `F_{τ,1,−1}`.
pub fn ftau_base() -> PwMap<Affine> {
    let tau = |k| GoldenElt::tau_pow(k).to_quad();
    PwMap::new(
        Domain::UnitInterval,
        vec![tau(2)],
        vec![
            Affine::new(tau(-1), QuadReal::zero()).expect("positive slope"),
            Affine::new(tau(1), tau(2)).expect("positive slope"),
        ],
    )
    .expect("valid base element")
}

pub fn random_ftau_conjugator<R: Rng + ?Sized>(rng: &mut R) -> PwMap<Affine> {
    let carets = rng.gen_range(1..=4);
    random_ftau_element(carets, rng)
}

/// Generators of `G([v, ∞))` conjugators: the seed `g0` and translates
/// `T^k B₀₁ T^{−k}` supported right of `v`.
pub fn gi_generators(v: &QuadReal, g0: &PwMap) -> Vec<PwMap> {
    let b = b01();
    // T^k B₀₁ T^{−k} is the identity up to k + 1 − √2.
    let k = ceil_diff(v, &QuadReal::from_parts(1, -1, 2, 1));
    let k = i64::try_from(k).expect("small base point");
    let mut gens = vec![g0.clone()];
    for s in k..k + 2 {
        gens.push(b.conjugate(&PwMap::translation(s)).expect("same domain"));
    }
    gens
}

pub fn random_gi_conjugator<R: Rng + ?Sized>(v: &QuadReal, g0: &PwMap, len: usize, rng: &mut R) -> PwMap {
    random_word(&gi_generators(v, g0), len, Domain::RealLine, rng)
}

/// A `G(I)₁` element: the seed conjugated by a short word in `G(I)`.
pub fn random_gi1<R: Rng + ?Sized>(v: &QuadReal, g0: &PwMap, rng: &mut R) -> PwMap {
    let c = random_gi_conjugator(v, g0, 2, rng);
    let g = make_gi1(v).expect("v in P_Z");
    g.conjugate(&c).expect("same domain")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_elements_are_members() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for g in hz_generators() {
            assert!(g.is_member(GroupTag::HZ).is_ok());
        }
        for _ in 0..10 {
            let w = random_hz_word(4, &mut rng);
            assert!(w.is_member(GroupTag::HZ).is_ok(), "{}", w.serialize());
            let g = random_hz_g1(&mut rng);
            assert!(g.is_g1() && g.is_member(GroupTag::HZ1).is_ok());
            let p = random_ppq_g1(&mut rng);
            assert!(p.is_g1() && p.is_member(GroupTag::PPQ1).is_ok());
            let e = random_ppq_element(&mut rng);
            assert!(e.is_member(GroupTag::PPQ1).is_ok());
            let u = random_golden_unit(&mut rng, 1_000_000).to_quad();
            assert!(u.is_positive() && u < QuadReal::one());
        }
        for n in [2, 3, 5] {
            let g0 = fn_base(n);
            assert!(g0.in_f11(GroupTag::Fn(n)));
            let x = QuadReal::ratio(1, n);
            let f = random_fn11(n, &x, &g0, &mut rng);
            assert!(f.in_f11(GroupTag::Fn(n)));
        }
        assert!(ftau_base().in_f11(GroupTag::Ftau));
    }
}
