//! The property suites. A trial returns `Err(counterexample)` on failure.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::Signed;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::oracle::FnOrbitOracle;
use crate::constructors::{
    b01, connector, fn_base, make_end_offset, make_gi1, random_fn11, random_fn_conjugator,
    random_fn_element, random_ftau_conjugator, random_ftau_element, random_gi1, random_gi_conjugator,
    random_golden_unit, random_hz_g1, random_hz_segment_map, random_hz_word, random_n_adic, random_ppq_element,
    random_pz_point, random_rational, random_segment_map, random_unimodular_at, reconstruct_via_monitoring,
    tree_pair_to_map, NTree,
};
use crate::exactnum::{parse_quad, GoldenElt, QuadReal};
use crate::invariants::{
    beta_fn, beta_hz, beta_tau, ceil_diff, embed_information, fn_same_orbit, gamma_hz, information, unique_rep,
    MonitorSpec,
};
use crate::moebius::{cf_expand, cf_value, pz_witness, stabilizer_generator, Mob, MobClass};
use crate::piecewise::{Affine, GroupTag, Interval, Piece, PwMap};
use crate::Error;

pub(crate) type Outcome = std::result::Result<(), String>;
pub(crate) type Trial = fn(&mut ChaCha8Rng, u64) -> Outcome;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)*) => {
        if !$cond {
            return Err(format!($($fmt)*));
        }
    };
}

/// `Err` values become counterexamples labelled with `what`.
fn must<T>(r: crate::Result<T>, what: impl FnOnce() -> String) -> std::result::Result<T, String> {
    r.map_err(|e| format!("{} error={e}", what()))
}

fn one_line(text: &str) -> String {
    text.trim_end().replace('\n', " | ")
}

fn show<P: Piece>(g: &PwMap<P>) -> String {
    one_line(&g.serialize())
}

pub(crate) fn lookup(name: &str) -> Option<Trial> {
    Some(match name {
        "exactnum" => exactnum,
        "moebius" => moebius,
        "piecewise" => piecewise,
        "unique-rep" => unique_rep_scan,
        "beta-invariance" => beta_invariance,
        "gamma-invariance" => gamma_invariance,
        "information-invariance" => information_invariance,
        "connector" => connector_post,
        "end-offset" => end_offset,
        "reconstruction" => reconstruction,
        "fn-orbit" => fn_orbit,
        "tree-pair" => tree_pair,
        _ => return None,
    })
}

const RADICANDS: [i64; 8] = [2, 3, 5, 6, 7, 10, 13, 21];

fn quad_in<R: Rng + ?Sized>(d: i64, rng: &mut R) -> QuadReal {
    QuadReal::from_parts(rng.gen_range(-20..=20), rng.gen_range(-5..=5), d, rng.gen_range(1..=6))
}

#[allow(clippy::eq_op)]
fn exactnum(rng: &mut ChaCha8Rng, _: u64) -> Outcome {
    let d = *RADICANDS.choose(rng).expect("nonempty");
    let (a, b, c) = (quad_in(d, rng), quad_in(d, rng), quad_in(d, rng));
    let ctx = format!("a={a} b={b} c={c}");
    ensure!(&(&a + &b) + &c == &a + &(&b + &c), "{ctx} law=add-assoc");
    ensure!(&a + &b == &b + &a, "{ctx} law=add-comm");
    ensure!(&(&a * &b) * &c == &a * &(&b * &c), "{ctx} law=mul-assoc");
    ensure!(&a * &(&b + &c) == &(&a * &b) + &(&a * &c), "{ctx} law=distrib");
    ensure!((&a - &a).is_zero(), "{ctx} law=sub-self");
    if !b.is_zero() {
        ensure!(&(&a / &b) * &b == a, "{ctx} law=div-mul");
    }
    ensure!(a.conj().conj() == a, "{ctx} law=conj-involution");
    ensure!((&a * &b).conj() == &a.conj() * &b.conj(), "{ctx} law=conj-mul");
    ensure!((a < b) == (&b - &a).is_positive(), "{ctx} law=order-vs-sign");
    let f = QuadReal::from_int(a.floor());
    ensure!(f <= a && a < f.add_int(&BigInt::from(1)), "{ctx} law=floor");
    let (af, bf) = (a.to_f64(), b.to_f64());
    if (af - bf).abs() > 1e-9 * (1.0 + af.abs().max(bf.abs())) {
        ensure!((a < b) == (af < bf), "{ctx} law=order-vs-float");
    }
    ensure!(parse_quad(&a.to_string()).ok() == Some(a.clone()), "{ctx} law=text-round-trip");

    // Comparison and integer gaps across fields.
    let d2 = *RADICANDS.choose(rng).expect("nonempty");
    let y = quad_in(d2, rng);
    let ctx = format!("x={a} y={y}");
    ensure!(a.cmp(&y) == y.cmp(&a).reverse(), "{ctx} law=cross-antisymmetry");
    let (xf, yf) = (a.to_f64(), y.to_f64());
    if (xf - yf).abs() > 1e-9 * (1.0 + xf.abs().max(yf.abs())) {
        ensure!((a < y) == (xf < yf), "{ctx} law=cross-order-vs-float");
    }
    let k = ceil_diff(&a, &y);
    ensure!(a.add_int(&-&k) <= y && a.add_int(&(1 - &k)) > y, "{ctx} k={k} law=ceil-diff");

    let g = GoldenElt::from_ints(rng.gen_range(-1000..=1000), rng.gen_range(-1000..=1000));
    let tau = GoldenElt::tau().to_quad();
    let ctx = format!("g={g}");
    ensure!(GoldenElt::from_quad(&g.to_quad()) == Some(g.clone()), "{ctx} law=golden-embed");
    ensure!(g.mul_tau().mul_tau_inv() == g, "{ctx} law=tau-inverse");
    ensure!(g.mul_tau().to_quad() == &g.to_quad() * &tau, "{ctx} law=tau-mul");
    Ok(())
}

/// Euclid's expansion of a rational, rebuilt from the back.
fn finite_cf_round_trip(r: &QuadReal) -> bool {
    let mut terms: Vec<BigInt> = Vec::new();
    let mut x = r.clone();
    loop {
        let a = x.floor();
        terms.push(a.clone());
        let rest = x.add_int(&-&a);
        if rest.is_zero() {
            break;
        }
        x = rest.recip().expect("nonzero");
    }
    let mut v = QuadReal::from_int(terms.pop().expect("one term"));
    while let Some(a) = terms.pop() {
        v = v.recip().expect("nonzero").add_int(&a);
    }
    v == *r
}

fn random_mob<R: Rng + ?Sized>(rng: &mut R) -> Mob {
    let s = Mob::from_ints(0, -1, 1, 0);
    let mut m = Mob::identity();
    for _ in 0..rng.gen_range(0..=4) {
        m = m.compose(&s).compose(&Mob::translation(&BigInt::from(rng.gen_range(-3..=3))));
    }
    m
}

fn moebius(rng: &mut ChaCha8Rng, index: u64) -> Outcome {
    if index.is_multiple_of(2) {
        let x = random_pz_point(rng);
        let a = must(pz_witness(&x), || format!("x={x} op=pz_witness"))?;
        ensure!(a.at(&x) == x, "x={x} A={a} law=witness-fixes");
        ensure!(a.trace().abs() > BigInt::from(2), "x={x} A={a} law=hyperbolic");
        ensure!(a.det() == BigInt::from(1), "x={x} A={a} law=det-one");
        let cf = must(cf_expand(&x), || format!("x={x} op=cf_expand"))?;
        ensure!(cf_value(&cf) == x, "x={x} cf={cf} law=cf-round-trip");
        let s = must(stabilizer_generator(&x), || format!("x={x} op=stabilizer"))?;
        ensure!(s.at(&x) == x && s.classify() == MobClass::Hyperbolic, "x={x} S={s} law=stabilizer");
    } else {
        let r = random_rational(rng, 60, 30);
        ensure!(matches!(pz_witness(&r), Err(Error::NotInPZ(_))), "x={r} law=rational-not-in-pz");
        ensure!(matches!(cf_expand(&r), Err(Error::RationalInput)), "x={r} law=rational-cf-rejected");
        ensure!(finite_cf_round_trip(&r), "x={r} law=finite-cf-round-trip");
    }
    let (m, n) = (random_mob(rng), random_mob(rng));
    let t = random_rational(rng, 20, 7);
    let ctx = format!("M={m} N={n} t={t}");
    ensure!(m.compose(&n).apply(&t) == m.apply_ext(&n.apply(&t)), "{ctx} law=action-homomorphism");
    ensure!(m.compose(&m.inverse()).is_identity(), "{ctx} law=inverse");
    ensure!(m.compose(&n).inverse() == n.inverse().compose(&m.inverse()), "{ctx} law=inverse-of-product");
    let expect = match m.trace().abs().cmp(&BigInt::from(2)) {
        std::cmp::Ordering::Greater => MobClass::Hyperbolic,
        std::cmp::Ordering::Less => MobClass::Elliptic,
        std::cmp::Ordering::Equal if m.is_identity() => MobClass::Identity,
        std::cmp::Ordering::Equal => MobClass::Parabolic,
    };
    ensure!(m.classify() == expect, "{ctx} law=classify-by-trace");
    Ok(())
}

fn group_laws<P: Piece>(
    f: &PwMap<P>,
    g: &PwMap<P>,
    h: &PwMap<P>,
    tags: &[GroupTag],
    points: &[QuadReal],
) -> Outcome {
    let ctx = || format!("tag={} f={} g={} h={}", tags[0], show(f), show(g), show(h));
    let c = |a: &PwMap<P>, b: &PwMap<P>| a.compose(b).map_err(|e| format!("{} error={e}", ctx()));
    let fg = c(f, g)?;
    ensure!(c(&fg, h)? == c(f, &c(g, h)?)?, "{} law=associativity", ctx());
    ensure!(c(f, &f.invert())?.is_identity() && c(&f.invert(), f)?.is_identity(), "{} law=inverse", ctx());
    for &tag in tags {
        if let Err(v) = fg.is_member(tag) {
            return Err(format!("{} law=closure member={tag} violation={v}", ctx()));
        }
    }
    ensure!(PwMap::<P>::parse(&fg.serialize()).ok().as_ref() == Some(&fg), "{} law=text-round-trip", ctx());
    let fi = f.invert();
    for t in points {
        ensure!(fg.at(t) == f.at(&g.at(t)), "{} t={t} law=evaluation-homomorphism", ctx());
        ensure!(fi.at(&f.at(t)) == *t, "{} t={t} law=evaluation-inverse", ctx());
    }
    Ok(())
}

fn line_points<R: Rng + ?Sized>(rng: &mut R) -> Vec<QuadReal> {
    let sqrt2 = QuadReal::sqrt_of(2).expect("non-square");
    (0..100)
        .map(|i| {
            let r = random_rational(rng, 96, 12);
            if i % 10 == 0 {
                &r + &sqrt2
            } else {
                r
            }
        })
        .collect()
}

fn unit_points<R: Rng + ?Sized>(rng: &mut R) -> Vec<QuadReal> {
    (0..100)
        .map(|_| {
            let den = rng.gen_range(1..=16);
            QuadReal::ratio(rng.gen_range(0..=den), den)
        })
        .collect()
}

fn piecewise(rng: &mut ChaCha8Rng, _: u64) -> Outcome {
    let pts = line_points(rng);
    let ppq: Vec<PwMap> = (0..3).map(|_| random_ppq_element(rng)).collect();
    group_laws(&ppq[0], &ppq[1], &ppq[2], &[GroupTag::PPQ1], &pts)?;
    let hz: Vec<PwMap> = (0..3)
        .map(|_| {
            let len = rng.gen_range(1..=3);
            random_hz_word(len, rng)
        })
        .collect();
    group_laws(&hz[0], &hz[1], &hz[2], &[GroupTag::HZ, GroupTag::HZ1, GroupTag::PZpw], &pts)?;
    let pts = unit_points(rng);
    for n in [2, 3] {
        let fs: Vec<PwMap> = (0..3)
            .map(|_| {
                let k = rng.gen_range(1..=4);
                random_fn_element(n, k, rng)
            })
            .collect();
        group_laws(&fs[0], &fs[1], &fs[2], &[GroupTag::Fn(n)], &pts)?;
    }
    let ts: Vec<PwMap<Affine>> = (0..3)
        .map(|_| {
            let k = rng.gen_range(1..=4);
            random_ftau_element(k, rng)
        })
        .collect();
    group_laws(&ts[0], &ts[1], &ts[2], &[GroupTag::Ftau], &pts)
}

fn unique_rep_scan(rng: &mut ChaCha8Rng, _: u64) -> Outcome {
    let p = random_golden_unit(rng, 1_000_000);
    let rep = must(unique_rep(&p), || format!("p={p}"))?;
    let hits: Vec<(i64, GoldenElt)> = (-40..=40)
        .filter_map(|j| {
            let c = &p * &GoldenElt::tau_pow(-j);
            (c.a >= BigInt::from(0) && c.a < c.b).then_some((j, c))
        })
        .collect();
    ensure!(hits.len() == 1, "p={p} scan_hits={}", hits.len());
    let (j, c) = &hits[0];
    ensure!(rep.j == *j && rep.a == c.a && rep.b == c.b, "p={p} got=({rep}) scan=(j={j} a={} b={})", c.a, c.b);
    Ok(())
}

fn beta_invariance(rng: &mut ChaCha8Rng, index: u64) -> Outcome {
    match index % 3 {
        0 => {
            let g = random_hz_g1(rng);
            let len = rng.gen_range(0..=5);
            let c = random_hz_word(len, rng);
            let x = random_pz_point(rng);
            let ctx = || format!("kind=hz x={x} g={} c={}", show(&g), show(&c));
            let gc = g.conjugate(&c).map_err(|e| format!("{} error={e}", ctx()))?;
            let (b0, b1) = (must(beta_hz(&g, &x), ctx)?, must(beta_hz(&gc, &x), ctx)?);
            ensure!(b0 == b1, "{} beta={b0} conjugated={b1}", ctx());
        }
        1 => {
            let n = *[2u32, 3, 5].choose(rng).expect("nonempty");
            let g0 = fn_base(n);
            let x = random_n_adic(n, 3, rng);
            let f = random_fn11(n, &x, &g0, rng);
            let c = random_fn_conjugator(n, rng);
            let ctx = || format!("kind=fn n={n} x={x} f={} c={}", show(&f), show(&c));
            let fc = f.conjugate(&c).map_err(|e| format!("{} error={e}", ctx()))?;
            let (b0, b1) = (must(beta_fn(&f, &g0, &x, n), ctx)?, must(beta_fn(&fc, &g0, &x, n), ctx)?);
            ensure!(b0 == b1, "{} beta={b0} conjugated={b1}", ctx());
        }
        _ => {
            let base = crate::constructors::ftau_base();
            let d = random_ftau_conjugator(rng);
            let g = base.conjugate(&d).map_err(|e| e.to_string())?;
            let c = random_ftau_conjugator(rng);
            let ctx = || format!("kind=tau g={} c={}", show(&g), show(&c));
            let gc = g.conjugate(&c).map_err(|e| format!("{} error={e}", ctx()))?;
            let (b0, b1) = (must(beta_tau(&g), ctx)?, must(beta_tau(&gc), ctx)?);
            ensure!(b0 == b1, "{} beta={b0:?} conjugated={b1:?}", ctx());
        }
    }
    Ok(())
}

const GI_BASES: [&str; 4] = ["(1+1*sqrt(5))/2", "1*sqrt(2)", "1+1*sqrt(3)", "-1*sqrt(7)"];

fn gi_seeds() -> &'static [(QuadReal, PwMap)] {
    static SEEDS: OnceLock<Vec<(QuadReal, PwMap)>> = OnceLock::new();
    SEEDS.get_or_init(|| {
        GI_BASES
            .iter()
            .map(|s| {
                let v = parse_quad(s).expect("literal");
                let g0 = make_gi1(&v).expect("seed element");
                (v, g0)
            })
            .collect()
    })
}

fn gamma_invariance(rng: &mut ChaCha8Rng, _: u64) -> Outcome {
    let (v, g0) = gi_seeds().choose(rng).expect("nonempty");
    let g = random_gi1(v, g0, rng);
    let len = rng.gen_range(1..=3);
    let c = random_gi_conjugator(v, g0, len, rng);
    let den = rng.gen_range(1..=6);
    let x = v + &QuadReal::ratio(rng.gen_range(1..=3 * den), den);
    let ctx = || format!("v={v} x={x} g={} c={}", show(&g), show(&c));
    let gc = g.conjugate(&c).map_err(|e| format!("{} error={e}", ctx()))?;
    let (y0, y1) = (must(gamma_hz(&g, g0, v, &x), ctx)?, must(gamma_hz(&gc, g0, v, &x), ctx)?);
    ensure!(y0 == y1, "{} gamma={y0} conjugated={y1}", ctx());
    Ok(())
}

/// End germ offsets `(i, j)` of a map with translation ends.
fn germs(h: &PwMap) -> (i64, i64) {
    let off = |p: &Mob| -> i64 {
        let o = p.affine_offset().expect("translation end");
        i64::try_from(o.to_integer().expect("integer offset")).expect("small offset")
    };
    let ps = h.pieces();
    (off(&ps[0]), off(&ps[ps.len() - 1]))
}

/// The information of `g` at the narrowest widening of `(a, b)` at which
/// `g` is monitorable.
fn widened_information(g: &PwMap, x: &QuadReal, a: i64, b: i64) -> Option<(i64, PwMap)> {
    (0..40).find_map(|k| information(g, x, a - k, b + k).ok().map(|info| (k, info)))
}

fn information_invariance(rng: &mut ChaCha8Rng, index: u64) -> Outcome {
    let (x, f, tag) = if index.is_multiple_of(2) {
        let x = random_rational(rng, 36, 6);
        (x.clone(), random_segment_map(&x, rng), GroupTag::PPQ1)
    } else {
        let x = random_pz_point(rng);
        (x.clone(), random_hz_segment_map(&x, rng), GroupTag::HZ1)
    };
    let g = must(embed_information(&f, tag), || format!("x={x} f={}", show(&f)))?;
    let h = if tag == GroupTag::PPQ1 {
        random_ppq_element(rng)
    } else {
        let len = rng.gen_range(1..=3);
        random_hz_word(len, rng)
    };
    let (i, j) = germs(&h);
    let ctx = || format!("tag={tag} x={x} g={} h={}", show(&g), show(&h));
    let gh = g.conjugate(&h).map_err(|e| format!("{} error={e}", ctx()))?;
    ensure!(information(&g, &x, -1, 1).ok().as_ref() == Some(&f), "{} law=embedded-information", ctx());
    let Some((k, info)) = widened_information(&gh, &x, i - 1, j + 1) else {
        return Err(format!("{} law=conjugate-monitorable", ctx()));
    };
    let base = information(&g, &x, -1 - k, 1 + k).map_err(|e| format!("{} k={k} error={e}", ctx()))?;
    ensure!(info == base && info == f, "{} k={k} law=information-invariance", ctx());
    Ok(())
}

/// Least `m` with `x + 1 < y + m`.
fn minimal_shift(x: &QuadReal, y: &QuadReal) -> i64 {
    let x1 = x.add_int(&BigInt::from(1));
    let m = ceil_diff(&x1, y);
    let m = if y.add_int(&m) > x1 { m } else { m + 1 };
    i64::try_from(m).expect("small shift")
}

fn connector_post(rng: &mut ChaCha8Rng, index: u64) -> Outcome {
    let x = match index % 4 {
        3 => {
            let p = random_pz_point(rng);
            let a = must(pz_witness(&p), || format!("p={p}"))?;
            a.fixed_points().choose(rng).cloned().expect("hyperbolic fixed points")
        }
        k => parse_quad(GI_BASES[k as usize]).expect("literal"),
    };
    let mut last = String::new();
    for _ in 0..8 {
        let len = rng.gen_range(0..=3);
        let h = random_unimodular_at(&x, len, rng);
        let y = h.at(&x);
        let m = minimal_shift(&x, &y);
        let ctx = || format!("x={x} h={h} m={m}");
        let g = match connector(&x, &h, m, GroupTag::HZ1) {
            Ok(g) => g,
            Err(Error::BridgeFail(e)) => {
                last = format!("{} error={e}", ctx());
                continue;
            }
            Err(e) => return Err(format!("{} error={e}", ctx())),
        };
        let c = y.add_int(&BigInt::from(m));
        let x1 = x.add_int(&BigInt::from(1));
        if let Err(v) = g.is_member(GroupTag::HZ1) {
            return Err(format!("{} law=membership violation={v}", ctx()));
        }
        ensure!(g.is_g1(), "{} g={} law=g1", ctx(), show(&g));
        ensure!(g.at(&x) == x1, "{} g={} law=image-of-x", ctx(), show(&g));
        ensure!(g.at(&x1) == c, "{} g={} law=image-of-x+1", ctx(), show(&g));
        ensure!(g.at(&c) == c.add_int(&BigInt::from(1)), "{} g={} law=image-of-c", ctx(), show(&g));
        let beta = must(beta_hz(&g, &x), ctx)?;
        ensure!(beta == y, "{} beta={beta} law=beta-is-h(x)", ctx());
        return Ok(());
    }
    Err(last)
}

fn end_offset(rng: &mut ChaCha8Rng, _: u64) -> Outcome {
    let a = Mob::from_ints(5, 2, 2, 1);
    let p = QuadReal::from_parts(1, -1, 2, 1);
    let q = QuadReal::from_parts(1, 1, 3, 2);
    ensure!(a.at(&p) == p, "law=junction-fixed A={a} t={p}");
    ensure!(a.at(&q) == q.add_int(&BigInt::from(1)), "law=junction-shift A={a} t={q}");
    let b = b01();
    ensure!(b.breaks() == [p.clone(), q.clone()], "law=b01-breaks b01={}", show(&b));
    let tag = *[GroupTag::HZ, GroupTag::PPQ1].choose(rng).expect("nonempty");
    let mut r = || rng.gen_range(-3..=3i64);
    let (i, j, k, l) = (r(), r(), r(), r());
    let ctx = || format!("tag={tag} (i,j)=({i},{j}) (k,l)=({k},{l})");
    let e1 = must(make_end_offset(i, j, tag), ctx)?;
    let e2 = must(make_end_offset(k, l, tag), ctx)?;
    for e in [&e1, &e2] {
        if let Err(v) = e.is_member(tag) {
            return Err(format!("{} law=membership violation={v}", ctx()));
        }
    }
    ensure!(germs(&e1) == (i, j), "{} e={} law=germs", ctx(), show(&e1));
    let prod = e1.compose(&e2).map_err(|e| e.to_string())?;
    ensure!(germs(&prod) == (i + k, j + l), "{} law=germ-additivity", ctx());
    Ok(())
}

fn reconstruction(rng: &mut ChaCha8Rng, _: u64) -> Outcome {
    let x = random_rational(rng, 18, 6);
    let s = x.add_int(&BigInt::from(-1));
    let fhat = random_segment_map(&s, rng);
    let (i, j) = (rng.gen_range(-2..=2), rng.gen_range(-2..=2));
    let ctx = || format!("x={x} fhat={} (i,j)=({i},{j})", show(&fhat));
    let f = must(fhat.transport(&Mob::translation(&BigInt::from(1))), ctx)?;
    let e = must(make_end_offset(i, j, GroupTag::PPQ1), ctx)?;
    let h1 = must(embed_information(&f, GroupTag::PPQ1), ctx)?;
    let h1 = must(h1.conjugate(&e), ctx)?;
    let Some((k, info)) = widened_information(&h1, &x, i - 1, j + 1) else {
        return Err(format!("{} law=h1-monitorable", ctx()));
    };
    ensure!(info == f, "{} law=h1-information", ctx());
    let h0 = PwMap::translation(1);
    let m0 = must(MonitorSpec::find(&h0, &x, -1, 1), ctx)?;
    let m1 = must(MonitorSpec::find(&h1, &x, i - 1 - k, j + 1 + k), ctx)?;
    let ja = Interval::unit_at(&x, -1);
    let run = |n: u64| reconstruct_via_monitoring(&fhat, &h0, &h1, &m0, &m1, n, GroupTag::PPQ1);
    let n0 = (0..64u64)
        .find(|&n| !matches!(run(n), Err(Error::ZoneFail(_))))
        .ok_or_else(|| format!("{} law=zones-eventually-fit", ctx()))?;
    for n in n0..n0 + 3 {
        let w = must(run(n), || format!("{} n={n}", ctx()))?;
        let r = must(w.restrict_to(&ja), || format!("{} n={n}", ctx()))?;
        ensure!(r == fhat, "{} n={n} got={} law=reconstruction", ctx(), show(&r));
    }
    Ok(())
}

/// Orbit oracles on the `n^6` grid, built once.
fn orbit_oracle(n: u32) -> &'static FnOrbitOracle {
    static ORACLES: OnceLock<Vec<FnOrbitOracle>> = OnceLock::new();
    let all = ORACLES.get_or_init(|| [2, 3, 4].into_iter().map(|n| FnOrbitOracle::build(n, 6)).collect());
    &all[n as usize - 2]
}

fn fn_orbit(rng: &mut ChaCha8Rng, index: u64) -> Outcome {
    let n = 2 + (index % 3) as u32;
    let (x, y) = (random_n_adic(n, 4, rng), random_n_adic(n, 4, rng));
    let got = must(fn_same_orbit(&x, &y, n), || format!("n={n} x={x} y={y}"))?;
    let want = orbit_oracle(n).same(&x, &y).expect("grid points");
    ensure!(got == want, "n={n} x={x} y={y} classifier={got} oracle={want}");
    Ok(())
}

fn tree_pair(rng: &mut ChaCha8Rng, index: u64) -> Outcome {
    let n = *[2u32, 3, 4, 5].choose(rng).expect("nonempty");
    let k = rng.gen_range(1..=5);
    let ts: Vec<NTree> = (0..3).map(|_| NTree::random(n, k, rng)).collect();
    let ctx = || format!("n={n} t1={} t2={} t3={}", ts[0], ts[1], ts[2]);
    let map = |a: usize, b: usize| tree_pair_to_map(&ts[a], &ts[b]).map_err(|e| format!("{} error={e}", ctx()));
    let (f12, f23, f13) = (map(0, 1)?, map(1, 2)?, map(0, 2)?);
    ensure!(f23.compose(&f12).ok().as_ref() == Some(&f13), "{} law=pair-composition", ctx());
    ensure!(f12.invert() == map(1, 0)?, "{} law=pair-inverse", ctx());
    if let Err(v) = f12.is_member(GroupTag::Fn(n)) {
        return Err(format!("{} law=membership violation={v}", ctx()));
    }
    for t in &ts {
        ensure!(NTree::parse(n, &t.to_string()).ok().as_ref() == Some(t), "{} law=tree-text", ctx());
        for (lo, hi) in t.leaves() {
            ensure!(f12.domain().contains(&lo) && lo < hi, "{} law=leaf-order", ctx());
        }
    }
    if index.is_multiple_of(4) && n != 4 {
        let g0 = fn_base(n);
        let x = random_n_adic(n, 3, rng);
        let f = random_fn11(n, &x, &g0, rng);
        ensure!(f.in_f11(GroupTag::Fn(n)), "n={n} x={x} f={} law=preimage-in-f11", show(&f));
    }
    Ok(())
}
