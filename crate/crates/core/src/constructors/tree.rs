//! Tree-pair elements of `F_n` and `F_τ`, and `β`-preimages in `F_{n,1,−1}`.

use std::fmt;

use num_bigint::BigInt;
use rand::Rng;

use crate::error::{Error, Result};
use crate::exactnum::{int_pow, is_n_adic, GoldenElt, QuadReal};
use crate::invariants::{beta_fn, fn_orbit_class};
use crate::moebius::Mob;
use crate::piecewise::{Affine, Domain, GroupTag, PwMap};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Node {
    Leaf,
    Split(Vec<Node>),
}

impl Node {
    fn leaves(&self) -> usize {
        match self {
            Node::Leaf => 1,
            Node::Split(cs) => cs.iter().map(Node::leaves).sum(),
        }
    }

    /// Splits the `i`-th leaf; returns how many leaves remain to skip.
    fn split(&mut self, i: usize, n: u32) -> Option<usize> {
        match self {
            Node::Leaf if i == 0 => {
                *self = Node::Split(vec![Node::Leaf; n as usize]);
                None
            }
            Node::Leaf => Some(i - 1),
            Node::Split(cs) => {
                let mut i = i;
                for c in cs {
                    i = c.split(i, n)?;
                }
                Some(i)
            }
        }
    }

    fn collect(&self, lo: QuadReal, len: QuadReal, n: &QuadReal, out: &mut Vec<(QuadReal, QuadReal)>) {
        match self {
            Node::Leaf => {
                let hi = &lo + &len;
                out.push((lo, hi));
            }
            Node::Split(cs) => {
                let step = len.try_div(n).expect("n > 0");
                let mut at = lo;
                for c in cs {
                    c.collect(at.clone(), step.clone(), n, out);
                    at = &at + &step;
                }
            }
        }
    }
}

/// An `n`-ary subdivision tree of `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NTree {
    arity: u32,
    root: Node,
}

impl NTree {
    pub fn leaf(arity: u32) -> Self {
        assert!(arity >= 2, "arity below 2");
        NTree { arity, root: Node::Leaf }
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn leaf_count(&self) -> usize {
        self.root.leaves()
    }

    pub fn split_leaf(&mut self, i: usize) {
        assert!(i < self.leaf_count(), "leaf {i} out of range");
        self.root.split(i, self.arity);
    }

    /// Leaf intervals, left to right.
    pub fn leaves(&self) -> Vec<(QuadReal, QuadReal)> {
        let mut out = Vec::new();
        let n = QuadReal::from_int(self.arity);
        self.root.collect(QuadReal::zero(), QuadReal::one(), &n, &mut out);
        out
    }

    /// A tree with `carets` splits at uniformly chosen leaves.
    pub fn random<R: Rng + ?Sized>(arity: u32, carets: usize, rng: &mut R) -> Self {
        let mut t = NTree::leaf(arity);
        for _ in 0..carets {
            let i = rng.gen_range(0..t.leaf_count());
            t.split_leaf(i);
        }
        t
    }

    /// Parses `((..).)`; leaves are `.` or `•`.
    pub fn parse(arity: u32, text: &str) -> Result<Self> {
        fn node(chars: &[char], pos: &mut usize, n: u32) -> Result<Node> {
            let bad = |m: String| Error::Parse { line: 1, msg: m };
            match chars.get(*pos) {
                Some('.') | Some('•') => {
                    *pos += 1;
                    Ok(Node::Leaf)
                }
                Some('(') => {
                    *pos += 1;
                    let mut cs = Vec::new();
                    while chars.get(*pos) != Some(&')') {
                        if *pos >= chars.len() {
                            return Err(bad("unclosed '('".into()));
                        }
                        cs.push(node(chars, pos, n)?);
                    }
                    *pos += 1;
                    if cs.len() != n as usize {
                        return Err(bad(format!("node with {} children in an arity-{n} tree", cs.len())));
                    }
                    Ok(Node::Split(cs))
                }
                Some(c) => Err(bad(format!("unexpected {c:?} at {pos}"))),
                None => Err(bad("unexpected end of tree".into())),
            }
        }
        if arity < 2 {
            return Err(Error::Usage(format!("arity {arity} is below 2")));
        }
        let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let root = node(&chars, &mut pos, arity)?;
        if pos != chars.len() {
            return Err(Error::Parse {
                line: 1,
                msg: format!("trailing input at {pos}"),
            });
        }
        Ok(NTree { arity, root })
    }
}

impl fmt::Display for NTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(n: &Node, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match n {
                Node::Leaf => write!(f, "."),
                Node::Split(cs) => {
                    write!(f, "(")?;
                    for c in cs {
                        go(c, f)?;
                    }
                    write!(f, ")")
                }
            }
        }
        go(&self.root, f)
    }
}

/// The affine rational map of `[s0, e0]` onto `[s1, e1]`.
fn affine_mob(s0: &QuadReal, e0: &QuadReal, s1: &QuadReal, e1: &QuadReal) -> Result<Mob> {
    let a = Affine::between(s0, e0, s1, e1)?;
    Mob::from_rational([a.slope(), a.offset(), &QuadReal::zero(), &QuadReal::one()])
}

/// Leaf-by-leaf affine matching of two subdivisions of the same interval.
fn match_leaves(
    src: &[(QuadReal, QuadReal)],
    dst: &[(QuadReal, QuadReal)],
    breaks: &mut Vec<QuadReal>,
    pieces: &mut Vec<Mob>,
) -> Result<()> {
    for ((s0, e0), (s1, e1)) in src.iter().zip(dst) {
        if !pieces.is_empty() {
            breaks.push(s0.clone());
        }
        pieces.push(affine_mob(s0, e0, s1, e1)?);
    }
    Ok(())
}

/// The element of `F_n` sending the `i`-th leaf of `t1` affinely onto the
/// `i`-th leaf of `t2`.
pub fn tree_pair_to_map(t1: &NTree, t2: &NTree) -> Result<PwMap> {
    if t1.arity != t2.arity {
        return Err(Error::Usage(format!("arities {} and {} differ", t1.arity, t2.arity)));
    }
    let (l1, l2) = (t1.leaves(), t2.leaves());
    if l1.len() != l2.len() {
        return Err(Error::ShapeMismatch(l1.len(), l2.len()));
    }
    let (mut breaks, mut pieces) = (Vec::new(), Vec::new());
    match_leaves(&l1, &l2, &mut breaks, &mut pieces)?;
    PwMap::new(Domain::UnitInterval, breaks, pieces)
}

/// A random element of `F_n` from two random trees with `carets` carets.
pub fn random_fn_element<R: Rng + ?Sized>(n: u32, carets: usize, rng: &mut R) -> PwMap {
    let a = NTree::random(n, carets, rng);
    let b = NTree::random(n, carets, rng);
    tree_pair_to_map(&a, &b).expect("equal leaf counts")
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum GNode {
    Leaf,
    /// Children of lengths `τL` and `τ²L`, long first when the flag is set.
    Split(bool, Box<[GNode; 2]>),
}

/// A golden subdivision tree of `[0, 1]`: each caret cuts an interval of
/// length `L` into pieces of lengths `τL` and `τ²L`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GoldenTree {
    root: GNode,
}

impl GoldenTree {
    pub fn leaf() -> Self {
        GoldenTree { root: GNode::Leaf }
    }

    pub fn leaf_count(&self) -> usize {
        fn go(n: &GNode) -> usize {
            match n {
                GNode::Leaf => 1,
                GNode::Split(_, cs) => go(&cs[0]) + go(&cs[1]),
            }
        }
        go(&self.root)
    }

    pub fn split_leaf(&mut self, i: usize, long_first: bool) {
        fn go(n: &mut GNode, i: usize, lf: bool) -> Option<usize> {
            match n {
                GNode::Leaf if i == 0 => {
                    *n = GNode::Split(lf, Box::new([GNode::Leaf, GNode::Leaf]));
                    None
                }
                GNode::Leaf => Some(i - 1),
                GNode::Split(_, cs) => {
                    let i = go(&mut cs[0], i, lf)?;
                    go(&mut cs[1], i, lf)
                }
            }
        }
        assert!(i < self.leaf_count(), "leaf {i} out of range");
        go(&mut self.root, i, long_first);
    }

    pub fn leaves(&self) -> Vec<(QuadReal, QuadReal)> {
        fn go(n: &GNode, lo: GoldenElt, k: i64, out: &mut Vec<(QuadReal, QuadReal)>) {
            match n {
                GNode::Leaf => {
                    let hi = &lo + &GoldenElt::tau_pow(k);
                    out.push((lo.to_quad(), hi.to_quad()));
                }
                GNode::Split(long_first, cs) => {
                    let (k0, k1) = if *long_first { (k + 1, k + 2) } else { (k + 2, k + 1) };
                    let mid = &lo + &GoldenElt::tau_pow(k0);
                    go(&cs[0], lo, k0, out);
                    go(&cs[1], mid, k1, out);
                }
            }
        }
        let mut out = Vec::new();
        go(&self.root, GoldenElt::from_ints(0, 0), 0, &mut out);
        out
    }

    pub fn random<R: Rng + ?Sized>(carets: usize, rng: &mut R) -> Self {
        let mut t = GoldenTree::leaf();
        for _ in 0..carets {
            let i = rng.gen_range(0..t.leaf_count());
            t.split_leaf(i, rng.gen());
        }
        t
    }
}

/// The element of `F_τ` matching the leaves of two golden trees.
pub fn golden_pair_to_map(t1: &GoldenTree, t2: &GoldenTree) -> Result<PwMap<Affine>> {
    let (l1, l2) = (t1.leaves(), t2.leaves());
    if l1.len() != l2.len() {
        return Err(Error::ShapeMismatch(l1.len(), l2.len()));
    }
    let mut breaks = Vec::new();
    let mut pieces = Vec::new();
    for ((s0, e0), (s1, e1)) in l1.iter().zip(&l2) {
        if !pieces.is_empty() {
            breaks.push(s0.clone());
        }
        pieces.push(Affine::between(s0, e0, s1, e1)?);
    }
    PwMap::new(Domain::UnitInterval, breaks, pieces)
}

pub fn random_ftau_element<R: Rng + ?Sized>(carets: usize, rng: &mut R) -> PwMap<Affine> {
    let a = GoldenTree::random(carets, rng);
    let b = GoldenTree::random(carets, rng);
    golden_pair_to_map(&a, &b).expect("equal leaf counts")
}

/// Greedy cover of `[a, b]` by standard `n`-adic intervals `[k/nᵉ, (k+1)/nᵉ]`.
fn standard_cover(a: &QuadReal, b: &QuadReal, n: u32) -> Vec<(QuadReal, QuadReal)> {
    let nb = BigInt::from(n);
    let mut out = Vec::new();
    let mut p = a.clone();
    while p < *b {
        let mut e = 0i64;
        loop {
            let step = int_pow(&nb, -e);
            let aligned = p.try_div(&step).expect("nonzero").is_integer();
            let hi = &p + &step;
            if aligned && hi <= *b {
                out.push((p.clone(), hi.clone()));
                p = hi;
                break;
            }
            e += 1;
        }
    }
    out
}

/// Refines the longest piece until the cover has `k` pieces.
fn refine_to(cover: &mut Vec<(QuadReal, QuadReal)>, k: usize, n: u32) {
    let nq = QuadReal::from_int(n);
    while cover.len() < k {
        let (i, _) = cover
            .iter()
            .enumerate()
            .max_by(|(i, x), (j, y)| (&x.1 - &x.0).cmp(&(&y.1 - &y.0)).then(j.cmp(i)))
            .expect("nonempty");
        let (lo, hi) = cover.remove(i);
        let step = (&hi - &lo).try_div(&nq).expect("n > 0");
        for s in 0..n as usize {
            let a = &lo + &step.scale(&BigInt::from(s));
            cover.insert(i + s, (a.clone(), &a + &step));
        }
    }
}

/// Affine matching of `[a, b]` onto `[c, d]` through standard covers of
/// equal size; the lengths must agree modulo `n − 1`.
fn standard_match(a: &QuadReal, b: &QuadReal, c: &QuadReal, d: &QuadReal, n: u32, breaks: &mut Vec<QuadReal>, pieces: &mut Vec<Mob>) -> Result<()> {
    let mut src = standard_cover(a, b, n);
    let mut dst = standard_cover(c, d, n);
    if (src.len() as i64 - dst.len() as i64) % (n as i64 - 1) != 0 {
        return Err(Error::NotInOrbit(format!("[{a}, {b}] and [{c}, {d}] have incompatible lengths")));
    }
    let k = src.len().max(dst.len());
    refine_to(&mut src, k, n);
    refine_to(&mut dst, k, n);
    match_leaves(&src, &dst, breaks, pieces)
}

/// `Φ_i⁻¹(y)`, the point of the bin `(1 − n^{−i}, 1 − n^{−i−1}]` at relative
/// position `y`.
fn bin_point(y: &QuadReal, i: i64, n: u32) -> QuadReal {
    let nb = BigInt::from(n);
    let start = QuadReal::one() - int_pow(&nb, -i);
    &start + &y.try_mul(&int_pow(&nb, -i - 1).scale(&BigInt::from(n - 1))).expect("rational")
}

/// `f ∈ F_{n,1,−1}` with `β_x(f) = y` relative to `g0`: `nt` up to
/// `g0^{−i}(x)`, `1 + (t − 1)/n` from `Φ_i⁻¹(y)`, standard matchings between.
pub fn fn_beta_preimage(y: &QuadReal, x: &QuadReal, g0: &PwMap, n: u32) -> Result<PwMap> {
    if !y.is_positive() || *y > QuadReal::one() {
        return Err(Error::BadTarget(format!("y = {y} is not in (0, 1]")));
    }
    let tag = GroupTag::Fn(n);
    if g0.is_member(tag).is_err() || !g0.in_f11(tag) {
        return Err(Error::NotInFn11("g0".into()));
    }
    let class = fn_orbit_class(x, n)?;
    let nb = BigInt::from(n);
    let back = g0.invert();
    let first = &g0.breaks()[0];
    let mut z1 = x.clone();
    for i in 1..=64i64 {
        let w = bin_point(y, i, n);
        if !is_n_adic(&w, &nb) {
            return Err(Error::NotInOrbit(format!("bin preimage {w} of y is not n-adic")));
        }
        if fn_orbit_class(&w, n)? != class {
            return Err(Error::NotInOrbit(format!("bin preimage {w} of y is not in the orbit of {x}")));
        }
        if z1 <= *first && z1 < w {
            let z0 = z1.try_div(&QuadReal::from_int(n))?;
            let w2 = bin_point(y, i + 1, n);
            let mut breaks = Vec::new();
            let mut pieces = vec![Mob::from_ints(n as i64, 0, 0, 1)];
            standard_match(&z0, &z1, &z1, &w, n, &mut breaks, &mut pieces)?;
            standard_match(&z1, &w, &w, &w2, n, &mut breaks, &mut pieces)?;
            breaks.push(w.clone());
            pieces.push(Mob::from_ints(1, n as i64 - 1, 0, n as i64));
            let f = PwMap::new(Domain::UnitInterval, breaks, pieces)?;
            let got = beta_fn(&f, g0, x, n)?;
            if got != *y {
                return Err(Error::InvariantViolation {
                    kind: "postcondition",
                    detail: format!("constructed beta {got}, wanted {y}"),
                });
            }
            return Ok(f);
        }
        z1 = back.at(&z1);
    }
    Err(Error::SearchExhausted(64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::parse_quad;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(s: &str) -> QuadReal {
        parse_quad(s).unwrap()
    }

    #[test]
    fn classic_element() {
        let a = NTree::parse(2, "((..).)").unwrap();
        let b = NTree::parse(2, "(.(••))").unwrap();
        assert_eq!(a.to_string(), "((..).)");
        let f = tree_pair_to_map(&a, &b).unwrap();
        assert_eq!(f.breaks(), &[q("1/4"), q("1/2")]);
        assert_eq!(
            f.pieces(),
            &[Mob::from_ints(2, 0, 0, 1), Mob::from_ints(4, 1, 0, 4), Mob::from_ints(1, 1, 0, 2)]
        );
        assert!(tree_pair_to_map(&a, &a).unwrap().is_identity());
        let one = NTree::parse(3, "(...)").unwrap();
        let two = NTree::parse(3, "((...)..)").unwrap();
        assert_eq!(tree_pair_to_map(&one, &two), Err(Error::ShapeMismatch(3, 5)));
        assert!(NTree::parse(3, "(..)").is_err());
    }

    #[test]
    fn random_trees_are_members() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [2, 3, 5] {
            for _ in 0..20 {
                let f = random_fn_element(n, 6, &mut rng);
                assert!(f.is_member(GroupTag::Fn(n)).is_ok());
            }
        }
        for _ in 0..20 {
            let f = random_ftau_element(5, &mut rng);
            assert!(f.is_member(GroupTag::Ftau).is_ok(), "{}", f.serialize());
        }
    }

    fn f2_base() -> PwMap {
        let a = NTree::parse(2, "((..).)").unwrap();
        let b = NTree::parse(2, "(.(..))").unwrap();
        tree_pair_to_map(&a, &b).unwrap()
    }

    #[test]
    fn preimage_examples() {
        let g0 = f2_base();
        let x = q("1/2");
        for y in ["1", "1/2", "1/4", "3/8", "7/16"] {
            let y = q(y);
            let f = fn_beta_preimage(&y, &x, &g0, 2).unwrap();
            assert_eq!(beta_fn(&f, &g0, &x, 2).unwrap(), y);
        }
        assert!(matches!(fn_beta_preimage(&q("0"), &x, &g0, 2), Err(Error::BadTarget(_))));
        assert!(matches!(fn_beta_preimage(&q("3/2"), &x, &g0, 2), Err(Error::BadTarget(_))));
    }

    #[test]
    fn preimage_orbit_obstruction() {
        let a = NTree::parse(3, "((...)..)").unwrap();
        let b = NTree::parse(3, "(..(...))").unwrap();
        let g0 = tree_pair_to_map(&a, &b).unwrap();
        let x = q("1/3");
        // Bin preimages of y = 1 are 1 − 3^{−i−1}, of class 0; x has class 1.
        assert!(matches!(fn_beta_preimage(&q("1"), &x, &g0, 3), Err(Error::NotInOrbit(_))));
        let y = q("1/2");
        let f = fn_beta_preimage(&y, &x, &g0, 3).unwrap();
        assert_eq!(beta_fn(&f, &g0, &x, 3).unwrap(), y);
    }
}
