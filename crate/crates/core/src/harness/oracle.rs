//! Brute-force orbit oracle for `F_n` on a finite grid of `n`-adic points.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::constructors::{tree_pair_to_map, NTree};
use crate::exactnum::QuadReal;
use crate::moebius::Mob;
use crate::piecewise::PwMap;

/// Headroom in the working denominator beyond the grid, enough for slopes
/// down to `n^{-HEADROOM}`.
const HEADROOM: u32 = 4;

/// One affine piece in units of `1/D`: `t ↦ (num/den)·t + off` on `[lo, hi)`.
#[derive(Clone, Debug)]
struct UnitPiece {
    lo: i128,
    hi: i128,
    num: i128,
    den: i128,
    off: i128,
}

fn to_units(v: &QuadReal, d: &BigInt) -> i128 {
    let scaled = v.scale(d);
    scaled
        .to_integer()
        .and_then(|k| k.to_i128())
        .unwrap_or_else(|| panic!("{v} is not on the working grid"))
}

fn unit_pieces(g: &PwMap, d: &BigInt) -> Vec<UnitPiece> {
    g.iter_pieces()
        .map(|(iv, p): (_, &Mob)| {
            let slope = p.affine_slope().expect("affine piece");
            let off = p.affine_offset().expect("affine piece");
            let lo = iv.lo.finite().map_or(0, |v| to_units(v, d));
            let hi = iv.hi.finite().map_or(i128::MAX, |v| to_units(v, d));
            let [a, _, _, dd] = p.entries();
            let (num, den) = (a.to_i128().expect("small slope"), dd.to_i128().expect("small slope"));
            debug_assert_eq!(QuadReal::ratio(num, den), slope);
            UnitPiece {
                lo,
                hi,
                num,
                den,
                off: to_units(&off, d),
            }
        })
        .collect()
}

/// Orbit components of `{k / n^e : 0 < k < n^e}` under all tree pairs with
/// at most three carets, by union-find over generator edges that stay on
/// the grid.
#[derive(Clone, Debug)]
pub struct FnOrbitOracle {
    n: u32,
    exp: u32,
    parent: Vec<usize>,
}

impl FnOrbitOracle {
    pub fn build(n: u32, exp: u32) -> Self {
        let grid = (n as usize).pow(exp);
        let step = (n as i128).pow(HEADROOM);
        let d = BigInt::from(n).pow(exp + HEADROOM);
        let gens: Vec<Vec<UnitPiece>> = fn_generators(n, 3).iter().map(|g| unit_pieces(g, &d)).collect();
        let mut parent: Vec<usize> = (0..grid).collect();
        for k in 1..grid {
            let t = k as i128 * step;
            for g in &gens {
                let p = g.iter().find(|p| p.lo <= t && t < p.hi).expect("pieces cover (0, 1)");
                let scaled = t * p.num;
                if scaled % p.den != 0 {
                    continue;
                }
                let y = scaled / p.den + p.off;
                if y % step == 0 {
                    union(&mut parent, k, (y / step) as usize);
                }
            }
        }
        FnOrbitOracle { n, exp, parent }
    }

    pub fn arity(&self) -> u32 {
        self.n
    }

    /// Grid index of `x`, when `x` is on the grid and inside `(0, 1)`.
    pub fn index(&self, x: &QuadReal) -> Option<usize> {
        let d = BigInt::from(self.n).pow(self.exp);
        let k = x.scale(&d).to_integer()?;
        (k > BigInt::zero() && k < d).then(|| k.to_usize().expect("grid index"))
    }

    pub fn component(&self, x: &QuadReal) -> Option<usize> {
        self.index(x).map(|k| find(&self.parent, k))
    }

    pub fn same(&self, x: &QuadReal, y: &QuadReal) -> Option<bool> {
        Some(self.component(x)? == self.component(y)?)
    }
}

fn find(parent: &[usize], mut k: usize) -> usize {
    while parent[k] != k {
        k = parent[k];
    }
    k
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra.max(rb)] = ra.min(rb);
    }
}

/// All trees with exactly `carets` carets.
fn trees(n: u32, carets: usize) -> Vec<NTree> {
    let mut level = vec![NTree::leaf(n)];
    for _ in 0..carets {
        let mut next: Vec<NTree> = Vec::new();
        for t in &level {
            for i in 0..t.leaf_count() {
                let mut s = t.clone();
                s.split_leaf(i);
                if !next.contains(&s) {
                    next.push(s);
                }
            }
        }
        level = next;
    }
    level
}

/// Nontrivial tree-pair elements with at most `max_carets` carets.
pub(crate) fn fn_generators(n: u32, max_carets: usize) -> Vec<PwMap> {
    let mut out: Vec<PwMap> = Vec::new();
    for k in 1..=max_carets {
        let ts = trees(n, k);
        for a in &ts {
            for b in &ts {
                let g = tree_pair_to_map(a, b).expect("equal leaf counts");
                if !g.is_identity() && !out.contains(&g) {
                    out.push(g);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_counts() {
        // Fuss–Catalan numbers.
        assert_eq!(trees(2, 3).len(), 5);
        assert_eq!(trees(3, 2).len(), 3);
        assert_eq!(trees(4, 3).len(), 22);
    }

    #[test]
    fn binary_grid_is_one_orbit() {
        let o = FnOrbitOracle::build(2, 4);
        let a = QuadReal::ratio(1, 16);
        for k in 2..16 {
            assert_eq!(o.same(&a, &QuadReal::ratio(k, 16)), Some(true));
        }
        assert_eq!(o.component(&QuadReal::ratio(1, 32)), None);
    }
}
