//! `compute`, `gen` and `fmt`: exact one-shot commands.

use std::path::{Path, PathBuf};

use clap::Subcommand;
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::constructors::{
    connector, fn_base, make_end_offset, make_gi1, random_fn_element, random_ftau_element, random_hz_word,
    random_ppq_element,
};
use crate::error::{Error, Result};
use crate::exactnum::{parse_golden, parse_quad, QuadReal};
use crate::invariants::{
    beta_fn, beta_hz, beta_tau, fn_orbit_class, information, monitoring_exponent_capped, unique_rep,
};
use crate::moebius::{cf_expand, pz_witness, Mob};
use crate::piecewise::{parse_any, parse_tagged, Affine, GroupTag, Piece, PwMap};

#[derive(Clone, Debug, Subcommand)]
pub enum ComputeCmd {
    /// Periodic continued fraction of a quadratic irrational.
    Cf {
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
    /// A hyperbolic `PSL(2, Z)` matrix fixing `x`.
    PzWitness {
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
    /// The `(a + bτ)τʲ` form of a golden element of `(0, 1)`.
    UniqueRep {
        #[arg(allow_hyphen_values = true)]
        p: String,
    },
    BetaHz {
        #[arg(long)]
        element: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        base: String,
    },
    BetaFn {
        #[arg(long)]
        element: PathBuf,
        /// Base element; defaults to the standard one for `n`.
        #[arg(long)]
        g0: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        base: String,
        #[arg(long)]
        n: u32,
    },
    BetaTau {
        #[arg(long)]
        element: PathBuf,
    },
    Information {
        #[arg(long)]
        element: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        base: String,
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
    },
    /// Orbit class of an `n`-adic point under `F_n`.
    OrbitClass {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(long)]
        n: u32,
    },
}

#[derive(Clone, Debug, Subcommand)]
pub enum GenKind {
    FnRandom {
        #[arg(long, default_value_t = 2)]
        n: u32,
        /// Carets per tree.
        #[arg(long, default_value_t = 5)]
        depth: usize,
    },
    FtauRandom {
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    HzWord {
        #[arg(long, default_value_t = 4)]
        length: usize,
    },
    PpqRandom,
    Connector {
        #[arg(long)]
        x: String,
        /// `[[a,b],[c,d]]`, or `t`, `t+k`, `t-k`.
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, default_value = "HZ1")]
        tag: String,
    },
    EndOffset {
        #[arg(long, allow_hyphen_values = true)]
        i: i64,
        #[arg(long, allow_hyphen_values = true)]
        j: i64,
        #[arg(long, default_value = "HZ")]
        tag: String,
    },
    Gi1Seed {
        #[arg(long, allow_hyphen_values = true)]
        v: String,
    },
}

fn quad(text: &str) -> Result<QuadReal> {
    Ok(parse_quad(text)?)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load<P: Piece>(path: &Path) -> Result<PwMap<P>> {
    parse_tagged(&read(path)?).map(|(m, _)| m)
}

/// Matrix literal or a translation written `t`, `t+k`, `t-k`.
fn parse_mob(text: &str) -> Result<Mob> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(rest) = s.strip_prefix('t') else {
        return Mob::parse(&s);
    };
    let k: i64 = match rest {
        "" => 0,
        _ => rest
            .strip_prefix('+')
            .unwrap_or(rest)
            .parse()
            .map_err(|_| Error::Usage(format!("expected t+k or a matrix, got {text:?}")))?,
    };
    Ok(Mob::translation(&BigInt::from(k)))
}

fn tag(text: &str) -> Result<GroupTag> {
    text.parse()
}

pub fn compute(cmd: &ComputeCmd, cap: u64) -> Result<String> {
    Ok(match cmd {
        ComputeCmd::Cf { x } => cf_expand(&quad(x)?)?.to_string(),
        ComputeCmd::PzWitness { x } => pz_witness(&quad(x)?)?.to_string(),
        ComputeCmd::UniqueRep { p } => unique_rep(&parse_golden(p)?)?.to_string(),
        ComputeCmd::BetaHz { element, base } => beta_hz(&load::<Mob>(element)?, &quad(base)?)?.to_string(),
        ComputeCmd::BetaFn { element, g0, base, n } => {
            let g0 = match g0 {
                Some(p) => load::<Mob>(p)?,
                None => fn_base(*n),
            };
            beta_fn(&load::<Mob>(element)?, &g0, &quad(base)?, *n)?.to_string()
        }
        ComputeCmd::BetaTau { element } => {
            let (a, b) = beta_tau(&load::<Affine>(element)?)?;
            format!("a={a} b={b}")
        }
        ComputeCmd::Information { element, base, a, b } => {
            let g = load::<Mob>(element)?;
            let x = quad(base)?;
            if monitoring_exponent_capped(&g, &x, *a, *b, cap)?.is_none() {
                return Err(Error::NotMonitorable(format!("no N maps J_{a} onto J_{b} at base {x}")));
            }
            information(&g, &x, *a, *b)?.serialize()
        }
        ComputeCmd::OrbitClass { x, n } => fn_orbit_class(&quad(x)?, *n)?.to_string(),
    })
}

fn certified<P: Piece>(g: PwMap<P>, tag: GroupTag) -> Result<String> {
    g.is_member(tag).map_err(|v| Error::MembershipFail(v.0))?;
    Ok(g.serialize_tagged(Some(tag)))
}

pub fn gen(kind: &GenKind, seed: u64) -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        GenKind::FnRandom { n, depth } => {
            if *n < 2 || *depth == 0 {
                return Err(Error::Usage("fn-random needs n >= 2 and depth >= 1".into()));
            }
            certified(random_fn_element(*n, *depth, &mut rng), GroupTag::Fn(*n))
        }
        GenKind::FtauRandom { depth } => certified(random_ftau_element((*depth).max(1), &mut rng), GroupTag::Ftau),
        GenKind::HzWord { length } => certified(random_hz_word(*length, &mut rng), GroupTag::HZ),
        GenKind::PpqRandom => certified(random_ppq_element(&mut rng), GroupTag::PPQ1),
        GenKind::Connector { x, h, m, tag: t } => {
            let t = tag(t)?;
            certified(connector(&quad(x)?, &parse_mob(h)?, *m, t)?, t)
        }
        GenKind::EndOffset { i, j, tag: t } => {
            let t = tag(t)?;
            certified(make_end_offset(*i, *j, t)?, t)
        }
        GenKind::Gi1Seed { v } => certified(make_gi1(&quad(v)?)?, GroupTag::HZ),
    }
}

/// Canonical text of a map file, keeping its tag.
pub fn fmt_file(path: &Path) -> Result<String> {
    let (m, t) = parse_any(&read(path)?)?;
    Ok(m.serialize_tagged(t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compute_examples() {
        let cf = ComputeCmd::Cf {
            x: "(0+1*sqrt(2))/1".into(),
        };
        assert_eq!(compute(&cf, 100).unwrap(), "pre=[1] period=[2]");
        let rep = ComputeCmd::UniqueRep { p: "-1+3*tau".into() };
        assert_eq!(compute(&rep, 100).unwrap(), "j=2 a=1 b=2");
        let oc = ComputeCmd::OrbitClass { x: "2/9".into(), n: 3 };
        assert_eq!(compute(&oc, 100).unwrap(), "0");
    }

    #[test]
    fn mob_arguments() {
        assert_eq!(parse_mob("t-1").unwrap(), Mob::from_ints(1, -1, 0, 1));
        assert_eq!(parse_mob("t").unwrap(), Mob::identity());
        assert_eq!(parse_mob("[[1,-1],[1,0]]").unwrap(), Mob::from_ints(1, -1, 1, 0));
        assert!(parse_mob("s+1").is_err());
    }

    #[test]
    fn generated_maps_are_deterministic() {
        let k = GenKind::HzWord { length: 4 };
        assert_eq!(gen(&k, 9).unwrap(), gen(&k, 9).unwrap());
        let c = GenKind::Connector {
            x: "(1+1*sqrt(5))/2".into(),
            h: "t-1".into(),
            m: 3,
            tag: "HZ1".into(),
        };
        let text = gen(&c, 0).unwrap();
        assert!(text.starts_with("pwmap domain=R tag=HZ1"));
    }
}
