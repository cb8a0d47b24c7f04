//! Seeded property suites, reports and the command-line front end.

pub mod cli;
mod commands;
mod oracle;
mod suites;

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariants::DEFAULT_CAP;

pub use commands::{compute, fmt_file, gen, ComputeCmd, GenKind};
pub use oracle::FnOrbitOracle;

/// Suite names accepted by `run_suite`.
pub const SUITES: [&str; 12] = [
    "exactnum",
    "moebius",
    "piecewise",
    "unique-rep",
    "beta-invariance",
    "gamma-invariance",
    "information-invariance",
    "connector",
    "end-offset",
    "reconstruction",
    "fn-orbit",
    "tree-pair",
];

/// Outcome of one suite run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub trials: u64,
    pub failures: u64,
    pub first_counterexample: String,
    pub wall_time_ms: u64,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain fields")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })
    }
}

/// Defaults read from a `key=value` file.
///
/// Keys: `seed`, `trials` (all suites), `trials.<suite>`, `cap`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub seed: u64,
    pub trials: Option<u64>,
    pub suite_trials: HashMap<String, u64>,
    pub cap: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seed: 0,
            trials: None,
            suite_trials: HashMap::new(),
            cap: DEFAULT_CAP,
        }
    }
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Config::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let perr = |msg: String| Error::Parse { line: i + 1, msg };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| perr(format!("expected key=value, got {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            let num: u64 = value
                .parse()
                .map_err(|_| perr(format!("{key}: {value:?} is not a nonnegative integer")))?;
            match key {
                "seed" => cfg.seed = num,
                "trials" => cfg.trials = Some(num),
                "cap" => cfg.cap = num,
                _ => match key.strip_prefix("trials.") {
                    Some(suite) if SUITES.contains(&suite) => {
                        cfg.suite_trials.insert(suite.to_string(), num);
                    }
                    _ => return Err(perr(format!("unknown key {key:?}"))),
                },
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Config::parse(&text)
    }

    pub fn trials_for(&self, suite: &str) -> u64 {
        self.suite_trials
            .get(suite)
            .copied()
            .or(self.trials)
            .unwrap_or_else(|| default_trials(suite))
    }
}

pub fn default_trials(suite: &str) -> u64 {
    match suite {
        "exactnum" | "moebius" | "piecewise" | "unique-rep" => 1000,
        "fn-orbit" => 500,
        "beta-invariance" | "gamma-invariance" | "tree-pair" => 200,
        "information-invariance" | "reconstruction" => 100,
        _ => 50,
    }
}

/// The generator for trial `index`: one ChaCha stream per trial.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn panic_text(payload: Box<dyn std::any::Any + Send>) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        s.to_string()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "panic".to_string()
    }
}

pub fn run_suite(name: &str, seed: u64, trials: u64) -> Result<Report> {
    let trial = suites::lookup(name).ok_or_else(|| {
        Error::Usage(format!("unknown suite {name:?}; expected one of {}", SUITES.join(", ")))
    })?;
    let start = Instant::now();
    let failures: Vec<(u64, String)> = (0..trials)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = trial_rng(seed, i);
            let out = catch_unwind(AssertUnwindSafe(|| trial(&mut rng, i)))
                .unwrap_or_else(|p| Err(format!("panic: {}", panic_text(p))));
            out.err().map(|msg| (i, msg))
        })
        .collect();
    let first = failures
        .iter()
        .min_by_key(|(i, _)| *i)
        .map(|(i, msg)| format!("trial={i} {msg}"))
        .unwrap_or_default();
    Ok(Report {
        suite: name.to_string(),
        seed,
        trials,
        failures: failures.len() as u64,
        first_counterexample: first,
        wall_time_ms: start.elapsed().as_millis() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_keys() {
        let cfg = Config::parse("# defaults\nseed = 9\ntrials=20\ntrials.connector=3\ncap=50\n").unwrap();
        assert_eq!((cfg.seed, cfg.cap), (9, 50));
        assert_eq!(cfg.trials_for("connector"), 3);
        assert_eq!(cfg.trials_for("moebius"), 20);
        assert!(matches!(Config::parse("colour=red"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(Config::parse("seed"), Err(Error::Parse { .. })));
        assert!(matches!(Config::parse("trials.nosuch=1"), Err(Error::Parse { .. })));
    }

    #[test]
    fn report_round_trip() {
        let r = Report {
            suite: "moebius".into(),
            seed: 3,
            trials: 4,
            failures: 1,
            first_counterexample: "trial=2 x=1/2".into(),
            wall_time_ms: 17,
        };
        let json = r.to_json();
        assert_eq!(Report::from_json(&json).unwrap(), r);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        let mut keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        keys.sort();
        assert_eq!(keys, ["failures", "first_counterexample", "seed", "suite", "trials", "wall_time_ms"]);
    }

    #[test]
    fn unknown_suite() {
        assert!(matches!(run_suite("nosuch", 0, 1), Err(Error::Usage(_))));
    }
}
