use std::path::PathBuf;
use std::process::{Command, Output};

use igv_core::harness::Report;

fn igv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_igv")).args(args).output().expect("spawn igv")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn verify_passes_and_writes_json() {
    let json = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("connector.json");
    let o = igv(&["verify", "connector", "--seed", "4", "--trials", "6", "--json", json.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("connector seed=4 trials=6 failures=0"));
    let text = std::fs::read_to_string(&json).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let mut keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
    keys.sort();
    assert_eq!(keys, ["failures", "first_counterexample", "seed", "suite", "trials", "wall_time_ms"]);
    let r = Report::from_json(&text).unwrap();
    assert_eq!((r.seed, r.trials, r.failures), (4, 6, 0));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(igv(&["verify", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(igv(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(igv(&["verify", "connector", "--trials", "lots"]).status.code(), Some(2));
    assert_eq!(igv(&["compute", "beta-hz", "--element", "/nonexistent", "--base", "0"]).status.code(), Some(2));
    assert_eq!(igv(&["--help"]).status.code(), Some(0));
}

#[test]
fn config_supplies_defaults() {
    let cfg = scratch("good.cfg", "# defaults\nseed=3\ntrials=7\ntrials.end-offset=2\ncap=500\n");
    let c = cfg.to_str().unwrap();
    let o = igv(&["--config", c, "verify", "connector"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("connector seed=3 trials=7 "));
    let o = igv(&["--config", c, "verify", "end-offset", "--seed", "9"]);
    assert!(stdout(&o).starts_with("end-offset seed=9 trials=2 "));

    let bad = scratch("bad.cfg", "bogus=1\n");
    let o = igv(&["--config", bad.to_str().unwrap(), "verify", "connector"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 1"));
}

#[test]
fn compute_commands() {
    let o = igv(&["compute", "cf", "(0+1*sqrt(2))/1"]);
    assert_eq!(stdout(&o).trim(), "pre=[1] period=[2]");
    let o = igv(&["compute", "unique-rep", "-1+3*tau"]);
    assert_eq!(stdout(&o).trim(), "j=2 a=1 b=2");
    let o = igv(&["compute", "orbit-class", "2/9", "--n", "3"]);
    assert_eq!(stdout(&o).trim(), "0");

    // Rationals have no periodic expansion: a failure, not a usage error.
    let o = igv(&["compute", "cf", "3/4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("rational"));
}

#[test]
fn beta_hz_rejects_elements_outside_g1() {
    let id = scratch("identity.pw", "pwmap domain=R tag=HZ\npiece -inf inf [[1,0],[0,1]]\n");
    let o = igv(&["compute", "beta-hz", "--element", id.to_str().unwrap(), "--base", "(1+1*sqrt(5))/2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("not in G_1"), "{}", stderr(&o));
}

#[test]
fn gen_is_deterministic_and_fmt_is_idempotent() {
    let a = igv(&["gen", "fn-random", "--n", "3", "--seed", "12"]);
    let b = igv(&["gen", "fn-random", "--n", "3", "--seed", "12"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("pwmap domain="));

    let f = scratch("fn3.pw", &text);
    let o = igv(&["fmt", f.to_str().unwrap()]);
    assert_eq!(stdout(&o), text);

    let e = igv(&["gen", "end-offset", "--i", "1", "--j", "-2"]);
    assert_eq!(e.status.code(), Some(0));
    assert!(stdout(&e).contains("[[1,1],[0,1]]") && stdout(&e).contains("[[1,-2],[0,1]]"));

    let junk = scratch("junk.pw", "pwmap domain=R\nnonsense\n");
    assert_eq!(igv(&["fmt", junk.to_str().unwrap()]).status.code(), Some(1));
}
