"""Smoke test for the igv extension module.

Build first:  pip install ./crates/python   (or maturin develop -m crates/python/Cargo.toml)
"""

import igv


def main():
    assert igv.cf("(0+1*sqrt(2))/1") == "pre=[1] period=[2]"
    assert igv.pz_witness("(1+1*sqrt(5))/2").startswith("[[")
    assert igv.unique_rep("-1+3*tau") == (2, 1, 2)
    assert igv.orbit_class("2/9", 3) == 0
    assert igv.same_orbit("1/4", "3/4", 2)

    text = igv.end_offset(1, -2)
    assert text.startswith("pwmap domain=R tag=HZ")
    assert igv.fmt(text) == text

    try:
        igv.cf("3/4")
    except igv.IgvError:
        pass
    else:
        raise AssertionError("rational input accepted")

    try:
        igv.verify("no-such-suite")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown suite accepted")

    report = igv.verify("connector", seed=1, trials=10)
    assert set(report) == {"suite", "seed", "trials", "failures", "first_counterexample", "wall_time_ms"}
    assert report["failures"] == 0, report["first_counterexample"]
    assert len(igv.SUITES) == 12
    print("smoke test passed")


if __name__ == "__main__":
    main()
