import pytest

from teashare.verify import PROPERTIES, SUITES, PropertyResult, run_property, run_suites


def test_every_suite_passes_quickly():
    results = run_suites("all", seed=11, trials=15)
    assert {r.suite for r in results} == set(SUITES)
    assert all(r.ok for r in results), [r.as_dict() for r in results if not r.ok]


def test_reports_are_seeded():
    a = [r.as_dict() for r in run_suites("phi", seed=5, trials=10)]
    b = [r.as_dict() for r in run_suites("phi", seed=5, trials=10)]
    assert a == b


def test_failures_keep_smallest_case():
    def flaky(rng, trials):
        for size in (5, 2, 9):
            yield size > 3, (size,), lambda size=size: {"size": size}

    res = run_property("x", "flaky", flaky, 0, 1, 0)
    assert res.failed == 1 and res.counterexample == {"size": 2}

    def mostly_bad(rng, trials):
        for size in (5, 2, 9):
            yield False, (size,), lambda size=size: {"size": size}

    res = run_property("x", "bad", mostly_bad, 0, 1, 0)
    assert res.failed == 3 and res.counterexample == {"size": 2} and not res.ok


def test_bad_arguments():
    with pytest.raises(ValueError):
        run_suites("nope")
    with pytest.raises(ValueError):
        run_suites("phi", trials=0)
