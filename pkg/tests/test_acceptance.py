"""One test per acceptance criterion, each run through the same code as ``dtwlab repro N``.

A line per criterion is printed in the terminal summary (see conftest.py).
"""

import pytest

from dtwlab.repro import BY_NUMBER, RUNTIME_LIMITS, nonclosure, run_scenario

RESULTS = {}


def check(n):
    sc = run_scenario(str(n))
    limit = RUNTIME_LIMITS[n]
    in_time = limit is None or sc.elapsed < limit
    RESULTS[n] = (sc.passed and in_time, sc.elapsed, BY_NUMBER[n])
    print(sc.report())
    assert sc.passed, sc.report()
    assert in_time, f"criterion {n} took {sc.elapsed:.1f}s, limit {limit}s"
    return sc


def test_criterion_1_certificates():
    check(1)


@pytest.mark.slow
def test_criterion_2_games():
    sc = check(2)
    assert sc.facts["D1_free"] == 4 and sc.facts["D1_monotone"] == 4
    assert sc.facts["D2_free"] <= 4 and sc.facts["D2_monotone"] >= 5
    assert sc.facts["D2p_monotone"] == 4


def test_criterion_3_minors():
    check(3)


@pytest.mark.slow
def test_criterion_4_nonclosure():
    sc = check(4)
    assert sc.facts["D1_min_tree"] >= 36


def test_criterion_4_budget_fallback():
    # with a tiny budget the tree-size search gives up and the stored tree is checked
    sc = nonclosure(budget=1)
    assert sc.passed, sc.report()
    assert sc.facts["D1_min_tree"] is None


def test_criterion_5_ncw0_closure():
    check(5)


def test_criterion_6_brambles():
    check(6)


@pytest.mark.slow
def test_criterion_7_lattice():
    check(7)


def test_criterion_8_transforms():
    check(8)
