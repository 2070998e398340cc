import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles as O
from conftest import digraphs
from dtwlab.decomp import validate
from dtwlab.digraph import build_digraph
from dtwlab.errors import BudgetExceeded, CapExceeded
from dtwlab.fixtures import load_fixture
from dtwlab.game import cop_number
from dtwlab.generators import bidirected_clique, directed_cycle, nonisomorphic_digraphs
from dtwlab.repro import LATTICE_FLAVORS, lattice_check
from dtwlab.width import decide_width, exact_width


def _cert_ok(D, T, flavor):
    parent = {t: T.parent.get(t) for t in T.order}
    bags = {t: O.to_set(T.bags[t]) for t in T.order}
    guards = {t: O.to_set(T.guards[t]) for t in T.order if t != T.root}
    return O.decomposition_ok(D, flavor, parent, bags, guards, T.root)


def test_single_vertex():
    D = build_digraph(["v"], [])
    for f in LATTICE_FLAVORS:
        assert exact_width(D, f).width == 0


@pytest.mark.parametrize("n", [3, 4, 5])
def test_cycles_have_width_one(n):
    C = directed_cycle(n)
    for f in LATTICE_FLAVORS:
        res = exact_width(C, f)
        assert res.width == 1
        assert validate(res.certificate, f).valid and _cert_ok(C, res.certificate, f)


def test_three_cycle_brute_force():
    C = directed_cycle(3)
    for f in LATTICE_FLAVORS:
        assert O.brute_width(C, f, 3) == 1


def test_clique_four():
    K = bidirected_clique(4)
    assert cop_number(K) == 4
    for f in LATTICE_FLAVORS:
        res = exact_width(K, f)
        assert res.width == 3 and validate(res.certificate, f).valid


def test_exhaustive_small_graphs():
    # nonempty-bag flavors have at most n nodes, so the brute force is complete
    for n in (1, 2, 3):
        for D in nonisomorphic_digraphs(n):
            for f in ("NW", "NCW", "SCd"):
                assert exact_width(D, f).width == O.brute_width(D, f, n)
            for f in ("NCW0", "SC0"):
                assert exact_width(D, f).width <= O.brute_width(D, f, n)


@given(digraphs(max_n=5), st.sampled_from(LATTICE_FLAVORS + ("SC0v",)))
def test_certificates_pass_independent_check(D, f):
    res = exact_width(D, f)
    assert _cert_ok(D, res.certificate, f)
    assert res.width == validate(res.certificate).width
    if res.width > 0:
        assert decide_width(D, f, res.width - 1) is None


def test_lattice_small():
    for n in range(1, 5):
        for D in nonisomorphic_digraphs(n):
            assert lattice_check(D) == []


def test_bramble_width_link():
    rng = random.Random(11)
    from dtwlab.generators import sample_nonisomorphic
    from dtwlab.obstructions import bramble_number
    for D in sample_nonisomorphic(5, 60, rng):
        bn, _ = bramble_number(D)
        for f in LATTICE_FLAVORS:
            w = exact_width(D, f).width
            assert w >= bn - 1
            for k in range(0, 3):
                if w > 3 * k + 1:
                    assert bn >= k + 1


def test_singleton_search_on_d2():
    D2, D2p = load_fixture("D2"), load_fixture("D2p")
    assert decide_width(D2, "SC0v", 3, max_bag=1, cap=None) is None
    T = decide_width(D2p, "SC0v", 3, max_bag=1, cap=None)
    assert T is not None and validate(T, "SC0v").valid


def test_caps_and_budgets():
    with pytest.raises(CapExceeded):
        exact_width(load_fixture("D2"), "NCW")
    with pytest.raises(BudgetExceeded):
        decide_width(load_fixture("D2"), "SC0", 3, budget=5, cap=None)
