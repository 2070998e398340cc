import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles as O
from conftest import digraphs
from dtwlab.digraph import build_digraph
from dtwlab.errors import CapExceeded, DtwlabError
from dtwlab.fixtures import load_fixture
from dtwlab.generators import bidirected_clique, directed_cycle, nonisomorphic_digraphs
from dtwlab.minors import MinorWitness, random_minor_witness, replay_script
from dtwlab.obstructions import (Bramble, bramble_haven_check, bramble_number, bramble_order, is_k_linked,
                                 klinked_to_bramble, lift_bramble, min_hitting_set, validate_bramble)


def _K3_pairs():
    K = bidirected_clique(3)
    names = K.names
    B = Bramble([K.mask([a, b]) for a, b in [(names[0], names[1]), (names[1], names[2]), (names[0], names[2])]])
    return K, B


def test_weak_triangles():
    D = load_fixture("bramble_D")
    B = Bramble([D.mask(["1", "2", "3"]), D.mask(["4", "5", "6"])], "weak")
    assert validate_bramble(D, B).valid
    assert bramble_order(D, B).order == 2
    assert not validate_bramble(D, Bramble(B.elements, "strong")).valid


def test_k3_pairs():
    K, B = _K3_pairs()
    assert validate_bramble(K, B).valid
    assert bramble_order(K, B).order == 2
    assert O.hitting_number([O.to_set(x) for x in B.elements]) == 2


def test_singleton_bramble():
    D = build_digraph(["v"], [])
    c = bramble_order(D, Bramble([1]))
    assert c.order == 1 and c.cover == 1


def test_invalid_elements():
    D = build_digraph("ab", [("a", "b")])
    v = validate_bramble(D, Bramble([D.mask(["a", "b"])]))
    assert not v.valid
    with pytest.raises(DtwlabError):
        bramble_order(D, Bramble([D.mask(["a", "b"])]))


@given(st.lists(st.integers(1, 2 ** 7 - 1), min_size=1, max_size=8))
def test_hitting_set_is_minimum(sets):
    H = min_hitting_set(sets)
    assert all(H & s for s in sets)
    assert bin(H).count("1") == O.hitting_number([O.to_set(s) for s in sets])


def test_single_vertex_number():
    assert bramble_number(build_digraph(["v"], []))[0] == 1


def test_weak_numbers_of_pair():
    assert bramble_number(load_fixture("bramble_D"), "weak")[0] == 2
    assert bramble_number(load_fixture("bramble_Dp"), "weak", cap=None)[0] == 1


@pytest.mark.parametrize("n", [3, 4, 5])
def test_cycle_number(n):
    C = directed_cycle(n)
    assert bramble_number(C)[0] == 1
    if n == 4:
        assert O.bramble_number(C) == 1


def test_numbers_match_exhaustive_search():
    for n in range(1, 5):
        for D in nonisomorphic_digraphs(n):
            for weak in (False, True):
                t, B = bramble_number(D, "weak" if weak else "strong")
                assert t == O.bramble_number(D, weak)
                assert validate_bramble(D, B).valid and bramble_order(D, B).order == t


def test_cap():
    with pytest.raises(CapExceeded):
        bramble_number(load_fixture("D2"))


def test_lift_identity():
    D = load_fixture("bramble_D")
    B = Bramble([D.mask(["1", "2", "3"]), D.mask(["3", "1", "4", "5", "6"])])
    L = lift_bramble(D, D, MinorWitness.identity(D), B)
    assert L.elements == B.elements


def test_lift_whole_graph():
    D, Dp = load_fixture("bramble_D"), load_fixture("bramble_Dp")
    L = lift_bramble(D, Dp, load_fixture("witness_bramble_D_in_Dp"), Bramble([D.full]))
    assert L.elements == [Dp.full]


def test_lift_rejects_weak():
    D = load_fixture("bramble_D")
    with pytest.raises(DtwlabError):
        lift_bramble(D, D, MinorWitness.identity(D), Bramble([D.full], "weak"))


@given(digraphs(max_n=6), st.randoms())
def test_lift_and_minor_monotonicity(D, rng):
    w = random_minor_witness(D, rng)
    Dm = replay_script(D, w).graph
    t, B = bramble_number(Dm)
    assert t <= bramble_number(D)[0]
    L = lift_bramble(Dm, D, w, B)
    assert validate_bramble(D, L).valid
    assert bramble_order(D, L).order >= t


def test_empty_w_never_linked():
    D = bidirected_clique(3)
    for k in range(3):
        assert not is_k_linked(D, 0, k).linked


def test_k5_two_linked():
    K = bidirected_clique(5)
    assert is_k_linked(K, K.full, 2).linked
    assert not is_k_linked(K, K.full, 3).linked


def test_d1_not_four_linked_sample():
    D1 = load_fixture("D1")
    rng = random.Random(9)
    for _ in range(3):
        W = rng.sample(D1.names, 9)
        assert not is_k_linked(D1, W, 4, budget=200000).linked


def test_majority_bramble_of_k3():
    K = bidirected_clique(3)
    B = klinked_to_bramble(K, K.full, 1)
    assert bramble_order(K, B).order >= 2
    assert bramble_haven_check(K, B, 2).valid


def test_digon_pair():
    D = build_digraph("ab", [("a", "b"), ("b", "a")])
    W = D.full
    k = max(k for k in range(3) if is_k_linked(D, W, k).linked)
    B = klinked_to_bramble(D, W, k)
    assert all(E & W == W for E in B.elements)
    assert bramble_order(D, B).order >= k + 1


def test_not_linked_raises():
    D = build_digraph("ab", [])
    with pytest.raises(DtwlabError):
        klinked_to_bramble(D, D.full, 1)


@given(digraphs(min_n=2, max_n=7), st.integers(1, 127), st.integers(1, 3))
def test_linked_sets_give_brambles(D, W, k):
    W &= D.full
    if not W or not is_k_linked(D, W, k).linked:
        return
    B = klinked_to_bramble(D, W, k)
    assert validate_bramble(D, B).valid and bramble_order(D, B).order >= k + 1


def test_haven_of_single_vertex():
    D = build_digraph(["v"], [])
    assert bramble_haven_check(D, Bramble([1]), 1).valid


def test_haven_totality_failure():
    K, B = _K3_pairs()
    v = bramble_haven_check(K, B, 3)
    assert not v.valid and "no element avoids" in v.problems[0]


def test_bramble_json():
    D = load_fixture("bramble_D")
    B = load_fixture("bramble_weak_D")
    assert Bramble.from_dict(B.to_dict(D), D) == B
    with pytest.raises(DtwlabError):
        Bramble.from_dict({"kind": "odd", "elements": []}, D)
