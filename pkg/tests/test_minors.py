import random

import pytest
from hypothesis import given

import oracles as O
from conftest import digraphs
from dtwlab.digraph import build_digraph, delete_edges, induced_subgraph, is_strongly_connected
from dtwlab.errors import ScriptError
from dtwlab.fixtures import load_fixture
from dtwlab.generators import directed_cycle, nonisomorphic_digraphs, random_dag, random_digraph
from dtwlab.minors import (Branching, ButterflyModel, MinorWitness, find_butterfly_minor, minimal_major,
                           model_from_script, random_minor_witness, replay_script, same_graph_by_names,
                           verify_model, verify_witness)


def test_identity_replay():
    D = load_fixture("D2")
    assert replay_script(D, MinorWitness.identity(D)).graph == D


def test_stored_witnesses_replay():
    for small, big, w in [("D1", "D1p", "witness_D1_in_D1p"), ("D2", "D2p", "witness_D2_in_D2p"),
                          ("bramble_D", "bramble_Dp", "witness_bramble_D_in_Dp")]:
        G = replay_script(load_fixture(big), load_fixture(w)).graph
        assert same_graph_by_names(G, load_fixture(small))


def test_d2_witness_is_two_contractions():
    w = load_fixture("witness_D2_in_D2p")
    assert len(w.keep_vertices) == 18 and not w.drop_edges
    assert sorted(tuple(s[:2]) for s in w.steps) == [("4", "5"), ("m4", "m5")]


def test_bad_script_raises():
    D = directed_cycle(3)
    w = MinorWitness(list(D.names), [], [("1", "3", "x")])
    with pytest.raises(ScriptError):
        replay_script(D, w)


def test_witness_json_roundtrip():
    w = load_fixture("witness_D1_in_D1p")
    assert MinorWitness.from_dict(w.to_dict()) == w
    with pytest.raises(ScriptError):
        MinorWitness.from_dict({"steps": []})


def test_identity_model_valid():
    D = load_fixture("bramble_D")
    mu = ButterflyModel({v: Branching(v) for v in D.names}, {e: e for e in D.edge_names()})
    assert verify_model(D, D, mu).valid


def test_overlapping_images_flagged():
    D = build_digraph("ab", [("a", "b")])
    mu = ButterflyModel({"a": Branching("a"), "b": Branching("b", t_in={"a": "b"})}, {("a", "b"): ("a", "b")})
    v = verify_model(D, D, mu)
    assert not v.valid and any(kind == "disjointness" for kind, _ in v.violations)


def test_models_from_stored_scripts():
    for small, big, w in [("D1", "D1p", "witness_D1_in_D1p"), ("D2", "D2p", "witness_D2_in_D2p"),
                          ("bramble_D", "bramble_Dp", "witness_bramble_D_in_Dp")]:
        mu = model_from_script(load_fixture(big), load_fixture(w))
        assert verify_model(load_fixture(small), load_fixture(big), mu).valid


@given(digraphs(max_n=6))
def test_random_scripts_give_valid_models(D):
    rng = random.Random(D.num_edges() * 31 + D.n)
    w = random_minor_witness(D, rng)
    G = replay_script(D, w).graph
    assert verify_witness(G, D, w)
    assert verify_model(G, D, model_from_script(D, w)).valid


def test_self_minor():
    D = load_fixture("D2")
    w = find_butterfly_minor(D, D)
    assert w is not None and not w.steps and verify_witness(D, D, w)


def test_stored_pairs_found():
    for small, big in [("bramble_D", "bramble_Dp"), ("D2", "D2p")]:
        w = find_butterfly_minor(load_fixture(small), load_fixture(big))
        assert w is not None and verify_witness(load_fixture(small), load_fixture(big), w)


def test_cycle_not_in_dag():
    rng = random.Random(4)
    C = directed_cycle(3)
    for _ in range(10):
        assert find_butterfly_minor(C, random_dag(6, 0.6, rng)) is None


def test_dags_only_have_acyclic_minors():
    rng = random.Random(5)
    for _ in range(40):
        D = random_dag(rng.randint(2, 7), 0.5, rng)
        G = replay_script(D, random_minor_witness(D, rng)).graph
        assert not any(is_strongly_connected(G, 1 << i | 1 << j)
                       for i in range(G.n) for j in range(i + 1, G.n))


def test_search_agrees_with_exhaustive_enumeration():
    small = [D for n in range(1, 4) for D in nonisomorphic_digraphs(n)]
    rng = random.Random(6)
    hosts = [random_digraph(5, rng.choice([0.25, 0.4]), rng) for _ in range(6)]
    hosts += [D for D in nonisomorphic_digraphs(3)]
    for H in hosts:
        minors = O.all_minors(H)
        for Dm in small:
            w = find_butterfly_minor(Dm, H)
            assert (w is not None) == (O.canon(Dm) in minors)
            if w is not None:
                assert verify_witness(Dm, H, w)


def test_budget():
    from dtwlab.errors import BudgetExceeded
    with pytest.raises(BudgetExceeded):
        find_butterfly_minor(load_fixture("D1"), load_fixture("D1p"), budget=1)


def _no_single_deletion(Dm, H):
    for e in H.edge_names():
        if find_butterfly_minor(Dm, delete_edges(H, [e])) is not None:
            return False
    for i in range(H.n):
        if find_butterfly_minor(Dm, induced_subgraph(H, H.full & ~(1 << i))) is not None:
            return False
    return True


def test_minimal_major_of_bramble_pair():
    D, Dp = load_fixture("bramble_D"), load_fixture("bramble_Dp")
    H, w = minimal_major(D, Dp, load_fixture("witness_bramble_D_in_Dp"))
    assert H == Dp
    assert verify_witness(D, Dp, w)
    assert _no_single_deletion(D, H)


def test_minimal_major_of_single_vertex():
    D = load_fixture("bramble_D")
    pt = build_digraph(["1"], [])
    H, w = minimal_major(pt, D, MinorWitness(["1"]))
    assert H.n == 1 and verify_witness(pt, D, w)


def test_minimal_major_of_self_strong():
    C = directed_cycle(4)
    H, _ = minimal_major(C, C, MinorWitness.identity(C))
    assert H == C and is_strongly_connected(H, H.full)


@given(digraphs(min_n=2, max_n=5))
def test_minimal_major_audit(D):
    rng = random.Random(D.num_edges())
    w = random_minor_witness(D, rng)
    Dm = replay_script(D, w).graph
    H, w2 = minimal_major(Dm, D, w)
    assert verify_witness(Dm, D, w2)
    assert _no_single_deletion(Dm, H)
