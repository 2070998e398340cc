import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles as O
from conftest import digraphs
from dtwlab.decomp import (FLAVORS, DirectedTreeDecomposition, build_decomposition, deletable_empty_bags,
                           lift_contraction, minorize, remove_deletable_empty_bags, reroot_ncwe,
                           restrict_to_subgraph, singleton_bags, split_bag, usc_to_scv, validate)
from dtwlab.digraph import build_digraph, induced_subgraph, popcount, scc_masks
from dtwlab.errors import DecompositionError
from dtwlab.fixtures import load_fixture
from dtwlab.generators import directed_cycle
from dtwlab.minors import MinorWitness, random_minor_witness, replay_script
from dtwlab.width import exact_width

FIVE = ("NW", "NCW", "NCW0", "SC0", "SCd")


def test_fixture_certificates():
    for name, flavors in [("dtd_SC0_D1", ["SC0"]), ("dtd_NCW_D2", ["NCW"]), ("dtd2_D1p", ["NCW"]),
                          ("dtd3_D2p", ["SC0", "SCd"])]:
        T = load_fixture(name)
        for f in flavors:
            rep = validate(T, f)
            assert rep.valid and rep.width == 3, (name, f, rep.violations[:1])


def test_single_vertex_all_flavors():
    D = build_digraph(["v"], [])
    T = build_decomposition(D, "NW", [("r", ["v"], None, [])])
    for f in FIVE:
        rep = validate(T, f)
        assert rep.valid and rep.width == 0


def test_violations_are_reported():
    C = directed_cycle(3)
    T = build_decomposition(C, "NCW", [("r", ["1"], None, []), ("s", ["2", "3"], "r", [])])
    rep = validate(T)
    assert not rep.valid and rep.violations[0].kind == "guard-condition"
    assert rep.violations[0].witness.check(C)
    T = build_decomposition(C, "NCW", [("r", ["1"], None, []), ("s", ["2"], "r", ["1"])])
    assert any(v.kind == "partition" for v in validate(T).violations)


def test_json_roundtrip():
    T = load_fixture("dtd3_D2p")
    U = DirectedTreeDecomposition.from_dict(T.to_dict(), T.host)
    assert U.to_dict() == T.to_dict()
    with pytest.raises(DecompositionError):
        DirectedTreeDecomposition.from_dict({"root": "r"}, T.host)


@st.composite
def decompositions(draw, max_n=4, max_nodes=4):
    D = draw(digraphs(max_n=max_n))
    m = draw(st.integers(1, max_nodes))
    parent = {0: None}
    for i in range(1, m):
        parent[i] = draw(st.integers(0, i - 1))
    assign = [draw(st.integers(0, m - 1)) for _ in range(D.n)]
    guards = {i: frozenset(v for v in range(D.n) if draw(st.booleans())) for i in range(1, m)}
    bags = {t: frozenset(v for v in range(D.n) if assign[v] == t) for t in range(m)}
    return D, parent, bags, guards


def _build(D, parent, bags, guards, flavor):
    nodes = [(f"t{t}", [D.names[v] for v in sorted(bags[t])],
              None if parent[t] is None else f"t{parent[t]}",
              [D.names[v] for v in sorted(guards.get(t, ()))]) for t in sorted(bags)]
    return build_decomposition(D, flavor, nodes)


@given(decompositions(), st.sampled_from(FLAVORS))
def test_validate_matches_independent_checker(data, flavor):
    D, parent, bags, guards = data
    T = _build(D, parent, bags, guards, flavor)
    rep = validate(T)
    assert rep.valid == O.decomposition_ok(D, flavor, parent, bags, guards, 0)
    assert rep.width == O.decomposition_width(parent, bags, guards, 0)


@given(decompositions(max_n=5), st.sampled_from(FIVE))
def test_separator_property(data, flavor):
    D, parent, bags, guards = data
    T = _build(D, parent, bags, guards, flavor)
    if not validate(T).valid:
        return
    for t in T.order:
        if t == T.root:
            continue
        K = T.subtree_mask(t)
        for c in scc_masks(D, D.full & ~T.guards[t]):
            assert c & K in (0, c)


# -- rerooting -----------------------------------------------------------------------

def test_reroot_at_root_is_identity():
    T = load_fixture("dtd_NCW_D2")
    assert reroot_ncwe(T, T.root).to_dict() == T.to_dict()


def test_reroot_d2_at_bag_4():
    T = load_fixture("dtd_NCW_D2")
    t4 = next(t for t in T.order if T.bag_names(t) == ["4"])
    R = reroot_ncwe(T, t4)
    rep = validate(R)
    assert R.root == t4 and rep.valid and rep.width == 3


def test_reroot_path_on_cycle():
    C = directed_cycle(3)
    T = build_decomposition(C, "NCW0", [("a", ["1"], None, []), ("b", ["2"], "a", ["1"]),
                                        ("c", ["3"], "b", ["1"])])
    assert validate(T).valid
    R = reroot_ncwe(T, "c")
    rep = validate(R)
    assert rep.valid and rep.width == validate(T).width


def test_reroot_rejects_other_flavors():
    with pytest.raises(DecompositionError):
        reroot_ncwe(load_fixture("dtd3_D2p"), "r")


@given(digraphs(max_n=5), st.sampled_from(["NCW", "NCW0"]), st.randoms())
def test_reroot_keeps_validity(D, flavor, rng):
    T = exact_width(D, flavor).certificate
    t = rng.choice([t for t in T.order if T.bags[t]])
    rep = validate(reroot_ncwe(T, t))
    assert rep.valid and rep.width <= validate(T).width


# -- restriction, contraction, minors ------------------------------------------------

def test_restrict_to_host_unchanged():
    T = load_fixture("dtd2_D1p").with_flavor("NCW0")
    assert restrict_to_subgraph(T, T.host).to_dict() == T.to_dict()


def test_restrict_to_single_vertex():
    T = load_fixture("dtd3_D2p").with_flavor("NCW0")
    H = induced_subgraph(T.host, T.host.mask(["3p"]))
    R = restrict_to_subgraph(T, H)
    assert validate(R).valid
    assert [R.bag_names(t) for t in R.order if R.bags[t]] == [["3p"]]


def test_restrict_d1p_without_pi():
    T = load_fixture("dtd2_D1p").with_flavor("NCW0")
    D = T.host
    H = induced_subgraph(D, D.full & ~D.mask(["pi1", "pi2", "pi3", "mpi1", "mpi2", "mpi3"]))
    rep = validate(restrict_to_subgraph(T, H))
    assert rep.valid and rep.width <= 3


def test_restrict_rejects_foreign_graph():
    T = load_fixture("dtd3_D2p").with_flavor("NCW0")
    with pytest.raises(DecompositionError):
        restrict_to_subgraph(T, build_digraph(["zz"], []))


def test_lift_contraction_degree_rule():
    # u -> v -> w with u's only out-edge (u, v): x takes v's slot
    P = build_digraph("uvw", [("u", "v"), ("v", "w")])
    T = build_decomposition(P, "NCW0", [("a", ["u"], None, []), ("b", ["v"], "a", []),
                                        ("c", ["w"], "b", [])])
    L = lift_contraction(T, ("u", "v"), "x")
    assert [t for t in L.order if L.bags[t] & L.host.mask(["x"])] == ["b"]
    assert validate(L).valid
    # a second out-edge at u forces x into u's slot
    Q = build_digraph("uvwz", [("u", "v"), ("u", "z"), ("v", "w")])
    T = build_decomposition(Q, "NCW0", [("a", ["u"], None, []), ("b", ["v"], "a", []),
                                        ("c", ["w"], "b", []), ("d", ["z"], "a", [])])
    L = lift_contraction(T, ("u", "v"), "x")
    assert L.bag_names("a") == ["x"] and not L.bags["b"]
    assert validate(L).valid


def test_stepwise_lift_d1p_to_d1():
    T = load_fixture("dtd2_D1p").with_flavor("NCW0")
    w = load_fixture("witness_D1_in_D1p")
    H = induced_subgraph(T.host, T.host.mask(w.keep_vertices))
    out = restrict_to_subgraph(T, H)
    for u, v, x in w.steps:
        out = lift_contraction(out, (u, v), x)
        assert validate(out).valid
    assert validate(out).width <= 3


def test_minorize_identity():
    T = load_fixture("dtd3_D2p").with_flavor("NCW0")
    assert minorize(T, MinorWitness.identity(T.host)).to_dict() == T.to_dict()


def test_minorize_fixtures():
    for dtd, wit, target in [("dtd2_D1p", "witness_D1_in_D1p", "D1"), ("dtd3_D2p", "witness_D2_in_D2p", "D2")]:
        out = minorize(load_fixture(dtd).with_flavor("NCW0"), load_fixture(wit))
        rep = validate(out)
        assert rep.valid and rep.width <= 3
        assert set(out.host.edge_names()) == set(load_fixture(target).edge_names())


@given(digraphs(max_n=6), st.randoms())
def test_minorize_property(D, rng):
    T = exact_width(D, "NCW0").certificate
    T = reroot_ncwe(T, rng.choice([t for t in T.order if T.bags[t]]))
    w = random_minor_witness(D, rng)
    out = minorize(T, w)
    rep = validate(out, "NCW0")
    assert rep.valid and rep.width <= validate(T).width
    assert out.host == replay_script(D, w).graph or set(out.host.edge_names()) == set(
        replay_script(D, w).graph.edge_names())


# -- bag splitting and cleanup ---------------------------------------------------------

def test_split_two_vertex_bag():
    D = build_digraph("uvw", [("u", "v"), ("v", "u"), ("v", "w"), ("w", "v")])
    T = build_decomposition(D, "SC0v", [("r", ["u", "v"], None, []), ("s", ["w"], "r", ["v"])])
    assert validate(T).valid
    S = split_bag(T, "r", "v")
    new = next(t for t in S.order if t not in T.order)
    assert S.bag_names("r") == ["u"] and S.bag_names(new) == ["v"]
    assert S.guard_names(new) == ["u"]
    assert validate(S, "USC0").valid


def test_split_d1_root():
    T = load_fixture("dtd_SC0_D1")
    S = split_bag(T, T.root, "0p")
    rep = validate(S, "USC0")
    assert rep.valid and rep.width <= 3


def test_split_errors():
    T = load_fixture("dtd_SC0_D1")
    with pytest.raises(DecompositionError):
        split_bag(T, T.root, "a")
    with pytest.raises(DecompositionError):
        split_bag(load_fixture("dtd_NCW_D2"), "r", "0")


def test_singleton_pipeline_on_fixtures():
    for name in ("dtd_SC0_D1", "dtd3_D2p"):
        T = load_fixture(name).with_flavor("SC0v")
        S = T
        while any(popcount(S.bags[t]) >= 2 for t in S.order):
            t = next(t for t in S.preorder() if popcount(S.bags[t]) >= 2)
            U = split_bag(S, t, S.host.names_of(S.bags[t])[-1])
            assert validate(U, "USC0").valid
            S, _ = usc_to_scv(U)
            rep = validate(S, "SC0v")
            assert rep.valid and rep.width <= 3
        S2, passes = singleton_bags(T)
        assert passes > 0 and all(popcount(b) <= 1 for b in S2.bags.values())


def test_usc_identity_on_scv():
    T = load_fixture("dtd3_D2p").with_flavor("SC0v")
    S, p = usc_to_scv(T)
    assert S.to_dict() == T.with_flavor("SC0v").to_dict()
    assert all(p[t] == t for t in S.order)


def test_usc_splits_two_components():
    D = build_digraph("rab", [("r", "a"), ("a", "r"), ("r", "b"), ("b", "r")])
    T = build_decomposition(D, "USC0", [("x", ["r"], None, []), ("y", ["a", "b"], "x", ["r"])])
    assert validate(T).valid and not validate(T, "SC0v").valid
    S, p = usc_to_scv(T)
    assert validate(S, "SC0v").valid
    assert len(S.children[S.root]) == 2
    assert sorted(p[c] for c in S.children[S.root]) == ["y", "y"]


def _chain(guard1, guard2, flavor="SC0v"):
    # r{a} -> e{} -> s{b} with digons a-b
    D = build_digraph("abc", [("a", "b"), ("b", "a"), ("b", "c"), ("c", "b")])
    return build_decomposition(D, flavor, [("r", ["a"], None, []), ("e", [], "r", guard1),
                                           ("s", ["b", "c"], "e", guard2)])


def test_remove_nothing():
    T = load_fixture("dtd3_D2p").with_flavor("SC0v")
    if not deletable_empty_bags(T):
        assert remove_deletable_empty_bags(T).to_dict() == T.to_dict()


def test_remove_subset_guard():
    T = _chain(["a"], ["a"])
    assert validate(T).valid and deletable_empty_bags(T) == ["e"]
    R = remove_deletable_empty_bags(T)
    assert "e" not in R.order and R.guard_names("s") == ["a"]
    assert validate(R).valid


def test_remove_chain_confluent():
    D = build_digraph("ab", [("a", "b"), ("b", "a")])
    T = build_decomposition(D, "SC0v", [("r", ["a"], None, []), ("e1", [], "r", ["a"]),
                                        ("e2", [], "e1", ["a"]), ("s", ["b"], "e2", ["a"])])
    assert validate(T).valid and set(deletable_empty_bags(T)) == {"e1", "e2"}
    results = []
    for first in ("e1", "e2"):
        order = [first, "e2" if first == "e1" else "e1"]
        X = T
        for t in order:
            c = X.children[t][0]
            parent = {k: v for k, v in X.parent.items() if k != t}
            parent[c] = X.parent[t]
            guards = {k: v for k, v in X.guards.items() if k != t}
            guards[c] = X.guards[t] & X.guards[c]
            X = DirectedTreeDecomposition(D, X.root, parent, {k: v for k, v in X.bags.items() if k != t},
                                          guards, "SC0v", [k for k in X.order if k != t])
        results.append(X.to_dict())
    assert results[0] == results[1] == remove_deletable_empty_bags(T).to_dict()


@given(digraphs(max_n=5))
def test_pipeline_property(D):
    T = exact_width(D, "SC0v").certificate
    w0 = validate(T).width
    S, _ = singleton_bags(T)
    R = remove_deletable_empty_bags(S)
    for X in (S, R):
        rep = validate(X, "SC0v")
        assert rep.valid and rep.width <= w0
    assert not deletable_empty_bags(R)
