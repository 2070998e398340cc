"""Regenerate the JSON fixtures under src/dtwlab/data from the figure transcription.

Run from the repository root: ``python3 tools/build_fixtures.py``. The edge
lists below are read off the figures; lines drawn without arrowheads are
digons. TRANSCRIPTION.md in the data directory records every choice.
"""

from __future__ import annotations

import hashlib
import json
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from dtwlab.digraph import build_digraph  # noqa: E402
from dtwlab.decomp import build_decomposition, validate  # noqa: E402

DATA = ROOT / "src" / "dtwlab" / "data"


def p(v: str) -> str:
    """Primed name."""
    return v + "p"


def neg(v: str) -> str:
    """Mirror of a side vertex; 0 and 0p are shared by both sides."""
    if v in ("0", "0p"):
        return v
    return "m" + v


def mirror_pairs(pairs):
    out = list(pairs)
    for a, b in pairs:
        m = (neg(a), neg(b))
        if m not in out:
            out.append(m)
    return out


def graph(vertices, digons, arcs):
    edges = []
    for a, b in digons:
        edges += [(a, b), (b, a)]
    edges += list(arcs)
    seen = set()
    uniq = []
    for e in edges:
        if e not in seen:
            seen.add(e)
            uniq.append(e)
    return build_digraph(vertices, uniq)


# -- D1 and D1' ---------------------------------------------------------------

SIDE1 = ["a", "ap", "b", "bp", "c", "cp", "d", "dp", "1", "1p", "2", "2p", "3", "3p", "4", "4p"]

D1_DIGONS_SIDE = [
    ("0", "a"), ("0p", "ap"), ("0p", "a"), ("0", "ap"),
    ("a", "ap"), ("a", "b"), ("a", "bp"), ("ap", "bp"), ("ap", "b"),
    ("b", "bp"), ("b", "c"), ("b", "cp"), ("bp", "cp"),
    ("c", "cp"), ("c", "d"), ("c", "dp"), ("cp", "dp"), ("cp", "d"),
    ("d", "dp"), ("d", "1"), ("d", "1p"), ("dp", "1p"),
    ("1", "1p"), ("1", "2"), ("1", "2p"), ("1p", "2p"), ("1p", "2"),
    ("2", "2p"), ("2", "3"), ("2p", "3p"), ("3", "3p"), ("2", "3p"),
    ("3", "4"), ("3", "4p"), ("3p", "4p"), ("4p", "4"),
]
D1_ARCS_SIDE_COMMON = [
    ("4", "2p"), ("4p", "2"), ("4", "2"), ("4p", "2p"), ("4", "1"), ("4p", "1"),
    ("1", "c"), ("c", "a"), ("b", "0"), ("2", "d"), ("2", "dp"), ("d", "b"), ("d", "bp"),
]
D1_ARCS_SIDE_ONLY = [("0", "4"), ("0", "4p")]
D1P_ARCS_SIDE_ONLY = [("0", "pi1"), ("pi1", "pi2"), ("pi2", "pi3"), ("pi3", "4"), ("pi3", "4p")]


def d1_vertices(extra=()):
    side = SIDE1 + list(extra)
    return ["0", "0p"] + side + [neg(v) for v in side]


def make_D1():
    digons = mirror_pairs([("0", "0p")] + D1_DIGONS_SIDE)
    arcs = mirror_pairs(D1_ARCS_SIDE_COMMON + D1_ARCS_SIDE_ONLY)
    return graph(d1_vertices(), digons, arcs)


def make_D1p():
    digons = mirror_pairs([("0", "0p")] + D1_DIGONS_SIDE)
    arcs = mirror_pairs(D1_ARCS_SIDE_COMMON + D1P_ARCS_SIDE_ONLY)
    return graph(d1_vertices(["pi1", "pi2", "pi3"]), digons, arcs)


# -- D2 and D2' ---------------------------------------------------------------

SIDE2 = ["1", "1p", "2", "2p", "3", "3p", "4"]
D2_DIGONS_SIDE = [
    ("0", "1"), ("0p", "1p"), ("0p", "1"),
    ("1", "1p"), ("1", "2"), ("1p", "2p"), ("1p", "2"),
    ("2", "2p"), ("2", "3"), ("2p", "3p"), ("2p", "3"), ("3", "3p"), ("2", "3p"),
    ("3", "4"), ("3p", "4"),
]
D2_ARCS_SIDE_COMMON = [("0", "2p"), ("0p", "2"), ("0", "2"), ("0p", "2p")]
D2_ARCS_SIDE_ONLY = [("4", "0"), ("4", "0p")]
D2P_ARCS_SIDE_ONLY = [("4", "5"), ("5", "0"), ("5", "0p")]


def make_D2():
    digons = mirror_pairs([("0", "0p")] + D2_DIGONS_SIDE)
    arcs = mirror_pairs(D2_ARCS_SIDE_COMMON + D2_ARCS_SIDE_ONLY)
    side = SIDE2
    return graph(["0", "0p"] + side + [neg(v) for v in side], digons, arcs)


def make_D2p():
    digons = mirror_pairs([("0", "0p")] + D2_DIGONS_SIDE)
    arcs = mirror_pairs(D2_ARCS_SIDE_COMMON + D2P_ARCS_SIDE_ONLY)
    side = SIDE2 + ["5"]
    return graph(["0", "0p"] + side + [neg(v) for v in side], digons, arcs)


# -- the bramble pair -----------------------------------------------------------

def make_bramble_D():
    return build_digraph(["1", "2", "3", "4", "5", "6"],
                         [("1", "2"), ("2", "3"), ("3", "1"), ("4", "5"), ("5", "6"), ("6", "4"),
                          ("1", "4"), ("6", "3")])


def make_bramble_Dp():
    return build_digraph(["1", "1p", "2", "2p", "3", "4", "4p", "5", "5p", "6", "a", "b"],
                         [("1", "1p"), ("1p", "2"), ("2", "2p"), ("2p", "3"), ("3", "1"),
                          ("4", "4p"), ("4p", "5"), ("5", "5p"), ("5p", "6"), ("6", "4"),
                          ("1", "a"), ("a", "4"), ("6", "b"), ("b", "3")])


# -- decompositions -----------------------------------------------------------

def chain(prefix, parent, bags_guards, sign=False):
    """Nodes of a path hanging off ``parent``; names mirrored when ``sign``."""
    f = neg if sign else (lambda v: v)
    nodes = []
    for k, (bag, guard) in enumerate(bags_guards):
        t = f"{prefix}{k}"
        nodes.append((t, [f(v) for v in bag], parent, [f(v) for v in guard]))
        parent = t
    return nodes


SC0_D1_CHAIN = [
    (["a", "ap"], ["0", "0p"]), (["b"], ["0", "a", "ap"]), (["bp"], ["a", "ap", "b"]),
    ([], ["a", "b", "bp"]), (["cp"], ["0", "b", "bp"]), (["c"], ["0", "b", "cp"]),
    (["d"], ["0", "c", "cp"]), (["dp"], ["c", "cp", "d"]), ([], ["c", "d", "dp"]),
    (["1p"], ["0", "d", "dp"]), (["1"], ["0", "d", "1p"]), (["2"], ["0", "1", "1p"]),
    (["2p"], ["1", "1p", "2"]), ([], ["1", "2", "2p"]), (["3p"], ["0", "2", "2p"]),
    (["3"], ["0", "2", "3p"]), (["4p"], ["0", "3", "3p"]), (["4"], ["0", "3", "4p"]),
]

DTD2_D1P_CHAIN = [
    (["a", "ap"], ["0", "0p"]), (["b"], ["0", "a", "ap"]), (["bp"], ["a", "ap", "b"]),
    (["pi1"], ["a", "b", "bp"]), (["cp"], ["pi1", "b", "bp"]), (["c"], ["pi1", "b", "cp"]),
    (["d"], ["pi1", "c", "cp"]), (["dp"], ["c", "cp", "d"]), (["pi2"], ["c", "d", "dp"]),
    (["1p"], ["pi2", "d", "dp"]), (["1"], ["pi2", "d", "1p"]), (["2"], ["pi2", "1", "1p"]),
    (["2p"], ["1", "1p", "2"]), (["pi3"], ["1", "2", "2p"]), (["3p"], ["pi3", "2", "2p"]),
    (["3"], ["pi3", "2", "3p"]), (["4p"], ["pi3", "3", "3p"]), (["4"], ["pi3", "3", "4p"]),
]

NCW_D2_CHAIN = [
    (["1"], ["0", "0p"]), (["1p"], ["0p", "1", "4"]), (["2"], ["1", "1p", "4"]),
    (["2p"], ["1p", "2", "4"]), (["3"], ["2", "2p"]), (["3p"], ["2", "2p", "3"]),
    (["4"], ["3", "3p"]),
]

DTD3_D2P_CHAIN = [
    (["1"], ["0", "0p"]), (["1p"], ["0p", "1", "5"]), (["2"], ["1", "1p", "5"]),
    (["2p"], ["1p", "2", "5"]), (["3"], ["2", "2p", "5"]), (["3p"], ["2", "2p", "3"]),
    (["4"], ["3", "3p"]),
]


def two_sided(host, flavor, chain_data, leaves=()):
    nodes = [("r", ["0", "0p"], None, [])]
    for name, bag, guard in leaves:
        nodes.append((name, bag, "r", guard))
    nodes += chain("p", "r", chain_data)
    nodes += chain("m", "r", chain_data, sign=True)
    return build_decomposition(host, flavor, nodes)


def make_decompositions(g):
    return {
        "dtd_SC0_D1": two_sided(g["D1"], "SC0", SC0_D1_CHAIN),
        "dtd2_D1p": two_sided(g["D1p"], "NCW", DTD2_D1P_CHAIN),
        "dtd_NCW_D2": two_sided(g["D2"], "NCW", NCW_D2_CHAIN),
        "dtd3_D2p": two_sided(g["D2p"], "SC0", DTD3_D2P_CHAIN,
                              leaves=[("x5", ["5"], ["0", "0p"]), ("xm5", ["m5"], ["0", "0p"])]),
    }


# -- minor witnesses ------------------------------------------------------------

def make_witnesses(g):
    from dtwlab.minors import MinorWitness
    d1 = MinorWitness(list(g["D1p"].names), [], [
        ("0", "pi1", "0"), ("0", "pi2", "0"), ("0", "pi3", "0"),
        ("0", "mpi1", "0"), ("0", "mpi2", "0"), ("0", "mpi3", "0")])
    d2 = MinorWitness(list(g["D2p"].names), [], [("4", "5", "4"), ("m4", "m5", "m4")])
    br = MinorWitness(list(g["bramble_Dp"].names), [], [
        ("1", "1p", "1"), ("2", "2p", "2"), ("4", "4p", "4"), ("5", "5p", "5"),
        ("1", "a", "1"), ("6", "b", "6")])
    return {"witness_D1_in_D1p": d1, "witness_D2_in_D2p": d2,
            "witness_bramble_D_in_Dp": br}


def make_brambles():
    return {"bramble_weak_D": {"kind": "weak", "elements": [["1", "2", "3"], ["4", "5", "6"]]}}


def make_strategies(g):
    from dtwlab.game import path_strategy_tree
    side = [["0", "0p", "a", "ap"], ["0", "a", "ap", "b"], ["a", "ap", "b", "bp"],
            ["a", "b", "bp", "0"], ["b", "bp", "0", "cp"], ["b", "0", "cp", "c"],
            ["0", "cp", "c", "d"], ["cp", "c", "d", "dp"], ["c", "d", "dp", "0"],
            ["d", "dp", "0", "1p"], ["d", "0", "1p", "1"], ["0", "1p", "1", "2"],
            ["1p", "1", "2", "2p"], ["1", "2", "2p", "0"], ["2", "2p", "0", "3p"],
            ["2", "0", "3p", "3"], ["0", "3p", "3", "4p"], ["0", "3", "4p", "4"]]
    mside = [[neg(v) for v in c] for c in side]
    sweep = path_strategy_tree(g["D1"], [["0", "0p"]], [side, mside])
    t36 = path_strategy_tree(g["D1"], [side[0]], [side[1:], mside])
    d2p_side = [["0", "0p", "1", "5"], ["0p", "1", "1p", "5"], ["1", "1p", "2", "5"],
                ["1p", "2", "2p", "5"], ["2", "2p", "3", "5"], ["2", "2p", "3", "3p"],
                ["3", "3p", "4"]]
    d2p = path_strategy_tree(g["D2p"], [["0", "0p", "1", "m1"]],
                             [d2p_side, [[neg(v) for v in c] for c in d2p_side]])
    d2_side = [[v.replace("5", "4") for v in c] for c in d2p_side]
    d2 = path_strategy_tree(g["D2"], [["0", "0p", "1", "m1"]],
                            [d2_side, [[neg(v) for v in c] for c in d2_side]])
    return {"strategy_sweep_D1": sweep, "strategy_36_D1": t36, "strategy_monotone_D2p": d2p,
            "strategy_nonmonotone_D2": d2}


def write(name, data):
    path = DATA / f"{name}.json"
    text = json.dumps(data, indent=1, ensure_ascii=False) + "\n"
    path.write_text(text)
    return hashlib.sha256(text.encode()).hexdigest()


def main():
    DATA.mkdir(parents=True, exist_ok=True)
    graphs = {"D1": make_D1(), "D1p": make_D1p(), "D2": make_D2(), "D2p": make_D2p(),
              "bramble_D": make_bramble_D(), "bramble_Dp": make_bramble_Dp()}
    sums = {}
    catalog = {}
    for name, D in graphs.items():
        sums[name] = write(name, D.to_dict())
        catalog[name] = {"type": "digraph"}
    for name, T in make_decompositions(graphs).items():
        rep = validate(T)
        if not rep.valid:
            raise SystemExit(f"{name}: {rep.violations}")
        sums[name] = write(name, T.to_dict())
        catalog[name] = {"type": "decomposition", "flavor": T.flavor}
    for name, w in make_witnesses(graphs).items():
        sums[name] = write(name, w.to_dict())
        catalog[name] = {"type": "witness"}
    for name, b in make_brambles().items():
        sums[name] = write(name, b)
        catalog[name] = {"type": "bramble", "host": "bramble_D"}
    for name, S in make_strategies(graphs).items():
        sums[name] = write(name, S.to_dict())
        catalog[name] = {"type": "strategy"}
    hosts = {"dtd_SC0_D1": "D1", "dtd2_D1p": "D1p", "dtd_NCW_D2": "D2", "dtd3_D2p": "D2p",
             "witness_D1_in_D1p": ("D1", "D1p"), "witness_D2_in_D2p": ("D2", "D2p"),
             "witness_bramble_D_in_Dp": ("bramble_D", "bramble_Dp"),
             "strategy_sweep_D1": "D1", "strategy_36_D1": "D1", "strategy_monotone_D2p": "D2p",
             "strategy_nonmonotone_D2": "D2"}
    for name, h in hosts.items():
        if isinstance(h, tuple):
            catalog[name]["minor"], catalog[name]["host"] = h
        else:
            catalog[name]["host"] = h
    claims = {
        "D1": {"vertices": 34, "note": "two-sided graph with ladders a..d and 1..4"},
        "D1p": {"vertices": 40, "note": "D1 with the arcs 0 -> 4, 0 -> 4p routed through pi1, pi2, pi3 on each side"},
        "D2": {"vertices": 16, "note": "two-sided ladder graph 0, ±1..±3 primed and unprimed, ±4"},
        "D2p": {"vertices": 18, "note": "D2 with the arcs 4 -> 0, 4 -> 0p routed through 5"},
        "bramble_D": {"vertices": 6, "note": "two triangles joined by arcs both ways"},
        "bramble_Dp": {"vertices": 12, "note": "subdivision of bramble_D"},
        "dtd_SC0_D1": {"width": 3, "note": "SC0 decomposition of D1"},
        "dtd2_D1p": {"width": 3, "note": "NCW decomposition of D1p"},
        "dtd_NCW_D2": {"width": 3, "note": "NCW decomposition of D2"},
        "dtd3_D2p": {"width": 3, "also": ["SCd"], "note": "SC0 and SCd decomposition of D2p"},
        "witness_D1_in_D1p": {"note": "contract the subdivision paths"},
        "witness_D2_in_D2p": {"note": "contract the edges into 5 and m5"},
        "witness_bramble_D_in_Dp": {"note": "contract the subdivision vertices"},
        "bramble_weak_D": {"order": 2, "note": "the two triangles as a weak bramble"},
        "strategy_sweep_D1": {"nodes": 37, "width": 4, "robber_monotone": True,
                              "note": "sweep both sides of D1 from 0, 0p"},
        "strategy_36_D1": {"nodes": 36, "width": 4, "robber_monotone": True,
                           "note": "sweep rooted at 0, 0p, a, ap"},
        "strategy_monotone_D2p": {"nodes": 15, "width": 4, "robber_monotone": True,
                                  "note": "four-cop robber-monotone sweep of D2p"},
        "strategy_nonmonotone_D2": {"nodes": 15, "width": 4, "robber_monotone": False,
                                    "note": "the same sweep on D2 with 4 in place of 5"},
    }
    for name, c in claims.items():
        catalog[name].update(c)
    catalog_doc = {"fixtures": catalog, "sha256": sums}
    (DATA / "catalog.json").write_text(json.dumps(catalog_doc, indent=1, sort_keys=True) + "\n")
    print(f"wrote {len(sums)} fixtures to {DATA}")


if __name__ == "__main__":
    main()
