"""Command-line front end: ``dtwlab <command> ...``.

Exit codes: 0 the property holds, 1 it fails, 2 usage error, 3 budget exceeded.
Graph-like arguments are JSON paths or fixture names.
"""

from __future__ import annotations

import argparse
import json
import pathlib
import sys
from dataclasses import dataclass, field

from . import fixtures
from .decomp import DirectedTreeDecomposition, minorize, validate
from .digraph import Digraph
from .errors import BudgetExceeded, CapExceeded, DtwlabError
from .export import to_dot
from .game import StrategyTree, cop_number, greedy_robber, simulate_play, solve_game
from .minors import MinorWitness, find_butterfly_minor, verify_witness
from .obstructions import (Bramble, bramble_number, bramble_order, is_k_linked, lift_bramble,
                           validate_bramble)
from .width import decide_width, exact_width

OK, FAILS, USAGE, BUDGET = 0, 1, 2, 3


@dataclass
class Outcome:
    code: int
    lines: list[str] = field(default_factory=list)
    payload: dict | None = None


class UsageError(Exception):
    pass


# -- argument resolution --------------------------------------------------------

def _read(arg: str):
    """``(fixture name or None, JSON data)`` for a path or fixture name."""
    p = pathlib.Path(arg)
    names = fixtures.list_fixtures()
    if p.is_file():
        return None, json.loads(p.read_text())
    stem = p.name[:-5] if p.name.endswith(".json") else p.name
    if stem in names:
        return stem, None
    raise UsageError(f"{arg}: no such file or fixture")


def load_graph(arg: str) -> Digraph:
    name, data = _read(arg)
    obj = fixtures.load_fixture(name) if name else Digraph.from_dict(data)
    if not isinstance(obj, Digraph):
        raise UsageError(f"{arg} is not a digraph")
    return obj


def _host_for(arg: str, graph: str | None) -> Digraph:
    if graph:
        return load_graph(graph)
    name, _ = _read(arg)
    host = fixtures.fixture_host(name) if name else None
    if host is None:
        raise UsageError(f"{arg}: pass the host graph")
    return fixtures.load_fixture(host)


def load_dtd(arg: str, host: Digraph) -> DirectedTreeDecomposition:
    name, data = _read(arg)
    if name:
        data = json.loads(fixtures.dump_fixture(name))
    return DirectedTreeDecomposition.from_dict(data, host)


def load_witness(arg: str) -> MinorWitness:
    name, data = _read(arg)
    if name:
        data = json.loads(fixtures.dump_fixture(name))
    return MinorWitness.from_dict(data)


def load_bramble(arg: str, host: Digraph) -> Bramble:
    name, data = _read(arg)
    if name:
        data = json.loads(fixtures.dump_fixture(name))
    return Bramble.from_dict(data, host)


def load_any(arg: str, graph: str | None):
    name, data = _read(arg)
    if name:
        return fixtures.load_fixture(name)
    if "vertices" in data:
        return Digraph.from_dict(data)
    host = load_graph(graph) if graph else None
    if host is None:
        raise UsageError(f"{arg}: pass --graph for decompositions and strategies")
    if "cops" in json.dumps(data.get("nodes", [])[:1]):
        return StrategyTree.from_dict(data, host)
    return DirectedTreeDecomposition.from_dict(data, host)


# -- commands --------------------------------------------------------------------

def cmd_validate_dtd(a) -> Outcome:
    D = load_graph(a.graph)
    T = load_dtd(a.dtd, D)
    rep = validate(T, a.flavor)
    if rep.valid:
        return Outcome(OK, [f"valid {rep.flavor}, width {rep.width}"], {"valid": True, "width": rep.width})
    lines = [f"not a valid {rep.flavor} decomposition"] + [str(v) for v in rep.violations[:10]]
    return Outcome(FAILS, lines, {"valid": False, "violations": [str(v) for v in rep.violations]})


def cmd_width(a) -> Outcome:
    D = load_graph(a.graph)
    cap = None if a.no_cap else 7
    if a.certify:
        T = load_dtd(a.certify, D)
        rep = validate(T, a.flavor)
        if not rep.valid:
            return Outcome(FAILS, [f"certificate is not a valid {rep.flavor} decomposition: {rep.violations[0]}"])
        return Outcome(OK, [f"{rep.flavor} width at most {rep.width} (certified)"], {"upper": rep.width})
    if a.at_most is not None:
        T = decide_width(D, a.flavor, a.at_most, a.max_bag, a.budget, cap)
        if T is None:
            return Outcome(FAILS, [f"no {a.flavor} decomposition of width at most {a.at_most} (proven)"])
        out = Outcome(OK, [f"{a.flavor} width at most {a.at_most}"], {"certificate": T.to_dict()})
        return out
    res = exact_width(D, a.flavor, budget=a.budget, cap=cap)
    lines = [f"{res.flavor} width {res.width}"]
    if res.metadata.get("node_cap_binds"):
        lines.append("note: the certificate has more than |V|^2 nodes")
    return Outcome(OK, lines, {"width": res.width, "certificate": res.certificate.to_dict()})


def cmd_game(a) -> Outcome:
    D = load_graph(a.graph)
    mode = "robber_monotone" if a.monotone else "free"
    res = solve_game(D, a.k, mode, a.budget)
    lines = [f"{res.winner} win with {a.k} cops ({mode.replace('_', '-')})"]
    payload = {"winner": res.winner, "k": a.k, "mode": res.mode}
    if res.strategy is not None:
        lines.append(f"strategy tree: {len(res.strategy)} nodes")
        payload["strategy"] = res.strategy.to_dict()
        if a.trace:
            for v in D.names:
                play = simulate_play(D, res.strategy, greedy_robber, v)
                lines.append(f"-- greedy robber starting at {v}")
                lines += play.transcript(D)
    else:
        lines.append(f"{len(res.escape)} losing positions for the cops")
        if a.trace:
            for C, R in res.escape[:50]:
                lines.append(f"cops {{{', '.join(C)}}}: robber holds {{{', '.join(R)}}}")
        payload["escape"] = res.escape
    return Outcome(OK if res.winner == "cops" else FAILS, lines, payload)


def cmd_cop_number(a) -> Outcome:
    D = load_graph(a.graph)
    mode = "robber_monotone" if a.monotone else "free"
    c = cop_number(D, mode, a.budget)
    return Outcome(OK, [f"cop number ({mode.replace('_', '-')}): {c}"], {"cop_number": c, "mode": mode})


def cmd_minor(a) -> Outcome:
    Dm, Dh = load_graph(a.minor), load_graph(a.host)
    w = find_butterfly_minor(Dm, Dh, budget=a.budget)
    if w is None:
        return Outcome(FAILS, ["not a butterfly minor (search exhausted)"])
    if not verify_witness(Dm, Dh, w):
        raise AssertionError("witness failed to replay")
    if a.witness:
        pathlib.Path(a.witness).write_text(json.dumps(w.to_dict(), indent=1))
    lines = ["butterfly minor; witness replays",
             f"keep {len(w.keep_vertices)} vertices, drop {len(w.drop_edges)} edges, {len(w.steps)} contractions"]
    return Outcome(OK, lines, w.to_dict())


def cmd_minorize(a) -> Outcome:
    host = _host_for(a.dtd, a.graph)
    T = load_dtd(a.dtd, host)
    if T.flavor != "NCW0":
        T = T.with_flavor("NCW0")
        if not validate(T).valid:
            return Outcome(FAILS, ["input is not a valid NCW0 decomposition"])
    T2 = minorize(T, load_witness(a.witness))
    rep = validate(T2)
    lines = [f"NCW0 decomposition of the minor, width {rep.width}, valid {rep.valid}"]
    return Outcome(OK if rep.valid else FAILS, lines, T2.to_dict())


def cmd_bramble(a) -> Outcome:
    kind = "weak" if a.weak else "strong"
    if a.action == "number":
        D = load_graph(a.target)
        t, B = bramble_number(D, kind, cap=None if a.no_cap else 8, budget=a.budget)
        return Outcome(OK, [f"{kind} bramble number {t}"], {"number": t, "bramble": B.to_dict(D)})
    if a.action == "lift":
        if not (a.minor and a.host and a.witness):
            raise UsageError("bramble lift needs --minor, --host and --witness")
        Dm, Dh = load_graph(a.minor), load_graph(a.host)
        B = load_bramble(a.target, Dm)
        L = lift_bramble(Dm, Dh, load_witness(a.witness), B)
        ok = validate_bramble(Dh, L).valid
        order = bramble_order(Dh, L).order
        return Outcome(OK if ok else FAILS, [f"lifted bramble: valid {ok}, order {order}"], L.to_dict(Dh))
    D = _host_for(a.target, a.graph)
    B = load_bramble(a.target, D)
    v = validate_bramble(D, B)
    if not v.valid:
        return Outcome(FAILS, ["invalid bramble"] + v.problems[:10])
    if a.action == "validate":
        return Outcome(OK, [f"valid {B.kind} bramble with {len(B.elements)} elements"])
    cert = bramble_order(D, B, a.budget)
    return Outcome(OK, [f"order {cert.order}; minimum cover {{{', '.join(D.names_of(cert.cover))}}}"],
                   {"order": cert.order, "cover": D.names_of(cert.cover)})


def cmd_linked(a) -> Outcome:
    D = load_graph(a.graph)
    W = [x for x in a.w.split(",") if x]
    rep = is_k_linked(D, W, a.k, a.budget)
    if rep.linked:
        return Outcome(OK, [f"W is {a.k}-linked"], {"linked": True})
    S = D.names_of(rep.balanced_separator)
    return Outcome(FAILS, [f"not {a.k}-linked: balanced separator {{{', '.join(S)}}}"],
                   {"linked": False, "separator": S})


def cmd_fixture(a) -> Outcome:
    if a.action == "list":
        cat = fixtures.catalog()
        return Outcome(OK, [f"{n:26s} {cat[n]['type']:14s} {cat[n].get('note', '')}" for n in sorted(cat)])
    if not a.name:
        raise UsageError("fixture dump needs a name")
    if a.name not in fixtures.catalog():
        raise UsageError(f"unknown fixture {a.name!r}")
    return Outcome(OK, [fixtures.dump_fixture(a.name)])


def cmd_export_dot(a) -> Outcome:
    obj = load_any(a.object, a.graph)
    return Outcome(OK, [to_dot(obj)])


def cmd_repro(a) -> Outcome:
    from .repro import run_scenario
    lines, failed = [], False
    for target in a.targets:
        try:
            sc = run_scenario(target)
        except KeyError as e:
            raise UsageError(str(e.args[0]))
        lines.append(sc.report())
        failed |= not sc.passed
    return Outcome(FAILS if failed else OK, lines)


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dtwlab", description="Directed tree-width toolkit.")
    p.add_argument("--budget", type=int, default=None, help="node/position limit for searches")
    p.add_argument("--threads", type=int, default=1, help="accepted for scripting; all work runs serially")
    p.add_argument("--json", dest="json_out", default=None, help="write the JSON payload to this path")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate-dtd", help="validate a decomposition")
    s.add_argument("graph")
    s.add_argument("dtd")
    s.add_argument("--flavor", default=None)
    s.set_defaults(func=cmd_validate_dtd)

    s = sub.add_parser("width", help="exact width, a bounded search, or a certified upper bound")
    s.add_argument("graph")
    s.add_argument("--flavor", required=True)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--exact", action="store_true")
    g.add_argument("--certify", metavar="DTD")
    g.add_argument("--at-most", type=int, default=None)
    s.add_argument("--max-bag", type=int, default=None)
    s.add_argument("--no-cap", action="store_true", help="lift the vertex cap on exact search")
    s.set_defaults(func=cmd_width)

    s = sub.add_parser("game", help="solve the cops and robber game for k cops")
    s.add_argument("graph")
    s.add_argument("-k", type=int, required=True)
    s.add_argument("--monotone", action="store_true")
    s.add_argument("--trace", action="store_true")
    s.set_defaults(func=cmd_game)

    s = sub.add_parser("cop-number", help="least number of cops that win")
    s.add_argument("graph")
    s.add_argument("--monotone", action="store_true")
    s.set_defaults(func=cmd_cop_number)

    s = sub.add_parser("minor", help="search for a butterfly minor")
    s.add_argument("minor")
    s.add_argument("host")
    s.add_argument("--witness", metavar="OUT")
    s.set_defaults(func=cmd_minor)

    s = sub.add_parser("minorize", help="push an NCW0 decomposition through a minor witness")
    s.add_argument("dtd")
    s.add_argument("witness")
    s.add_argument("--graph", help="host graph of the decomposition")
    s.set_defaults(func=cmd_minorize)

    s = sub.add_parser("bramble", help="bramble order, number, lift or validation")
    s.add_argument("action", choices=["order", "number", "lift", "validate"])
    s.add_argument("target", help="bramble (or graph for 'number')")
    s.add_argument("--graph")
    s.add_argument("--weak", action="store_true")
    s.add_argument("--minor")
    s.add_argument("--host")
    s.add_argument("--witness")
    s.add_argument("--no-cap", action="store_true")
    s.set_defaults(func=cmd_bramble)

    s = sub.add_parser("linked", help="test whether a vertex set is k-linked")
    s.add_argument("graph")
    s.add_argument("-w", required=True, help="comma-separated vertex names")
    s.add_argument("-k", type=int, required=True)
    s.set_defaults(func=cmd_linked)

    s = sub.add_parser("fixture", help="list or dump stored fixtures")
    s.add_argument("action", choices=["list", "dump"])
    s.add_argument("name", nargs="?")
    s.set_defaults(func=cmd_fixture)

    s = sub.add_parser("export-dot", help="Graphviz export of a graph, decomposition or strategy")
    s.add_argument("object")
    s.add_argument("--graph")
    s.set_defaults(func=cmd_export_dot)

    s = sub.add_parser("repro", help="run acceptance scenarios (1-8 or their names)")
    s.add_argument("targets", nargs="+")
    s.set_defaults(func=cmd_repro)
    return p


def run(argv=None) -> Outcome:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as e:
        return Outcome(USAGE if e.code else OK)
    if a.threads < 1:
        return Outcome(USAGE, ["--threads must be positive"])
    try:
        out = a.func(a)
    except BudgetExceeded as e:
        out = Outcome(BUDGET, [f"budget exceeded: {e}"])
    except (UsageError, CapExceeded, fixtures.FixtureError) as e:
        out = Outcome(USAGE, [f"error: {e}"])
    except (DtwlabError, json.JSONDecodeError, KeyError) as e:
        out = Outcome(USAGE, [f"bad input: {e}"])
    if a.json_out and out.payload is not None:
        pathlib.Path(a.json_out).write_text(json.dumps(out.payload, indent=1))
    return out


def main(argv=None) -> int:
    out = run(argv)
    if out.lines:
        print("\n".join(out.lines))
    return out.code


if __name__ == "__main__":
    sys.exit(main())
