"""Butterfly minors: contraction scripts, models, containment search.

A :class:`MinorWitness` is a subgraph selection followed by an ordered list of
butterfly contractions, plus an optional renaming of the result onto the
target's vertex names. Models are derived from scripts by bookkeeping during
replay.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx
from networkx.algorithms import isomorphism

from .digraph import (Digraph, bits, build_digraph, contract_edge, delete_edges,
                      induced_subgraph, is_strongly_connected, popcount, scc_masks)
from .errors import BudgetExceeded, GraphError, ScriptError


@dataclass
class MinorWitness:
    """Certificate that ``target`` is a butterfly minor of ``host``.

    ``mapping`` sends names of the replayed graph to target names; names not
    listed map to themselves.
    """

    keep_vertices: list[str]
    drop_edges: list[tuple[str, str]] = field(default_factory=list)
    steps: list[tuple[str, str, str]] = field(default_factory=list)
    mapping: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        data = {"keep_vertices": list(self.keep_vertices),
                "drop_edges": [list(e) for e in self.drop_edges],
                "steps": [{"edge": [u, v], "name": x} for u, v, x in self.steps]}
        if self.mapping:
            data["mapping"] = dict(self.mapping)
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "MinorWitness":
        try:
            return cls(keep_vertices=[str(v) for v in data["keep_vertices"]],
                       drop_edges=[(str(a), str(b)) for a, b in data.get("drop_edges", [])],
                       steps=[(str(s["edge"][0]), str(s["edge"][1]), str(s["name"]))
                              for s in data.get("steps", [])],
                       mapping={str(k): str(v) for k, v in data.get("mapping", {}).items()})
        except (KeyError, TypeError, IndexError) as exc:
            raise ScriptError(f"malformed witness JSON: {exc}") from None

    @classmethod
    def identity(cls, D: Digraph) -> "MinorWitness":
        return cls(keep_vertices=list(D.names))


@dataclass
class ReplayResult:
    graph: Digraph
    origin: dict[str, frozenset]   # vertex of the result -> host vertices merged into it


def replay_script(D: Digraph, w: MinorWitness, rename: bool = True) -> ReplayResult:
    """Apply ``w`` to the host ``D``; rename onto target names if asked."""
    try:
        G = induced_subgraph(D, D.mask(w.keep_vertices))
        if w.drop_edges:
            G = delete_edges(G, w.drop_edges)
    except GraphError as exc:
        raise ScriptError(f"subgraph selection invalid: {exc}") from None
    origin = {v: frozenset([v]) for v in G.names}
    for k, (u, v, x) in enumerate(w.steps):
        if u not in G.index or v not in G.index or not G.has_edge(u, v):
            raise ScriptError(f"step {k}: edge ({u}, {v}) is absent")
        try:
            G = contract_edge(G, (u, v), x)
        except GraphError as exc:
            raise ScriptError(f"step {k}: {exc}") from None
        merged = origin.pop(u) | origin.pop(v)
        origin[x] = merged
    if rename and w.mapping:
        G, origin = _rename(G, origin, w.mapping)
    return ReplayResult(G, origin)


def _rename(G: Digraph, origin: dict, mapping: dict) -> tuple[Digraph, dict]:
    new_names = [mapping.get(v, v) for v in G.names]
    if len(set(new_names)) != len(new_names):
        raise ScriptError("witness mapping is not injective")
    H = Digraph(new_names, G.edges)
    return H, {mapping.get(v, v): s for v, s in origin.items()}


def same_graph_by_names(A: Digraph, B: Digraph) -> bool:
    if set(A.names) != set(B.names):
        return False
    return set(A.edge_names()) == set(B.edge_names())


def verify_witness(D_prime: Digraph, D: Digraph, w: MinorWitness) -> bool:
    """Replay and compare with ``D_prime`` under the witness correspondence."""
    try:
        res = replay_script(D, w)
    except ScriptError:
        return False
    return same_graph_by_names(res.graph, D_prime)


# -- butterfly models -------------------------------------------------------

@dataclass
class Branching:
    """The image of one vertex: an in-branching and an out-branching sharing ``root``.

    ``t_in[a]`` is the next vertex on the way from ``a`` to the root;
    ``t_out[a]`` is the predecessor of ``a`` on the way from the root.
    """

    root: str
    t_in: dict[str, str] = field(default_factory=dict)
    t_out: dict[str, str] = field(default_factory=dict)

    def in_vertices(self) -> set[str]:
        return {self.root} | set(self.t_in)

    def out_vertices(self) -> set[str]:
        return {self.root} | set(self.t_out)

    def vertices(self) -> set[str]:
        return self.in_vertices() | self.out_vertices()

    def edges(self) -> list[tuple[str, str]]:
        return ([(a, b) for a, b in self.t_in.items()]
                + [(b, a) for a, b in self.t_out.items()])


@dataclass
class ButterflyModel:
    vertex_images: dict[str, Branching]
    edge_images: dict[tuple[str, str], tuple[str, str]]

    def image_vertices(self) -> set[str]:
        out = set()
        for br in self.vertex_images.values():
            out |= br.vertices()
        return out

    def image_edges(self) -> set[tuple[str, str]]:
        out = set(self.edge_images.values())
        for br in self.vertex_images.values():
            out |= set(br.edges())
        return out


@dataclass
class ModelVerdict:
    valid: bool
    violations: list[tuple[str, str]]


def _path_to_root(parent: dict, start: str, root: str) -> list[str] | None:
    path = [start]
    seen = {start}
    while path[-1] != root:
        nxt = parent.get(path[-1])
        if nxt is None or nxt in seen:
            return None
        path.append(nxt)
        seen.add(nxt)
    return path


def verify_model(D_prime: Digraph, D: Digraph, mu: ButterflyModel) -> ModelVerdict:
    """Check the three butterfly-model conditions and report each violation."""
    bad: list[tuple[str, str]] = []
    owner: dict[str, str] = {}
    for vp in D_prime.names:
        br = mu.vertex_images.get(vp)
        if br is None:
            bad.append(("missing-image", vp))
            continue
        for a in br.vertices():
            if a not in D.index:
                bad.append(("unknown-vertex", f"{vp}:{a}"))
            elif a in owner:
                bad.append(("disjointness", f"{a} in images of {owner[a]} and {vp}"))
            else:
                owner[a] = vp
        if br.in_vertices() & br.out_vertices() != {br.root}:
            bad.append(("branching", f"{vp}: in- and out-branching share more than the root"))
        for a, b in br.edges():
            if a in D.index and b in D.index and not D.has_edge(a, b):
                bad.append(("branching", f"{vp}: ({a}, {b}) is not an edge"))
        for a in br.t_in:
            if _path_to_root(br.t_in, a, br.root) is None:
                bad.append(("branching", f"{vp}: {a} does not reach the root"))
        for a in br.t_out:
            if _path_to_root(br.t_out, a, br.root) is None:
                bad.append(("branching", f"{vp}: {a} is not reached from the root"))
    for u, v in D_prime.edge_names():
        img = mu.edge_images.get((u, v))
        if img is None:
            bad.append(("edge-image", f"({u}, {v}) has no image"))
            continue
        a, b = img
        if a not in D.index or b not in D.index or not D.has_edge(a, b):
            bad.append(("edge-image", f"image of ({u}, {v}) is not an edge"))
            continue
        bu, bv = mu.vertex_images.get(u), mu.vertex_images.get(v)
        if bu is None or a not in bu.out_vertices():
            bad.append(("edge-image", f"tail of image of ({u}, {v}) not in the out-branching of {u}"))
        if bv is None or b not in bv.in_vertices():
            bad.append(("edge-image", f"head of image of ({u}, {v}) not in the in-branching of {v}"))
    return ModelVerdict(not bad, bad)


def model_from_script(D: Digraph, w: MinorWitness) -> ButterflyModel:
    """Butterfly model of the replayed minor, built by bookkeeping during replay.

    Contracting ``(u, v)`` with ``deg⁺(u) = 1`` keeps ``v``'s root and hangs
    ``u``'s in-branching, plus the root-to-tail path of ``u``'s out-branching,
    onto ``v``'s in-branching. Otherwise ``deg⁻(v) = 1`` and the construction
    is mirrored around ``u``'s root. Branches that no longer carry edge images
    are pruned.
    """
    G = induced_subgraph(D, D.mask(w.keep_vertices))
    if w.drop_edges:
        G = delete_edges(G, w.drop_edges)
    images = {v: Branching(v) for v in G.names}
    eimg = {e: e for e in G.edge_names()}
    for u, v, x in w.steps:
        if not G.has_edge(u, v):
            raise ScriptError(f"edge ({u}, {v}) is absent")
        forward = popcount(G.out[G.idx(u)]) == 1
        p, q = eimg[(u, v)]
        bu, bv = images.pop(u), images.pop(v)
        if forward:
            t_in = dict(bv.t_in)
            t_in.update(bu.t_in)
            path = _path_to_root(bu.t_out, p, bu.root)[::-1]   # root(u) ... p
            for a, b in zip(path, path[1:]):
                t_in[a] = b
            t_in[p] = q
            new = Branching(bv.root, t_in, dict(bv.t_out))
        else:
            t_out = dict(bu.t_out)
            t_out.update(bv.t_out)
            path = _path_to_root(bv.t_in, q, bv.root)          # q ... root(v)
            for a, b in zip(path, path[1:]):
                t_out[b] = a
            t_out[q] = p
            new = Branching(bu.root, dict(bu.t_in), t_out)
        G2 = contract_edge(G, (u, v), x)
        new_eimg = {}
        for a, b in G2.edge_names():
            if a != x and b != x:
                new_eimg[(a, b)] = eimg[(a, b)]
            elif b == x:
                src = [(a, u), (a, v)] if forward else [(a, u)]
                new_eimg[(a, b)] = next(eimg[e] for e in src if e in eimg)
            else:
                src = [(v, b)] if forward else [(u, b), (v, b)]
                new_eimg[(a, b)] = next(eimg[e] for e in src if e in eimg)
        eimg = new_eimg
        images[x] = new
        G = G2
    if w.mapping:
        images = {w.mapping.get(k, k): b for k, b in images.items()}
        eimg = {(w.mapping.get(a, a), w.mapping.get(b, b)): img for (a, b), img in eimg.items()}
    return ButterflyModel(images, eimg)


# -- containment search -----------------------------------------------------

DESK_CAP = 12


@dataclass
class _SearchState:
    graph: Digraph
    origin: dict            # current name -> frozenset of host names
    steps: list
    dropped: set            # host edges dropped explicitly


def _excess_profile(G: Digraph) -> list[tuple[int, int]]:
    """(size, edges - vertices) of every nontrivial strong component."""
    out = []
    for comp in scc_masks(G, G.full):
        if popcount(comp) < 2:
            continue
        m = sum(popcount(G.out[i] & comp) for i in bits(comp))
        out.append((popcount(comp), m - popcount(comp)))
    return out


def _feasible(G: Digraph, tgt_n: int, tgt_m: int, tgt_profile) -> bool:
    if G.n < tgt_n or len(G.edges) < tgt_m:
        return False
    prof = _excess_profile(G)
    if sum(s for s, _ in tgt_profile) > sum(s for s, _ in prof):
        return False
    for size, exc in tgt_profile:
        if not any(s >= size and e >= exc for s, e in prof):
            return False
    return True


def _degree_dominates(G: Digraph, T: Digraph) -> bool:
    go = sorted((popcount(x) for x in G.out), reverse=True)
    to = sorted((popcount(x) for x in T.out), reverse=True)
    gi = sorted((popcount(x) for x in G.inn), reverse=True)
    ti = sorted((popcount(x) for x in T.inn), reverse=True)
    return all(a >= b for a, b in zip(go, to)) and all(a >= b for a, b in zip(gi, ti))


def _to_nx(G: Digraph) -> nx.DiGraph:
    H = nx.DiGraph()
    H.add_nodes_from(G.names)
    H.add_edges_from(G.edge_names())
    return H


def _spanning_mono(G: Digraph, T: Digraph) -> dict | None:
    """Bijection V(G) -> V(T) mapping every edge of T onto an edge of G."""
    if G.n != T.n or len(G.edges) < len(T.edges) or not _degree_dominates(G, T):
        return None
    if set(G.names) == set(T.names) and all(G.has_edge(a, b) for a, b in T.edge_names()):
        return {v: v for v in G.names}
    matcher = isomorphism.DiGraphMatcher(_to_nx(G), _to_nx(T))
    for m in matcher.subgraph_monomorphisms_iter():
        return dict(m)
    return None


def _moves(G: Digraph):
    """Candidate reductions, most promising first.

    Yields ``(kind, u, v, extra_drop)`` where ``extra_drop`` lists current
    edges deleted to make ``(u, v)`` contractible.
    """
    subdiv, forced, other = [], [], []
    for a, b in sorted(G.edges):
        u, v = G.names[a], G.names[b]
        if popcount(G.out[a]) == 1 or popcount(G.inn[b]) == 1:
            thin = (popcount(G.inn[a]) == 1 and popcount(G.out[a]) == 1) or \
                   (popcount(G.inn[b]) == 1 and popcount(G.out[b]) == 1)
            (subdiv if thin else forced).append(("contract", u, v, ()))
        else:
            drop_out = tuple((u, G.names[c]) for c in bits(G.out[a] & ~(1 << b)))
            drop_in = tuple((G.names[c], v) for c in bits(G.inn[b] & ~(1 << a)))
            other.append(("contract", u, v, drop_out))
            other.append(("contract", u, v, drop_in))
    deletions = [("delete", v, None, ()) for v in G.names]
    return subdiv + forced + deletions + other


def find_butterfly_minor(D_prime: Digraph, D: Digraph, budget: int | None = None,
                         cap: int | None = None) -> MinorWitness | None:
    """Search for ``D_prime`` as a butterfly minor of ``D``.

    Returns a verified witness, or ``None`` when the search space is
    exhausted (a proof of absence). Raises :class:`BudgetExceeded` when more
    than ``budget`` states would be expanded.
    """
    if cap is not None and D.n > cap:
        raise GraphError(f"host has {D.n} vertices, cap is {cap}")
    tgt_n, tgt_m = D_prime.n, len(D_prime.edges)
    profile = _excess_profile(D_prime)
    seen = set()
    expanded = 0

    def key(G: Digraph):
        return frozenset(G.names), frozenset(G.edge_names())

    stack = [_SearchState(D, {v: frozenset([v]) for v in D.names}, [], set())]
    while stack:
        st = stack.pop()
        G = st.graph
        k = key(G)
        if k in seen:
            continue
        seen.add(k)
        if not _feasible(G, tgt_n, tgt_m, profile):
            continue
        if G.n == tgt_n:
            m = _spanning_mono(G, D_prime)
            if m is not None:
                return _finish(D, D_prime, st, m)
            continue
        expanded += 1
        if budget is not None and expanded > budget:
            raise BudgetExceeded(f"minor search exceeded {budget} states")
        children = []
        for kind, u, v, extra in _moves(G):
            if kind == "delete":
                keep = G.full & ~(1 << G.idx(u))
                H = induced_subgraph(G, keep)
                origin = {a: s for a, s in st.origin.items() if a != u}
                children.append(_SearchState(H, origin, st.steps, st.dropped))
                continue
            H = delete_edges(G, extra) if extra else G
            dropped = st.dropped
            if extra:
                dropped = set(dropped)
                for a, b in extra:
                    for h in _preimage(D, st.origin[a], st.origin[b]):
                        dropped.add(h)
            H2 = contract_edge(H, (u, v), u)
            origin = dict(st.origin)
            origin[u] = origin[u] | origin.pop(v)
            children.append(_SearchState(H2, origin, st.steps + [(u, v, u)], dropped))
        # depth-first: push in reverse so the first move is explored first
        stack.extend(reversed(children))
    return None


def _preimage(D: Digraph, A: frozenset, B: frozenset) -> list[tuple[str, str]]:
    return [(a, b) for a in sorted(A) for b in sorted(B) if D.has_edge(a, b)]


def _finish(D: Digraph, D_prime: Digraph, st: _SearchState, mono: dict) -> MinorWitness:
    kept_hosts = set()
    for s in st.origin.values():
        kept_hosts |= s
    keep = [v for v in D.names if v in kept_hosts]
    # steps whose operands were later deleted are skipped
    steps = []
    alive = {v: frozenset([v]) for v in keep}
    for u, v, x in st.steps:
        if u in alive and v in alive and (alive[u] | alive[v]) <= kept_hosts:
            merged = alive.pop(u) | alive.pop(v)
            alive[x] = merged
    # the surviving steps are exactly those whose merged set survives
    alive = {v: frozenset([v]) for v in keep}
    for u, v, x in st.steps:
        if u in alive and v in alive:
            merged = alive[u] | alive[v]
            if merged <= kept_hosts:
                alive.pop(u)
                alive.pop(v)
                alive[x] = merged
                steps.append((u, v, x))
    drop = sorted(e for e in st.dropped if e[0] in kept_hosts and e[1] in kept_hosts)
    # edges of the final graph missing from the target are dropped too
    res = replay_script(D, MinorWitness(keep, drop, steps))
    extra = [(a, b) for a, b in res.graph.edge_names()
             if not D_prime.has_edge(mono[a], mono[b])]
    for a, b in extra:
        drop.extend(_preimage(D, res.origin[a], res.origin[b]))
    mapping = {a: b for a, b in mono.items() if a != b}
    w = MinorWitness(keep, sorted(set(drop)), steps, mapping)
    if not verify_witness(D_prime, D, w):
        raise ScriptError("internal error: constructed witness does not replay")
    return w


def contains_minor(D_prime: Digraph, D: Digraph, budget: int | None = None) -> bool:
    return find_butterfly_minor(D_prime, D, budget) is not None


def minimal_major(D_prime: Digraph, D: Digraph, w: MinorWitness,
                  budget: int | None = None) -> tuple[Digraph, MinorWitness]:
    """Greedy minimal major: delete edges, then vertices, while containment holds.

    Deletion order is the host's edge order then vertex order, so the result
    is reproducible.
    """
    if not verify_witness(D_prime, D, w):
        raise ScriptError("witness does not verify")
    H = induced_subgraph(D, D.mask(w.keep_vertices))
    if w.drop_edges:
        H = delete_edges(H, w.drop_edges)
    best = MinorWitness(list(H.names), [], list(w.steps), dict(w.mapping))
    for a, b in H.edge_names():
        cand = delete_edges(H, [(a, b)])
        found = find_butterfly_minor(D_prime, cand, budget)
        if found is not None:
            H, best = cand, found
    for v in list(H.names):
        cand = induced_subgraph(H, H.full & ~(1 << H.idx(v)))
        found = find_butterfly_minor(D_prime, cand, budget)
        if found is not None:
            H, best = cand, found
    if D_prime.n and is_strongly_connected(D_prime, D_prime.full):
        if not is_strongly_connected(H, H.full):
            raise ScriptError("minimal major of a strongly connected minor is not strongly connected")
    # express the witness against the original host
    host_w = MinorWitness(list(best.keep_vertices),
                          sorted(set(best.drop_edges) | _missing_edges(D, H, best.keep_vertices)),
                          list(best.steps), dict(best.mapping))
    return H, host_w


def _missing_edges(D: Digraph, H: Digraph, keep) -> set:
    keep = set(keep)
    return {(a, b) for a, b in D.edge_names()
            if a in keep and b in keep and not H.has_edge(a, b)}


def random_minor_witness(D: Digraph, rng, p_vertex: float = 0.15, p_edge: float = 0.15,
                         max_steps: int = 3) -> MinorWitness:
    """A random subgraph followed by up to ``max_steps`` random contractions."""
    keep = [v for v in D.names if rng.random() >= p_vertex] or [D.names[0]]
    G = induced_subgraph(D, D.mask(keep))
    drop = [e for e in G.edge_names() if rng.random() < p_edge]
    G = delete_edges(G, drop)
    steps = []
    for k in range(max_steps):
        cands = [(G.names[a], G.names[b]) for a, b in sorted(G.edges)
                 if popcount(G.out[a]) == 1 or popcount(G.inn[b]) == 1]
        if not cands:
            break
        u, v = rng.choice(cands)
        x = f"{u}{v}"
        while x in G.index:
            x += "_"
        G = contract_edge(G, (u, v), x)
        steps.append((u, v, x))
    return MinorWitness(keep, drop, steps)
