"""Directed tree decompositions: the data type, per-flavor validation, transformations.

Bags and guards are stored as bitsets over the host's vertex indices. Each
non-root node carries the guard of the tree edge entering it.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .digraph import (Digraph, Walk, _shortest_path, bits, contract_edge,
                      butterfly_contractible, normality_violation, popcount, scc_masks)
from .errors import DecompositionError

FLAVORS = ("NW", "NCW", "NCW0", "SC0", "SC0v", "USC0", "SCd")
NONEMPTY_BAGS = {"NW", "NCW", "SCd"}
STRONG_COMPONENT = {"SC0", "SC0v", "SCd"}

_ALIASES = {"NCW∅": "NCW0", "SC∅": "SC0", "SC₀ᵛ": "SC0v", "USC∅": "USC0",
            "NCWE": "NCW0", "SCE": "SC0", "SCEV": "SC0v", "USCE": "USC0", "SCD": "SCd"}


def normalize_flavor(flavor: str) -> str:
    f = _ALIASES.get(flavor, flavor)
    if f not in FLAVORS:
        raise DecompositionError(f"unknown flavor {flavor!r}; expected one of {', '.join(FLAVORS)}")
    return f


class DirectedTreeDecomposition:
    """A rooted tree with bags on nodes and guards on edges, for a host digraph."""

    def __init__(self, host: Digraph, root: str, parent: dict, bags: dict, guards: dict,
                 flavor: str, order: list | None = None):
        self.host = host
        self.flavor = normalize_flavor(flavor)
        self.root = root
        self.parent = dict(parent)
        self.bags = {t: host.mask(b) for t, b in bags.items()}
        self.guards = {t: host.mask(g) for t, g in guards.items()}
        nodes = list(order) if order is not None else list(self.bags)
        self._check_structure(nodes)
        self.children = {t: [] for t in nodes}
        for t in nodes:
            p = self.parent.get(t)
            if p is not None:
                self.children[p].append(t)
        self._subtree = None

    def _check_structure(self, nodes):
        if self.root not in self.bags:
            raise DecompositionError(f"root {self.root!r} is not a node")
        if set(nodes) != set(self.bags):
            raise DecompositionError("node order does not match the bag map")
        if self.parent.get(self.root) is not None:
            raise DecompositionError("root has a parent")
        for t in nodes:
            if t == self.root:
                continue
            p = self.parent.get(t)
            if p not in self.bags:
                raise DecompositionError(f"node {t!r} has no valid parent")
            if t not in self.guards:
                raise DecompositionError(f"edge into {t!r} has no guard")
        extra = set(self.guards) - set(nodes) | ({self.root} & set(self.guards))
        if extra:
            raise DecompositionError(f"guards on non-edges: {sorted(extra)}")
        for t in nodes:
            seen = set()
            s = t
            while s is not None:
                if s in seen:
                    raise DecompositionError("parent map has a cycle")
                seen.add(s)
                s = self.parent.get(s)
        self.order = nodes

    # -- derived accessors ----------------------------------------------

    @property
    def nodes(self) -> list[str]:
        return list(self.order)

    def edges(self) -> list[tuple[str, str]]:
        return [(self.parent[t], t) for t in self.order if t != self.root]

    def preorder(self) -> list[str]:
        out, stack = [], [self.root]
        while stack:
            t = stack.pop()
            out.append(t)
            stack.extend(reversed(self.children[t]))
        return out

    def subtree_mask(self, t: str) -> int:
        """β(T_t)."""
        if self._subtree is None:
            sub = {}
            for s in reversed(self.preorder()):
                m = self.bags[s]
                for c in self.children[s]:
                    m |= sub[c]
                sub[s] = m
            self._subtree = sub
        return self._subtree[t]

    def Gamma(self, t: str) -> int:
        m = self.bags[t]
        if t != self.root:
            m |= self.guards[t]
        for c in self.children[t]:
            m |= self.guards[c]
        return m

    def width(self) -> int:
        return max(popcount(self.Gamma(t)) for t in self.order) - 1

    def path_from_root(self, t: str) -> list[str]:
        path = [t]
        while path[-1] != self.root:
            path.append(self.parent[path[-1]])
        return path[::-1]

    def with_flavor(self, flavor: str) -> "DirectedTreeDecomposition":
        return DirectedTreeDecomposition(self.host, self.root, self.parent, self.bags,
                                         self.guards, flavor, self.order)

    def bag_names(self, t: str) -> list[str]:
        return self.host.names_of(self.bags[t])

    def guard_names(self, t: str) -> list[str]:
        return self.host.names_of(self.guards[t])

    # -- serialization --------------------------------------------------

    def to_dict(self) -> dict:
        return {"flavor": self.flavor, "root": self.root,
                "nodes": [{"id": t, "bag": self.bag_names(t)} for t in self.preorder()],
                "edges": [{"from": self.parent[t], "to": t, "guard": self.guard_names(t)}
                          for t in self.preorder() if t != self.root]}

    @classmethod
    def from_dict(cls, data: dict, host: Digraph) -> "DirectedTreeDecomposition":
        try:
            order = [str(n["id"]) for n in data["nodes"]]
            bags = {str(n["id"]): [str(v) for v in n["bag"]] for n in data["nodes"]}
            parent = {t: None for t in order}
            guards = {}
            for e in data["edges"]:
                a, b = str(e["from"]), str(e["to"])
                if parent.get(b) is not None:
                    raise DecompositionError(f"node {b!r} has two parents")
                parent[b] = a
                guards[b] = [str(v) for v in e["guard"]]
            return cls(host, str(data["root"]), parent, bags, guards, data["flavor"], order)
        except (KeyError, TypeError) as exc:
            raise DecompositionError(f"malformed decomposition JSON: {exc}") from None

    def to_dot(self) -> str:
        lines = ["digraph T {", "  node [shape=box];"]
        for t in self.preorder():
            lines.append(f'  "{t}" [label="{", ".join(self.bag_names(t)) or "∅"}"];')
        for p, t in self.edges():
            lines.append(f'  "{p}" -> "{t}" [label="{", ".join(self.guard_names(t))}"];')
        lines.append("}")
        return "\n".join(lines)

    def __repr__(self) -> str:
        return f"DirectedTreeDecomposition({self.flavor}, nodes={len(self.order)}, width={self.width()})"


def build_decomposition(host: Digraph, flavor: str, nodes: list[tuple], root: str | None = None):
    """Convenience constructor from ``(id, bag, parent, guard)`` tuples.

    The first tuple is the root unless ``root`` is given; its parent and guard
    are ignored.
    """
    order = [n[0] for n in nodes]
    root = root if root is not None else order[0]
    bags, parent, guards = {}, {}, {}
    for t, bag, p, g in nodes:
        bags[t] = list(bag)
        parent[t] = None if t == root else p
        if t != root:
            guards[t] = list(g)
    return DirectedTreeDecomposition(host, root, parent, bags, guards, flavor, order)


# -- validation -------------------------------------------------------------

@dataclass
class Violation:
    kind: str          # partition | root-empty | guard-condition | size-bound | child-guard-disjointness
    location: object   # node id or (parent, child) edge
    witness: object = None
    detail: str = ""

    def __str__(self) -> str:
        return f"{self.kind} at {self.location}: {self.detail}"


@dataclass
class FlavorReport:
    valid: bool
    width: int
    flavor: str
    violations: list[Violation] = field(default_factory=list)


def _cycle_witness(D: Digraph, removed: int, x: int, y: int) -> Walk:
    allowed = D.full & ~removed
    there = _shortest_path(D, x, 1 << y, allowed)
    back = _shortest_path(D, y, 1 << x, allowed)
    path = there + back[1:]
    return Walk(tuple(D.names[i] for i in path), closed=True)


def guard_condition(D: Digraph, flavor: str, K: int, g: int):
    """Check the flavor's condition for a subtree vertex set ``K`` under guard ``g``.

    Returns ``None`` when it holds, otherwise ``(detail, witness)``.
    """
    if flavor in STRONG_COMPONENT:
        comps = scc_masks(D, D.full & ~g)
        if K in comps:
            return None
        if K & g:
            return ("subtree meets its guard", D.names_of(K & g))
        return ("subtree is not a strong component of the graph minus the guard",
                D.names_of(K))
    if flavor == "NW":
        if K & g:
            return ("subtree meets its guard", D.names_of(K & g))
        walk = normality_violation(D, g, K)
        if walk is not None:
            return ("subtree is not guard-normal", walk)
        return None
    if flavor == "USC0" and K & g:
        return ("subtree meets its guard", D.names_of(K & g))
    # NCW, NCW0, USC0: K - g must be a union of strong components of D - g
    for comp in scc_masks(D, D.full & ~g):
        inside = comp & K
        if inside and inside != comp:
            x = (inside & -inside).bit_length() - 1
            rest = comp & ~K
            y = (rest & -rest).bit_length() - 1
            return ("closed walk crosses the subtree boundary", _cycle_witness(D, g, x, y))
    return None


def validate(T: DirectedTreeDecomposition, flavor: str | None = None) -> FlavorReport:
    """Check every condition of the decomposition's flavor; the width is always reported."""
    flavor = normalize_flavor(flavor or T.flavor)
    D = T.host
    bad: list[Violation] = []
    seen = 0
    for t in T.order:
        b = T.bags[t]
        if b & seen:
            bad.append(Violation("partition", t, D.names_of(b & seen), "bag overlaps another bag"))
        seen |= b
        if not b and flavor in NONEMPTY_BAGS:
            bad.append(Violation("partition", t, None, "empty bag"))
    if seen != D.full:
        bad.append(Violation("partition", T.root, D.names_of(D.full & ~seen),
                             "bags do not cover every vertex"))
    if flavor not in NONEMPTY_BAGS and not T.bags[T.root]:
        bad.append(Violation("root-empty", T.root, None, "root bag is empty"))
    for p, t in T.edges():
        res = guard_condition(D, flavor, T.subtree_mask(t), T.guards[t])
        if res is not None:
            bad.append(Violation("guard-condition", (p, t), res[1], res[0]))
    if flavor == "SC0" and len(T.order) > D.n * D.n:
        bad.append(Violation("size-bound", T.root, len(T.order),
                             f"{len(T.order)} nodes exceed |V|^2 = {D.n * D.n}"))
    if flavor == "SCd":
        for t in T.order:
            below = 0
            for c in T.children[t]:
                below |= T.subtree_mask(c)
            incident = T.guards[t] if t != T.root else 0
            for c in T.children[t]:
                incident |= T.guards[c]
            if below & incident:
                bad.append(Violation("child-guard-disjointness", t, D.names_of(below & incident),
                                     "children's subtrees meet an incident guard"))
    return FlavorReport(not bad, T.width(), flavor, bad)


# -- transformations -------------------------------------------------------

def _require(T: DirectedTreeDecomposition, allowed: set, op: str):
    if T.flavor not in allowed:
        raise DecompositionError(f"{op} needs flavor in {sorted(allowed)}, got {T.flavor}")


def reroot_ncwe(T: DirectedTreeDecomposition, r_new: str) -> DirectedTreeDecomposition:
    """Make ``r_new`` the root by reversing the root path; guards travel with their edges."""
    _require(T, {"NCW", "NCW0"}, "reroot_ncwe")
    if r_new not in T.bags:
        raise DecompositionError(f"unknown node {r_new!r}")
    if not T.bags[r_new]:
        raise DecompositionError("new root has an empty bag")
    if r_new == T.root:
        return T
    path = T.path_from_root(r_new)
    parent = dict(T.parent)
    guards = dict(T.guards)
    for a, b in zip(path, path[1:]):
        parent[a] = b
        guards[a] = T.guards[b]
    parent[r_new] = None
    del guards[r_new]
    return DirectedTreeDecomposition(T.host, r_new, parent, T.bags, guards, T.flavor, T.order)


def _nearest_nonempty(T: DirectedTreeDecomposition) -> str | None:
    adj = {t: list(T.children[t]) for t in T.order}
    for t in T.order:
        if t != T.root:
            adj[t].append(T.parent[t])
    seen = {T.root}
    queue = deque([T.root])
    while queue:
        t = queue.popleft()
        if T.bags[t]:
            return t
        for s in adj[t]:
            if s not in seen:
                seen.add(s)
                queue.append(s)
    return None


def _with_nonempty_root(T: DirectedTreeDecomposition) -> DirectedTreeDecomposition:
    if T.bags[T.root]:
        return T
    t = _nearest_nonempty(T)
    if t is None:
        return T
    return reroot_ncwe(T, t)


def _remap(T: DirectedTreeDecomposition, H: Digraph, f) -> tuple[dict, dict]:
    """Map bags and guards of ``T`` through ``f`` (a host name -> H name or None)."""
    def conv(mask):
        out = set()
        for v in T.host.names_of(mask):
            w = f(v)
            if w is not None:
                out.add(w)
        return H.mask(out)
    return ({t: conv(b) for t, b in T.bags.items()},
            {t: conv(g) for t, g in T.guards.items()})


def restrict_to_subgraph(T: DirectedTreeDecomposition, H: Digraph) -> DirectedTreeDecomposition:
    """Intersect bags and guards with ``V(H)``; reroot when the root bag empties."""
    _require(T, {"NCW0"}, "restrict_to_subgraph")
    D = T.host
    for v in H.names:
        if v not in D.index:
            raise DecompositionError(f"{v!r} is not a host vertex")
    for a, b in H.edge_names():
        if not D.has_edge(a, b):
            raise DecompositionError(f"({a}, {b}) is not a host edge")
    bags, guards = _remap(T, H, lambda v: v if v in H.index else None)
    out = DirectedTreeDecomposition(H, T.root, T.parent, bags, guards, "NCW0", T.order)
    return _with_nonempty_root(out)


def lift_contraction(T: DirectedTreeDecomposition, e, x_name: str) -> DirectedTreeDecomposition:
    """Decomposition of ``H/e`` from one of ``H``, for a butterfly contractible ``e``.

    Guards containing ``u`` or ``v`` get ``x`` instead. If ``deg⁺(u) = 1`` the
    merged vertex takes ``v``'s place in the bags, otherwise ``u``'s.
    """
    _require(T, {"NCW0"}, "lift_contraction")
    H = T.host
    u, v = str(e[0]), str(e[1])
    if not butterfly_contractible(H, (u, v)):
        raise DecompositionError(f"({u}, {v}) is not butterfly contractible")
    Hx = contract_edge(H, (u, v), x_name)
    x = str(x_name)
    keep_v = H.out_degree(u) == 1

    def guard_map(mask):
        names = set(H.names_of(mask))
        if names & {u, v}:
            names = (names - {u, v}) | {x}
        return Hx.mask(names)

    def bag_map(mask):
        names = set(H.names_of(mask))
        out = names - {u, v}
        if (v in names and keep_v) or (u in names and not keep_v):
            out.add(x)
        return Hx.mask(out)

    bags = {t: bag_map(b) for t, b in T.bags.items()}
    guards = {t: guard_map(g) for t, g in T.guards.items()}
    out = DirectedTreeDecomposition(Hx, T.root, T.parent, bags, guards, "NCW0", T.order)
    return _with_nonempty_root(out)


def minorize(T: DirectedTreeDecomposition, w) -> DirectedTreeDecomposition:
    """Push an NCW0 decomposition of ``D`` through a minor witness onto ``D'``."""
    from .digraph import delete_edges, induced_subgraph
    from .minors import replay_script, _rename

    _require(T, {"NCW0"}, "minorize")
    D = T.host
    try:
        H = induced_subgraph(D, D.mask(w.keep_vertices))
        if w.drop_edges:
            H = delete_edges(H, w.drop_edges)
    except Exception as exc:
        raise DecompositionError(f"witness does not apply: {exc}") from None
    out = restrict_to_subgraph(T, H)
    for u, v, x in w.steps:
        out = lift_contraction(out, (u, v), x)
    if w.mapping:
        G, _ = _rename(out.host, {}, w.mapping)
        bags, guards = _remap(out, G, lambda a: w.mapping.get(a, a))
        out = DirectedTreeDecomposition(G, out.root, out.parent, bags, guards, "NCW0", out.order)
    # sanity: the host must be what the script replays to
    res = replay_script(D, w)
    if set(res.graph.edge_names()) != set(out.host.edge_names()):
        raise DecompositionError("internal error: lifted host differs from the replayed minor")
    return out


def _fresh(T: DirectedTreeDecomposition, base: str) -> str:
    k = 0
    while f"{base}.{k}" in T.bags:
        k += 1
    return f"{base}.{k}"


def split_bag(T: DirectedTreeDecomposition, t: str, v: str) -> DirectedTreeDecomposition:
    """Move ``v`` out of ``β(t)`` into a new node between ``t`` and its children.

    The new edge's guard is the incoming guard of ``t`` plus the rest of the
    old bag. The result is a USC0 decomposition.
    """
    _require(T, {"SC0v", "SC0"}, "split_bag")
    D = T.host
    iv = 1 << D.idx(v)
    if not T.bags[t] & iv:
        raise DecompositionError(f"{v!r} is not in the bag of {t!r}")
    if popcount(T.bags[t]) < 2:
        raise DecompositionError("bag has fewer than two vertices")
    t2 = _fresh(T, t)
    bags = dict(T.bags)
    bags[t] = T.bags[t] & ~iv
    bags[t2] = iv
    parent = dict(T.parent)
    for c in T.children[t]:
        parent[c] = t2
    parent[t2] = t
    guards = dict(T.guards)
    g_in = T.guards[t] if t != T.root else 0
    guards[t2] = g_in | bags[t]
    order = list(T.order)
    order.insert(order.index(t) + 1, t2)
    return DirectedTreeDecomposition(D, T.root, parent, bags, guards, "USC0", order)


def usc_to_scv(T: DirectedTreeDecomposition):
    """Replicate subtrees so every subtree is a single strong component.

    Returns ``(T', p)`` with ``p`` the projection from new nodes to old nodes.
    Top-down, each tree edge whose subtree is a union of several components
    of the graph minus its guard is copied once per component, with every bag
    of the copy intersected with that component.
    """
    _require(T, {"USC0", "SC0v", "SC0"}, "usc_to_scv")
    rep = validate(T, "USC0")
    if not rep.valid:
        raise DecompositionError(f"input is not a valid USC0 decomposition: {rep.violations[0]}")
    D = T.host
    bags, parent, guards, proj, order = {}, {}, {}, {}, []
    counter = {}

    def new_id(t):
        k = counter.get(t, 0)
        counter[t] = k + 1
        return t if k == 0 else f"{t}~{k}"

    # queue entries: (old node, new parent id, allowed vertex set)
    root_id = new_id(T.root)
    bags[root_id] = T.bags[T.root]
    parent[root_id] = None
    proj[root_id] = T.root
    order.append(root_id)
    stack = [(T.root, root_id, D.full)]
    while stack:
        old, new, allowed = stack.pop()
        pushed = []
        for c in T.children[old]:
            sub = T.subtree_mask(c) & allowed
            g = T.guards[c]
            for comp in scc_masks(D, D.full & ~g):
                if not comp & sub:
                    continue
                cid = new_id(c)
                bags[cid] = T.bags[c] & comp
                parent[cid] = new
                guards[cid] = g
                proj[cid] = c
                order.append(cid)
                pushed.append((c, cid, comp))
        stack.extend(reversed(pushed))
    # drop copies whose subtree ended up with no vertices
    out = DirectedTreeDecomposition(D, root_id, parent, bags, guards, "SC0v", order)
    dead = [t for t in out.order if t != out.root and not out.subtree_mask(t)]
    if dead:
        keep = [t for t in out.order if t not in dead]
        out = DirectedTreeDecomposition(D, root_id, {t: parent[t] for t in keep},
                                        {t: bags[t] for t in keep},
                                        {t: guards[t] for t in keep if t != root_id},
                                        "SC0v", keep)
        proj = {t: proj[t] for t in keep}
    return out, proj


def deletable_empty_bags(T: DirectedTreeDecomposition) -> list[str]:
    """Nodes ``t2`` with an empty bag, a parent, one child, and a removable guard pair."""
    D = T.host
    out = []
    for t2 in T.order:
        if t2 == T.root or T.bags[t2] or len(T.children[t2]) != 1:
            continue
        t3 = T.children[t2][0]
        g1, g2 = T.guards[t2], T.guards[t3]
        if g1 & ~g2 == 0 or g2 & ~g1 == 0:
            out.append(t2)
            continue
        if T.subtree_mask(t3) in scc_masks(D, D.full & ~(g1 & g2)):
            out.append(t2)
    return out


def remove_deletable_empty_bags(T: DirectedTreeDecomposition) -> DirectedTreeDecomposition:
    """Splice out deletable empty bags until none remain; new guard is ``γ(e1) ∩ γ(e2)``."""
    _require(T, {"SC0v", "SC0"}, "remove_deletable_empty_bags")
    while True:
        cands = deletable_empty_bags(T)
        if not cands:
            return T
        t2 = cands[0]
        t3 = T.children[t2][0]
        parent = {t: p for t, p in T.parent.items() if t != t2}
        parent[t3] = T.parent[t2]
        guards = {t: g for t, g in T.guards.items() if t != t2}
        guards[t3] = T.guards[t2] & T.guards[t3]
        bags = {t: b for t, b in T.bags.items() if t != t2}
        order = [t for t in T.order if t != t2]
        T = DirectedTreeDecomposition(T.host, T.root, parent, bags, guards, T.flavor, order)


def singleton_bags(T: DirectedTreeDecomposition) -> tuple[DirectedTreeDecomposition, int]:
    """Alternate split_bag and usc_to_scv until every bag has at most one vertex.

    Returns the final decomposition and the number of passes.
    """
    passes = 0
    while True:
        big = [t for t in T.preorder() if popcount(T.bags[t]) >= 2]
        if not big:
            return T, passes
        t = big[0]
        v = T.host.names[max(bits(T.bags[t]))]
        T, _ = usc_to_scv(split_bag(T, t, v))
        passes += 1
