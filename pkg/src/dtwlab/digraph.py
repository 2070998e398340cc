"""Simple digraphs over named vertices with bitset vertex sets.

Vertices have string names at the boundary and dense indices inside. A vertex
set is a Python ``int`` used as a bitset over those indices, so union,
intersection and difference are single integer operations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import GraphError


def bits(mask: int) -> Iterator[int]:
    """Yield the indices set in ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return mask.bit_count()


def lowest(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


class Digraph:
    """An immutable simple digraph.

    Use :func:`build_digraph` to construct one from names; the constructor
    itself trusts its input and is meant for internal use.
    """

    __slots__ = ("names", "index", "n", "out", "inn", "edges", "full", "_hash")

    def __init__(self, names: Sequence[str], edges: Iterable[tuple[int, int]]):
        self.names = tuple(names)
        self.index = {name: i for i, name in enumerate(self.names)}
        self.n = len(self.names)
        out = [0] * self.n
        inn = [0] * self.n
        edge_set = set()
        for u, v in edges:
            out[u] |= 1 << v
            inn[v] |= 1 << u
            edge_set.add((u, v))
        self.out = tuple(out)
        self.inn = tuple(inn)
        self.edges = frozenset(edge_set)
        self.full = (1 << self.n) - 1
        self._hash = None

    # -- naming helpers -------------------------------------------------

    def idx(self, v) -> int:
        """Index of a vertex given by name (or already an index)."""
        if isinstance(v, int) and not isinstance(v, bool):
            if 0 <= v < self.n:
                return v
            raise GraphError(f"vertex index {v} out of range")
        try:
            return self.index[v]
        except KeyError:
            raise GraphError(f"unknown vertex {v!r}") from None

    def mask(self, vs) -> int:
        """Bitset for ``vs``: an int is taken as a bitset already."""
        if isinstance(vs, int) and not isinstance(vs, bool):
            if vs & ~self.full:
                raise GraphError("vertex set has bits outside the graph")
            return vs
        m = 0
        for v in vs:
            m |= 1 << self.idx(v)
        return m

    def names_of(self, mask: int) -> list[str]:
        return [self.names[i] for i in bits(mask)]

    def edge_names(self) -> list[tuple[str, str]]:
        return [(self.names[u], self.names[v]) for u, v in sorted(self.edges)]

    # -- degrees and adjacency ------------------------------------------

    def out_degree(self, v) -> int:
        return popcount(self.out[self.idx(v)])

    def in_degree(self, v) -> int:
        return popcount(self.inn[self.idx(v)])

    def out_neighbours(self, v) -> list[str]:
        return self.names_of(self.out[self.idx(v)])

    def in_neighbours(self, v) -> list[str]:
        return self.names_of(self.inn[self.idx(v)])

    def has_edge(self, u, v) -> bool:
        return (self.idx(u), self.idx(v)) in self.edges

    def num_edges(self) -> int:
        return len(self.edges)

    # -- dunder ---------------------------------------------------------

    def __len__(self) -> int:
        return self.n

    def __contains__(self, v) -> bool:
        return v in self.index

    def __iter__(self):
        return iter(self.names)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return (self.names == other.names and self.edges == other.edges)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.names, self.edges))
        return self._hash

    def __repr__(self) -> str:
        return f"Digraph(n={self.n}, m={len(self.edges)})"

    # -- serialization --------------------------------------------------

    def to_dict(self) -> dict:
        return {"vertices": list(self.names),
                "edges": [list(e) for e in self.edge_names()]}

    @classmethod
    def from_dict(cls, data: dict) -> "Digraph":
        try:
            return build_digraph(data["vertices"], [tuple(e) for e in data["edges"]])
        except (KeyError, TypeError) as exc:
            raise GraphError(f"malformed digraph JSON: {exc}") from None


def build_digraph(vertex_names, edge_pairs) -> Digraph:
    """Validate names and edges and return a :class:`Digraph`.

    Vertex order is the input order. Raises :class:`GraphError` on duplicate
    names, self-loops, duplicate edges or unknown endpoints.
    """
    names = [str(v) for v in vertex_names]
    index = {}
    for i, name in enumerate(names):
        if name in index:
            raise GraphError(f"duplicate vertex name {name!r}")
        index[name] = i
    edges = []
    seen = set()
    for pair in edge_pairs:
        if len(pair) != 2:
            raise GraphError(f"edge {pair!r} is not a pair")
        u, v = (str(x) for x in pair)
        if u not in index or v not in index:
            raise GraphError(f"edge ({u}, {v}) references an unknown vertex")
        if u == v:
            raise GraphError(f"self-loop at {u!r}")
        e = (index[u], index[v])
        if e in seen:
            raise GraphError(f"duplicate edge ({u}, {v})")
        seen.add(e)
        edges.append(e)
    return Digraph(names, edges)


# -- reachability and strong components ---------------------------------

def reach(D: Digraph, src: int, allowed: int) -> int:
    """Vertices reachable from ``src`` inside ``allowed`` (src included)."""
    seen = src & allowed
    frontier = seen
    out = D.out
    while frontier:
        nxt = 0
        for i in bits(frontier):
            nxt |= out[i]
        frontier = nxt & allowed & ~seen
        seen |= frontier
    return seen


def coreach(D: Digraph, dst: int, allowed: int) -> int:
    """Vertices inside ``allowed`` from which ``dst`` is reachable."""
    seen = dst & allowed
    frontier = seen
    inn = D.inn
    while frontier:
        nxt = 0
        for i in bits(frontier):
            nxt |= inn[i]
        frontier = nxt & allowed & ~seen
        seen |= frontier
    return seen


def scc_masks(D: Digraph, allowed: int) -> list[int]:
    """Strong components of ``D[allowed]`` as bitsets, ordered by least index."""
    comps = []
    rest = allowed
    while rest:
        v = rest & -rest
        comp = reach(D, v, rest) & coreach(D, v, rest)
        comps.append(comp)
        rest &= ~comp
    return comps


def is_strongly_connected(D: Digraph, mask: int) -> bool:
    """Whether ``D[mask]`` is strongly connected (the empty set is not)."""
    if not mask:
        return False
    v = mask & -mask
    return reach(D, v, mask) == mask and coreach(D, v, mask) == mask


@dataclass(frozen=True)
class SccPartition:
    """Strong components of ``D - removed``, ordered by least vertex index."""

    graph: Digraph
    components: tuple[int, ...]

    def component_of(self, v) -> int:
        """Position in ``components`` of the component containing ``v``."""
        bit = 1 << self.graph.idx(v)
        for k, comp in enumerate(self.components):
            if comp & bit:
                return k
        raise GraphError(f"vertex {v!r} was removed")

    def as_names(self) -> list[list[str]]:
        return [self.graph.names_of(c) for c in self.components]

    def __len__(self) -> int:
        return len(self.components)


def strong_components(D: Digraph, removed=0) -> SccPartition:
    removed = D.mask(removed)
    return SccPartition(D, tuple(scc_masks(D, D.full & ~removed)))


def closed_walk_through_both(D: Digraph, removed, u, w) -> bool:
    """Whether some closed walk of ``D - removed`` visits both ``u`` and ``w``.

    For ``u == w`` this asks whether ``u`` lies on a cycle.
    """
    removed = D.mask(removed)
    iu, iw = D.idx(u), D.idx(w)
    if (removed >> iu) & 1 or (removed >> iw) & 1:
        raise GraphError("closed_walk_through_both: endpoint is removed")
    allowed = D.full & ~removed
    if iu == iw:
        return bool(D.out[iu] & coreach(D, 1 << iu, allowed) & allowed)
    return bool(reach(D, 1 << iu, allowed) >> iw & 1
                and reach(D, 1 << iw, allowed) >> iu & 1)


# -- walks ----------------------------------------------------------------

@dataclass(frozen=True)
class Walk:
    """A walk given by vertex names; ``closed`` walks end where they start."""

    vertices: tuple[str, ...]
    closed: bool = False

    def check(self, D: Digraph) -> bool:
        vs = self.vertices
        if not vs:
            return False
        if self.closed and vs[0] != vs[-1]:
            return False
        try:
            return all(D.has_edge(a, b) for a, b in zip(vs, vs[1:]))
        except GraphError:
            return False


def _shortest_path(D: Digraph, src: int, dst_mask: int, allowed: int) -> list[int]:
    """BFS path (as indices) from ``src`` to some vertex of ``dst_mask``."""
    parent = {src: None}
    frontier = [src]
    while frontier:
        nxt = []
        for a in frontier:
            for b in bits(D.out[a] & allowed):
                if b in parent:
                    continue
                parent[b] = a
                if dst_mask >> b & 1:
                    path = [b]
                    while parent[path[-1]] is not None:
                        path.append(parent[path[-1]])
                    return path[::-1]
                nxt.append(b)
        frontier = nxt
    return []


def normality_violation(D: Digraph, guard, A) -> Walk | None:
    """A walk of ``D - guard`` that leaves ``A`` and comes back, if any.

    The walk starts and ends in ``A`` and visits a vertex outside
    ``A ∪ guard``. Returns ``None`` when ``A`` is guard-normal.
    """
    guard, A = D.mask(guard), D.mask(A)
    allowed = D.full & ~guard
    outside = allowed & ~A
    bad = reach(D, A, allowed) & coreach(D, A, allowed) & outside
    if not bad:
        return None
    b = lowest(bad)
    back = _shortest_path(D, b, A, allowed)
    # find a start in A that reaches b
    start = lowest(coreach(D, 1 << b, allowed) & A)
    there = _shortest_path(D, start, 1 << b, allowed)
    path = there + back[1:]
    return Walk(tuple(D.names[i] for i in path), closed=path[0] == path[-1])


# -- subgraphs and contraction --------------------------------------------

def induced_subgraph(D: Digraph, keep) -> Digraph:
    keep = D.mask(keep)
    order = list(bits(keep))
    pos = {v: k for k, v in enumerate(order)}
    edges = [(pos[u], pos[v]) for u, v in D.edges if u in pos and v in pos]
    return Digraph([D.names[i] for i in order], edges)


def delete_vertices(D: Digraph, drop) -> Digraph:
    return induced_subgraph(D, D.full & ~D.mask(drop))


def delete_edges(D: Digraph, drop) -> Digraph:
    gone = set()
    for u, v in drop:
        e = (D.idx(u), D.idx(v))
        if e not in D.edges:
            raise GraphError(f"cannot delete missing edge ({u}, {v})")
        gone.add(e)
    return Digraph(D.names, [e for e in D.edges if e not in gone])


def butterfly_contractible(D: Digraph, e) -> bool:
    u, v = D.idx(e[0]), D.idx(e[1])
    if (u, v) not in D.edges:
        raise GraphError(f"({e[0]}, {e[1]}) is not an edge")
    return popcount(D.out[u]) == 1 or popcount(D.inn[v]) == 1


def contract_edge(D: Digraph, e, merged_name: str) -> Digraph:
    """Contract the butterfly contractible edge ``e`` into ``merged_name``.

    The merged vertex takes the position of the earlier endpoint; loops and
    parallel edges created by the contraction are dropped.
    """
    if not butterfly_contractible(D, e):
        raise GraphError(f"edge ({e[0]}, {e[1]}) is not butterfly contractible")
    u, v = D.idx(e[0]), D.idx(e[1])
    merged_name = str(merged_name)
    if merged_name in D.index and D.index[merged_name] not in (u, v):
        raise GraphError(f"merged name {merged_name!r} already in use")
    first, second = min(u, v), max(u, v)
    names = list(D.names)
    names[first] = merged_name
    del names[second]

    def rename(i: int) -> int:
        if i == second:
            i = first
        return i - 1 if i > second else i

    edges = set()
    for a, b in D.edges:
        a2, b2 = rename(a), rename(b)
        if a2 != b2:
            edges.add((a2, b2))
    return Digraph(names, edges)


def lift_closed_walk(D: Digraph, e, W_prime: Walk, merged_name: str) -> Walk:
    """Lift a closed walk of ``D/e`` back to a closed walk of ``D``.

    Every visit of the merged vertex is replaced by ``u``, ``v`` or ``u, v``
    as the neighbouring edges require. When ``deg⁺(u) = 1`` the lifted walk
    contains ``v``, otherwise it contains ``u``.
    """
    if not W_prime.closed or not W_prime.vertices or W_prime.vertices[0] != W_prime.vertices[-1]:
        raise GraphError("lift_closed_walk needs a closed walk")
    u, v = str(e[0]), str(e[1])
    if not butterfly_contractible(D, (u, v)):
        raise GraphError("lift_closed_walk: edge was not contractible")
    x = str(merged_name)
    keep_v = D.out_degree(u) == 1
    if len(W_prime.vertices) == 1:
        if W_prime.vertices[0] != x:
            return W_prime
        return Walk((v if keep_v else u,), closed=True)
    cyc = list(W_prime.vertices[:-1])
    if x not in cyc:
        return W_prime
    out = []
    m = len(cyc)
    for k, w in enumerate(cyc):
        if w != x:
            out.append(w)
            continue
        p, s = cyc[k - 1], cyc[(k + 1) % m]
        enter = [a for a in (u, v) if D.has_edge(p, a)]
        leave = [b for b in (u, v) if D.has_edge(b, s)]
        if set(enter) & set(leave):
            a = v if v in enter and v in leave and keep_v else (
                u if u in enter and u in leave else v)
            out.append(a)
        elif u in enter and v in leave:
            out.extend([u, v])
        else:
            raise GraphError("closed walk does not lift; edge was not contractible")
    out.append(out[0])
    return Walk(tuple(out), closed=True)
