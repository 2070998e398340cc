"""Brambles, covers, bramble number, k-linked sets and bramble havens.

Bramble elements are stored as vertex sets. A vertex set is a valid element
when it induces a strongly connected subgraph.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .digraph import Digraph, bits, is_strongly_connected, popcount, reach, coreach, scc_masks
from .errors import BudgetExceeded, CapExceeded, DtwlabError
from .minors import MinorWitness, model_from_script, verify_witness

KINDS = ("strong", "weak")
BRAMBLE_CAP = 8
HAVEN_CAP = 10


@dataclass
class Bramble:
    elements: list[int]
    kind: str = "strong"

    def to_dict(self, D: Digraph) -> dict:
        return {"kind": self.kind, "elements": [D.names_of(B) for B in self.elements]}

    @classmethod
    def from_dict(cls, data: dict, D: Digraph) -> "Bramble":
        kind = data.get("kind", "strong")
        if kind not in KINDS:
            raise DtwlabError(f"unknown bramble kind {kind!r}")
        return cls([D.mask(e) for e in data["elements"]], kind)

    def names(self, D: Digraph) -> list[list[str]]:
        return [D.names_of(B) for B in self.elements]


@dataclass
class BrambleVerdict:
    valid: bool
    problems: list[str] = field(default_factory=list)


@dataclass
class CoverCertificate:
    cover: int
    optimal: bool

    @property
    def order(self) -> int:
        return popcount(self.cover)


@dataclass
class LinkedSetReport:
    W: int
    k: int
    balanced_separator: int | None

    @property
    def linked(self) -> bool:
        return self.balanced_separator is None


def _touch_both_ways(D: Digraph, A: int, B: int) -> bool:
    ab = ba = False
    for i in bits(A):
        if D.out[i] & B:
            ab = True
        if D.inn[i] & B:
            ba = True
    return ab and ba


def compatible(D: Digraph, A: int, B: int, kind: str = "strong") -> bool:
    if A & B:
        return True
    return kind == "weak" and _touch_both_ways(D, A, B)


def validate_bramble(D: Digraph, B: Bramble) -> BrambleVerdict:
    bad = []
    if B.kind not in KINDS:
        bad.append(f"unknown kind {B.kind!r}")
    for i, X in enumerate(B.elements):
        if X == 0 or X & ~D.full:
            bad.append(f"element {i} is empty or leaves the graph")
        elif not is_strongly_connected(D, X):
            bad.append(f"element {i} {D.names_of(X)} is not strongly connected")
    for i, j in itertools.combinations(range(len(B.elements)), 2):
        if not compatible(D, B.elements[i], B.elements[j], B.kind):
            bad.append(f"elements {i} and {j} are not {'touching' if B.kind == 'weak' else 'intersecting'}")
    return BrambleVerdict(not bad, bad)


def _greedy_cover(sets: list[int]) -> int:
    cover = 0
    left = list(sets)
    while left:
        counts = {}
        for S in left:
            for v in bits(S):
                counts[v] = counts.get(v, 0) + 1
        v = min(counts, key=lambda u: (-counts[u], u))
        cover |= 1 << v
        left = [S for S in left if not S >> v & 1]
    return cover


def min_hitting_set(sets: list[int], budget: int | None = None) -> int:
    """Exact minimum hitting set: greedy upper bound, then branch on a smallest set."""
    sets = sorted(set(sets), key=lambda s: (popcount(s), s))
    if any(s == 0 for s in sets):
        raise DtwlabError("an empty set cannot be hit")
    best = [_greedy_cover(sets)]
    steps = [0]

    def lower_bound(left):
        # disjoint sets need distinct vertices
        used, lb = 0, 0
        for S in left:
            if not S & used:
                used |= S
                lb += 1
        return lb

    def go(chosen, left):
        steps[0] += 1
        if budget is not None and steps[0] > budget:
            raise BudgetExceeded(f"hitting set search exceeded {budget} steps")
        if not left:
            if popcount(chosen) < popcount(best[0]):
                best[0] = chosen
            return
        if popcount(chosen) + lower_bound(left) >= popcount(best[0]):
            return
        S = left[0]
        counts = {v: sum(1 for T in left if T >> v & 1) for v in bits(S)}
        for v in sorted(counts, key=lambda u: (-counts[u], u)):
            go(chosen | 1 << v, [T for T in left if not T >> v & 1])

    go(0, sets)
    return best[0]


def bramble_order(D: Digraph, B: Bramble, budget: int | None = None) -> CoverCertificate:
    v = validate_bramble(D, B)
    if not v.valid:
        raise DtwlabError(f"invalid bramble: {v.problems[0]}")
    if not B.elements:
        return CoverCertificate(0, True)
    return CoverCertificate(min_hitting_set(B.elements, budget), True)


def strongly_connected_sets(D: Digraph, cap: int | None = BRAMBLE_CAP) -> list[int]:
    """Every nonempty vertex set inducing a strongly connected subgraph."""
    if cap is not None and D.n > cap:
        raise CapExceeded(f"{D.n} vertices exceed the cap of {cap}")
    return [m for m in range(1, D.full + 1) if is_strongly_connected(D, m)]


def _bramble_of_order(D: Digraph, t: int, kind: str, budget: int | None):
    """A bramble that no ``t - 1`` vertices cover, as one component of ``D - X`` per X."""
    if t <= 0:
        return []
    if t - 1 > D.n:
        return None
    Xs = [sum(1 << i for i in c) for c in itertools.combinations(range(D.n), t - 1)]
    domains = []
    for X in Xs:
        comps = scc_masks(D, D.full & ~X)
        if not comps:
            return None
        domains.append(sorted(comps, key=lambda c: (-popcount(c), c)))
    order = sorted(range(len(Xs)), key=lambda i: len(domains[i]))
    chosen = [None] * len(Xs)
    steps = [0]

    def go(pos, doms):
        steps[0] += 1
        if budget is not None and steps[0] > budget:
            raise BudgetExceeded(f"bramble search exceeded {budget} steps")
        if pos == len(order):
            return True
        i = order[pos]
        for c in doms[i]:
            new = dict(doms)
            ok = True
            for j in order[pos + 1:]:
                new[j] = [d for d in doms[j] if compatible(D, c, d, kind)]
                if not new[j]:
                    ok = False
                    break
            if ok:
                chosen[i] = c
                if go(pos + 1, new):
                    return True
        return False

    if not go(0, {i: domains[i] for i in range(len(Xs))}):
        return None
    return sorted(set(chosen), key=lambda c: (popcount(c), c))


def bramble_number(D: Digraph, kind: str = "strong", cap: int | None = BRAMBLE_CAP,
                   budget: int | None = None) -> tuple[int, Bramble]:
    """Maximum order of a bramble, with a witness of that order.

    Growing an element only helps, so for order ``t`` it suffices to pick,
    for every ``X`` with ``|X| = t - 1``, one strong component of ``D - X``
    such that the picks are pairwise compatible.
    """
    if kind not in KINDS:
        raise DtwlabError(f"unknown bramble kind {kind!r}")
    if cap is not None and D.n > cap:
        raise CapExceeded(f"{D.n} vertices exceed the cap of {cap}")
    best = Bramble([], kind)
    t = 0
    while True:
        found = _bramble_of_order(D, t + 1, kind, budget)
        if found is None:
            return t, best
        t += 1
        best = Bramble(found, kind)


def lift_bramble(D_prime: Digraph, D: Digraph, w: MinorWitness, B_prime: Bramble) -> Bramble:
    """Lift a strong bramble of the minor ``D_prime`` to the host ``D``.

    Each element becomes the strong component, inside the union of its
    branch sets, that holds the branch roots. Elements sharing a vertex
    share its root, and a cover of the lift pulls back to a cover of the
    original that is no larger.
    """
    if B_prime.kind != "strong":
        raise DtwlabError("only strong brambles can be lifted")
    if not verify_witness(D_prime, D, w):
        raise DtwlabError("minor witness does not verify")
    v = validate_bramble(D_prime, B_prime)
    if not v.valid:
        raise DtwlabError(f"invalid bramble: {v.problems[0]}")
    mu = model_from_script(D, w)
    out = []
    for B in B_prime.elements:
        names = D_prime.names_of(B)
        union = 0
        for x in names:
            union |= D.mask(mu.vertex_images[x].vertices())
        root = D.mask([mu.vertex_images[names[0]].root])
        comp = reach(D, root, union) & coreach(D, root, union)
        out.append(comp)
    return Bramble(out, "strong")


def is_k_linked(D: Digraph, W, k: int, budget: int | None = None) -> LinkedSetReport:
    """Search every ``S`` with ``|S| <= k`` for a balanced W-separator."""
    Wm = D.mask(W) if not isinstance(W, int) else W
    half = popcount(Wm) / 2
    steps = 0
    for r in range(0, min(k, D.n) + 1):
        for combo in itertools.combinations(range(D.n), r):
            steps += 1
            if budget is not None and steps > budget:
                raise BudgetExceeded(f"separator search exceeded {budget} steps")
            S = sum(1 << i for i in combo)
            if all(popcount(c & Wm) <= half for c in scc_masks(D, D.full & ~S)):
                return LinkedSetReport(Wm, k, S)
    return LinkedSetReport(Wm, k, None)


def klinked_to_bramble(D: Digraph, W, k: int, cap: int | None = BRAMBLE_CAP) -> Bramble:
    """Strongly connected sets holding more than half of ``W``."""
    rep = is_k_linked(D, W, k)
    if not rep.linked:
        raise DtwlabError(f"W is not {k}-linked; separator {D.names_of(rep.balanced_separator)}")
    half = popcount(rep.W) / 2
    elems = [X for X in strongly_connected_sets(D, cap) if popcount(X & rep.W) > half]
    return Bramble(elems, "strong")


def bramble_haven_check(D: Digraph, B: Bramble, k: int, cap: int | None = HAVEN_CAP) -> BrambleVerdict:
    """Build ``h(X)`` from the bramble for all ``|X| < k`` and check the haven axioms."""
    if cap is not None and D.n > cap:
        raise CapExceeded(f"{D.n} vertices exceed the haven cap of {cap}")
    h = {}
    bad = []
    for r in range(0, k):
        for combo in itertools.combinations(range(D.n), r):
            X = sum(1 << i for i in combo)
            elem = next((E for E in B.elements if not E & X), None)
            if elem is None:
                bad.append(f"no element avoids {D.names_of(X)}; bramble order is below {k}")
                continue
            low = elem & -elem
            allowed = D.full & ~X
            h[X] = reach(D, low, allowed) & coreach(D, low, allowed)
    for X, hx in h.items():
        for i in bits(X):
            Y = X & ~(1 << i)
            if Y in h and hx & ~h[Y]:
                bad.append(f"h({D.names_of(X)}) is not inside h({D.names_of(Y)})")
    return BrambleVerdict(not bad, bad)
