"""Exact directed tree-width for every flavor at desk scale.

The search works on subtree vertex sets. For a candidate set ``W`` (the
vertices below some tree edge) and a guard ``g`` on that edge, ``F(W, g)``
says whether a valid subtree exists. A node is described by ``U``, a superset
of its Γ with ``|U| <= w + 1``: it takes a bag ``b ⊆ W ∩ U`` and splits
``W - b`` into child blocks, each under a guard ``h ⊆ U``. Sets are processed
by increasing size; single-child empty-bag nodes, which keep ``W`` and only
change the guard, are handled by a fixpoint per ``W``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .decomp import (NONEMPTY_BAGS, STRONG_COMPONENT, DirectedTreeDecomposition,
                     guard_condition, normalize_flavor, validate)
from .digraph import Digraph, bits, popcount, scc_masks
from .errors import BudgetExceeded, CapExceeded

DEFAULT_CAP = 7


@dataclass
class WidthResult:
    width: int
    certificate: DirectedTreeDecomposition
    flavor: str
    metadata: dict = field(default_factory=dict)


def _subsets_upto(universe: int, k: int):
    idx = list(bits(universe))
    for r in range(min(k, len(idx)) + 1):
        for combo in itertools.combinations(idx, r):
            m = 0
            for i in combo:
                m |= 1 << i
            yield m


def _submasks(mask: int):
    s = mask
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & mask


class _Search:
    """Decide ``width <= w`` for one flavor and keep enough to rebuild a certificate."""

    def __init__(self, D: Digraph, flavor: str, w: int, max_bag: int | None,
                 budget: int | None):
        self.D = D
        self.flavor = flavor
        self.k = w + 1
        self.max_bag = max_bag
        self.budget = budget
        self.work = 0
        self.nonempty = flavor in NONEMPTY_BAGS
        self.sparse = flavor in STRONG_COMPONENT
        self._scc_cache: dict[int, list[int]] = {}
        self.guards_of: dict[int, list[int]] = {}     # W -> valid guards, |g| <= k
        self.good: dict[int, dict[int, tuple]] = {}   # W -> g -> how F(W, g) holds
        self.blocks_by_guard: dict[int, list[int]] = {}
        self._part_memo: dict[tuple[int, int], object] = {}

    def tick(self, n=1):
        self.work += n
        if self.budget is not None and self.work > self.budget:
            raise BudgetExceeded(f"width search exceeded {self.budget} steps")

    def sccs(self, removed: int) -> list[int]:
        out = self._scc_cache.get(removed)
        if out is None:
            out = scc_masks(self.D, self.D.full & ~removed)
            self._scc_cache[removed] = out
        return out

    # -- candidate blocks ---------------------------------------------------

    def enumerate_candidates(self):
        D = self.D
        guards = list(_subsets_upto(D.full, self.k))
        if self.sparse:
            for g in guards:
                for comp in self.sccs(g):
                    self.guards_of.setdefault(comp, []).append(g)
            return
        for W in range(1, D.full + 1):
            for g in guards:
                self.tick()
                if self._valid(W, g):
                    self.guards_of.setdefault(W, []).append(g)

    def _valid(self, W: int, g: int) -> bool:
        f = self.flavor
        if f == "NW" or f == "USC0":
            if W & g:
                return False
        if f == "NW":
            return guard_condition(self.D, "NW", W, g) is None
        for comp in self.sccs(g):
            inside = comp & W
            if inside and inside != comp:
                return False
        if f == "USC0":
            return True
        # NCW family: vertices of W in the guard are allowed
        return True

    # -- node choices -------------------------------------------------------

    def usable_blocks(self, U: int, within: int):
        """Blocks ``K ⊆ within`` with some good guard ``h ⊆ U``, as (K, h) pairs."""
        out = {}
        for h in _submasks(U):
            for K in self.blocks_by_guard.get(h, ()):
                if K & ~within == 0 and K not in out:
                    out[K] = h
        return out

    def partition(self, X: int, U: int, blocks: dict):
        """An exact cover of ``X`` by ``blocks`` as a list of (K, h), or None."""
        if X == 0:
            return []
        key = (X, U)
        if key in self._part_memo:
            return self._part_memo[key]
        self.tick()
        low = X & -X
        res = None
        for K, h in blocks.items():
            if K & low and K & ~X == 0:
                rest = self.partition(X & ~K, U, blocks)
                if rest is not None:
                    res = [(K, h)] + rest
                    break
        self._part_memo[key] = res
        return res

    def bag_choices(self, W: int, U: int):
        inside = W & U
        if self.flavor == "SCd":
            if inside:
                yield inside
            return
        for b in _submasks(inside):
            if self.nonempty and not b:
                continue
            if self.max_bag is not None and popcount(b) > self.max_bag:
                continue
            yield b

    def node_for(self, W: int, U: int):
        """A bag and child blocks realising ``W`` at a node with Γ ⊆ U.

        ``W`` itself is not yet a registered block, so an empty bag always
        splits ``W`` into proper subsets here; the single-child empty-bag case
        is the guard-change chain handled in :meth:`solve_block`.
        """
        blocks = self.usable_blocks(U, W)
        for b in self.bag_choices(W, U):
            part = self.partition_top(W & ~b, U, blocks)
            if part is not None:
                return b, part
        return None

    def partition_top(self, X: int, U: int, blocks: dict):
        """Like :meth:`partition` but never memoises ``X`` itself."""
        if X == 0:
            return []
        low = X & -X
        for K, h in blocks.items():
            if K & low and K & ~X == 0:
                rest = self.partition(X & ~K, U, blocks)
                if rest is not None:
                    return [(K, h)] + rest
        return None

    def candidate_U(self, W: int):
        """All ``U`` with ``|U| <= k`` containing some valid guard of ``W``."""
        D = self.D
        seen = set()
        for g in self.guards_of.get(W, ()):
            room = self.k - popcount(g)
            for extra in _subsets_upto(D.full & ~g, room):
                U = g | extra
                if U not in seen:
                    seen.add(U)
                    yield U

    def solve_block(self, W: int):
        valid = self.guards_of.get(W, [])
        if not valid:
            return
        good_U = {}
        for U in sorted(self.candidate_U(W), key=lambda m: (popcount(m), m)):
            if not any(g & ~U == 0 for g in valid):
                continue
            self.tick()
            res = self.node_for(W, U)
            if res is not None:
                good_U[U] = res
        good = {}
        for g in valid:
            for U, res in good_U.items():
                if g & ~U == 0:
                    good[g] = ("node", U, res)
                    break
        if not self.nonempty:
            # guard-change chains through single-child empty-bag nodes
            changed = True
            while changed:
                changed = False
                for g in valid:
                    if g in good:
                        continue
                    for h in list(good):
                        if popcount(g | h) <= self.k:
                            good[g] = ("chain", h)
                            changed = True
                            break
        if good:
            self.good[W] = good
            for g in good:
                self.blocks_by_guard.setdefault(g, []).append(W)

    def run(self):
        self.enumerate_candidates()
        for W in sorted(self.guards_of, key=lambda m: (popcount(m), m)):
            if W == self.D.full and not self.sparse:
                continue
            self.solve_block(W)
        return self.solve_root()

    def solve_root(self):
        V = self.D.full
        for U in sorted(_subsets_upto(V, self.k), key=lambda m: (popcount(m), m)):
            self.tick()
            blocks = self.usable_blocks(U, V)
            for b in self.bag_choices(V, U):
                if not b:
                    continue
                part = self.partition_top(V & ~b, U, blocks)
                if part is not None:
                    return U, b, part
        return None

    # -- certificate --------------------------------------------------------

    def build(self, root_choice) -> DirectedTreeDecomposition:
        U, b, part = root_choice
        bags, parent, guards, order = {}, {}, {}, []
        counter = itertools.count()

        def new_node(bag, par, guard):
            t = f"n{next(counter)}"
            bags[t] = bag
            parent[t] = par
            if par is not None:
                guards[t] = guard
            order.append(t)
            return t

        root = new_node(b, None, None)
        stack = [(root, K, h) for K, h in reversed(part)]
        while stack:
            par, W, g = stack.pop()
            how = self.good[W][g]
            if how[0] == "chain":
                t = new_node(0, par, g)
                stack.append((t, W, how[1]))
                continue
            _, _, (bag, kids) = how
            t = new_node(bag, par, g)
            for K, h in reversed(kids):
                stack.append((t, K, h))
        return DirectedTreeDecomposition(self.D, root, parent, bags, guards, self.flavor, order)


def decide_width(D: Digraph, flavor: str, w: int, max_bag: int | None = None,
                 budget: int | None = None, cap: int | None = DEFAULT_CAP):
    """A decomposition of width at most ``w`` or ``None`` if none exists.

    ``max_bag`` restricts bag sizes (``1`` gives singleton-bag decompositions).
    The strong-component flavors use a sparse candidate set and may exceed
    the default cap when a caller passes ``cap=None``.
    """
    flavor = normalize_flavor(flavor)
    if cap is not None and D.n > cap:
        raise CapExceeded(f"{D.n} vertices exceed the desk-scale cap of {cap}")
    if D.n == 0:
        raise CapExceeded("empty digraph has no decomposition")
    if w < 0:
        return None
    s = _Search(D, flavor, w, max_bag, budget)
    choice = s.run()
    if choice is None:
        return None
    return s.build(choice)


def exact_width(D: Digraph, flavor: str, upper_bound: int | None = None,
                budget: int | None = None, cap: int | None = DEFAULT_CAP) -> WidthResult:
    """Minimum width over all decompositions of the flavor, with a certificate.

    For SC0 the certificate must also have at most ``|V|²`` nodes; if the
    search's certificate is larger, the metadata flags ``node_cap_binds``.
    """
    flavor = normalize_flavor(flavor)
    if cap is not None and D.n > cap:
        raise CapExceeded(f"{D.n} vertices exceed the desk-scale cap of {cap}")
    hi = D.n - 1 if upper_bound is None else min(upper_bound, D.n - 1)
    for w in range(0, hi + 1):
        T = decide_width(D, flavor, w, budget=budget, cap=cap)
        if T is None:
            continue
        meta = {"nodes": len(T.order)}
        if flavor == "SC0" and len(T.order) > D.n * D.n:
            meta["node_cap_binds"] = True
        rep = validate(T)
        if not rep.valid and not meta.get("node_cap_binds"):
            raise AssertionError(f"certificate failed validation: {rep.violations[0]}")
        return WidthResult(rep.width, T, flavor, meta)
    raise AssertionError("no decomposition found up to width n - 1")
