"""The directed cops-and-robber game: exact solver, strategy trees, plays.

Positions are pairs ``(C, R)``: cops on ``C`` and the robber somewhere in the
strong component ``R`` of ``D - C``. All robber vertices of ``R`` are
equivalent, so this is the whole arena.

For a cop announcement ``C'`` with ``X = C ∩ C'`` the robber runs inside the
component ``S`` of ``D - X`` containing ``R`` and then picks a component of
``D - C'`` inside ``S``. Cops win from ``(C, R)`` iff for some ``X ⊆ C`` the
pair ``(X, S)`` is *good*: some ``C' ⊇ X`` of size at most ``k`` leaves only
winning positions inside ``S``. In robber-monotone mode the move must also
keep ``S = R``.

The solver is a worklist fixpoint in the style of Knuth's generalisation of
Dijkstra's algorithm, so it also yields, for every winning position, the
least number of nodes of a strategy subtree that uses one edge per component.
"""

from __future__ import annotations

import heapq
import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Callable

from .digraph import Digraph, bits, lowest, popcount, reach, coreach, scc_masks
from .errors import BudgetExceeded, CapExceeded, StrategyError

MODES = ("free", "robber_monotone")
DEFAULT_ARENA_CAP = 200_000


def _normalize_mode(mode: str) -> str:
    m = {"monotone": "robber_monotone", "robber-monotone": "robber_monotone"}.get(mode, mode)
    if m not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    return m


def _sets_upto(n: int, k: int, base: int = 0, avoid: int = 0):
    """All supersets of ``base`` with at most ``k`` elements avoiding ``avoid``."""
    free = [i for i in range(n) if not (base | avoid) >> i & 1]
    room = k - popcount(base)
    for r in range(0, max(room, -1) + 1):
        for combo in itertools.combinations(free, r):
            m = base
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


# -- strategy trees ---------------------------------------------------------

class StrategyTree:
    """Rooted tree with cop sets on nodes and robber sets on edges (keyed by child)."""

    def __init__(self, host: Digraph, root: str, parent: dict, cops: dict, robber: dict,
                 order: list | None = None):
        self.host = host
        self.root = root
        self.parent = dict(parent)
        self.cops = {t: host.mask(c) for t, c in cops.items()}
        self.robber = {t: host.mask(r) for t, r in robber.items()}
        self.order = list(order) if order is not None else list(self.cops)
        if set(self.order) != set(self.cops) or root not in self.cops:
            raise StrategyError("node list does not match the cop labels")
        self.children = {t: [] for t in self.order}
        for t in self.order:
            if t == root:
                continue
            p = self.parent.get(t)
            if p not in self.children:
                raise StrategyError(f"node {t!r} has no valid parent")
            if t not in self.robber:
                raise StrategyError(f"edge into {t!r} has no robber label")
            self.children[p].append(t)
        if len(self.preorder()) != len(self.order):
            raise StrategyError("strategy tree is not connected from its root")

    def preorder(self) -> list[str]:
        out, stack, seen = [], [self.root], set()
        while stack:
            t = stack.pop()
            if t in seen:
                raise StrategyError("strategy tree has a cycle")
            seen.add(t)
            out.append(t)
            stack.extend(reversed(self.children[t]))
        return out

    def edges(self) -> list[tuple[str, str]]:
        return [(self.parent[t], t) for t in self.preorder() if t != self.root]

    def width(self) -> int:
        return max(popcount(c) for c in self.cops.values())

    def __len__(self) -> int:
        return len(self.order)

    def find(self, cops) -> list[str]:
        m = self.host.mask(cops)
        return [t for t in self.preorder() if self.cops[t] == m]

    def to_dict(self) -> dict:
        D = self.host
        return {"root": self.root,
                "nodes": [{"id": t, "cops": D.names_of(self.cops[t])} for t in self.preorder()],
                "edges": [{"from": self.parent[t], "to": t, "robber": D.names_of(self.robber[t])}
                          for t in self.preorder() if t != self.root]}

    @classmethod
    def from_dict(cls, data: dict, host: Digraph) -> "StrategyTree":
        try:
            order = [str(n["id"]) for n in data["nodes"]]
            cops = {str(n["id"]): [str(v) for v in n["cops"]] for n in data["nodes"]}
            parent, robber = {t: None for t in order}, {}
            for e in data["edges"]:
                parent[str(e["to"])] = str(e["from"])
                robber[str(e["to"])] = [str(v) for v in e["robber"]]
            return cls(host, str(data["root"]), parent, cops, robber, order)
        except (KeyError, TypeError) as exc:
            raise StrategyError(f"malformed strategy JSON: {exc}") from None

    def to_dot(self) -> str:
        D = self.host
        lines = ["digraph S {", "  node [shape=box];"]
        for t in self.preorder():
            lines.append(f'  "{t}" [label="{", ".join(D.names_of(self.cops[t]))}"];')
        for p, t in self.edges():
            lines.append(f'  "{p}" -> "{t}" [label="{", ".join(D.names_of(self.robber[t]))}"];')
        lines.append("}")
        return "\n".join(lines)


@dataclass
class StrategyVerdict:
    valid: bool
    width: int
    robber_monotone: bool
    violations: list[str] = field(default_factory=list)


def _reachable_components(D: Digraph, prev_cops: int, prev_comps: list[int], cops: int) -> list[int]:
    """Components of ``D - cops`` sharing a component of ``D - (prev ∩ cops)`` with ``prev_comps``."""
    X = prev_cops & cops
    allowed = D.full & ~X
    zone = 0
    for C in prev_comps:
        v = C & -C
        zone |= reach(D, v, allowed) & coreach(D, v, allowed)
    return [c for c in scc_masks(D, D.full & ~cops) if c & zone]


def _covering(comps: list[int], labels: list[tuple[str, int]], where: str, bad: list[str]):
    """Each component needs exactly one label containing it and must miss the others."""
    out = {}
    for C in comps:
        hits = [t for t, lab in labels if C & ~lab == 0]
        touch = [t for t, lab in labels if C & lab]
        if not hits:
            bad.append(f"{where}: no outgoing edge covers a robber component")
        elif len(touch) > 1:
            bad.append(f"{where}: a robber component meets several outgoing edges")
        else:
            out[C] = hits[0]
    return out


def validate_strategy_tree(D: Digraph, Ts: StrategyTree) -> StrategyVerdict:
    """Check the covering conditions at every node; report robber-monotonicity."""
    bad: list[str] = []
    monotone = True
    r = Ts.root
    labels = [(c, Ts.robber[c]) for c in Ts.children[r]]
    root_comps = scc_masks(D, D.full & ~Ts.cops[r])
    assign = _covering(root_comps, labels, f"node {r}", bad)
    # incoming components per edge: components of D - cops(parent) inside the label
    queue = deque()
    for c in Ts.children[r]:
        inc = [C for C in root_comps if C & ~Ts.robber[c] == 0]
        queue.append((r, c, inc))
    while queue:
        s, t, inc = queue.popleft()
        comps = _reachable_components(D, Ts.cops[s], inc, Ts.cops[t]) if inc else []
        labels = [(c, Ts.robber[c]) for c in Ts.children[t]]
        assign = _covering(comps, labels, f"node {t}", bad)
        for C2 in assign:
            # C2 must sit inside every incoming component it is reachable from
            X = Ts.cops[s] & Ts.cops[t]
            allowed = D.full & ~X
            v = C2 & -C2
            zone = reach(D, v, allowed) & coreach(D, v, allowed)
            for C in inc:
                if C & zone and C2 & ~C:
                    monotone = False
        for c in Ts.children[t]:
            queue.append((t, c, [C for C in comps if C & ~Ts.robber[c] == 0]))
    return StrategyVerdict(not bad, Ts.width(), monotone, bad)


def dtd_to_strategy_tree(T) -> StrategyTree:
    """Cops on Γ(t) at each node; the robber label of an edge is β(T_t) − γ(e)."""
    from .decomp import validate
    rep = validate(T)
    if not rep.valid:
        raise StrategyError(f"decomposition is not valid: {rep.violations[0]}")
    cops = {t: T.Gamma(t) for t in T.order}
    robber = {t: T.subtree_mask(t) & ~T.guards[t] for t in T.order if t != T.root}
    return StrategyTree(T.host, T.root, T.parent, cops, robber, T.order)


def _reroot_one(D: Digraph, Ts: StrategyTree, r_new: str) -> StrategyTree:
    """Move the root to its child ``r_new``."""
    r_old = Ts.root
    parent = dict(Ts.parent)
    parent[r_new] = None
    parent[r_old] = r_new
    robber = {}
    below = 0
    for c in Ts.children[r_new]:
        below |= Ts.robber[c]
    robber[r_old] = D.full & ~(Ts.cops[r_new] | below)
    # labels in r_new's old subtree are kept
    keep = set()
    stack = list(Ts.children[r_new])
    while stack:
        t = stack.pop()
        keep.add(t)
        robber[t] = Ts.robber[t]
        stack.extend(Ts.children[t])
    children = {t: [c for c in Ts.children[t]] for t in Ts.order}
    children[r_old] = [c for c in Ts.children[r_old] if c != r_new]
    children[r_new] = [r_old] + list(Ts.children[r_new])
    alive = {r_new} | keep
    queue = deque()
    if robber[r_old]:
        alive.add(r_old)
        queue.append(r_old)
    while queue:
        t = queue.popleft()
        s = parent[t]
        inc = [C for C in scc_masks(D, D.full & ~Ts.cops[s]) if C & ~robber[t] == 0]
        comps = _reachable_components(D, Ts.cops[s], inc, Ts.cops[t]) if inc else []
        for c in children[t]:
            lab = 0
            for C2 in comps:
                if C2 & ~Ts.robber[c] == 0:
                    lab |= C2
            if lab:
                robber[c] = lab
                alive.add(c)
                queue.append(c)
    order = [t for t in Ts.order if t in alive]
    order.remove(r_new)
    order.insert(0, r_new)
    return StrategyTree(D, r_new, {t: parent[t] for t in order},
                        {t: Ts.cops[t] for t in order},
                        {t: robber[t] for t in order if t != r_new}, order)


def reroot_strategy_tree(D: Digraph, Ts: StrategyTree, r_new: str) -> StrategyTree:
    """Re-root one edge at a time along the old root path; emptied subtrees are pruned."""
    if r_new not in Ts.cops:
        raise StrategyError(f"unknown node {r_new!r}")
    path = [r_new]
    while path[-1] != Ts.root:
        path.append(Ts.parent[path[-1]])
    path.reverse()
    for nxt in path[1:]:
        Ts = _reroot_one(D, Ts, nxt)
    return Ts


def path_strategy_tree(D: Digraph, prefix: list, branches: list) -> StrategyTree:
    """A strategy tree from cop sequences: a shared path, then one path per branch.

    Each edge label is the union of the reachable components assigned to that
    child. At the branching node a component goes to the first branch whose
    cop sets touch it.
    """
    seqs = [D.mask(c) for c in prefix]
    branch_masks = [[D.mask(c) for c in br] for br in branches]
    if not seqs:
        if len(branch_masks) != 1 and not branch_masks:
            raise StrategyError("empty strategy")
    cops, parent, robber, order = {}, {}, {}, []
    counter = itertools.count()

    def add(c, p):
        t = f"s{next(counter)}"
        cops[t] = c
        parent[t] = p
        order.append(t)
        return t

    if seqs:
        root = add(seqs[0], None)
        rest = seqs[1:]
    else:
        root = add(branch_masks[0][0], None)
        rest = []
        branch_masks = [branch_masks[0][1:]] + branch_masks[1:]
    last = root
    for c in rest:
        last = add(c, last)
    territory = []
    for br in branch_masks:
        m = 0
        for c in br:
            m |= c
        territory.append(m)
    heads = []
    for br in branch_masks:
        if not br:
            heads.append(None)
            continue
        t = add(br[0], last)
        prev = t
        for c in br[1:]:
            prev = add(c, prev)
        heads.append(t)
    children = {t: [] for t in order}
    for t in order:
        if parent[t] is not None:
            children[parent[t]].append(t)
    # assign labels top-down
    queue = deque([(root, None)])
    while queue:
        t, inc = queue.popleft()
        if t == root:
            comps = scc_masks(D, D.full & ~cops[t])
        else:
            comps = _reachable_components(D, cops[parent[t]], inc, cops[t]) if inc else []
        kids = children[t]
        labels = {c: 0 for c in kids}
        for C in comps:
            if not kids:
                continue
            if len(kids) == 1:
                labels[kids[0]] |= C
                continue
            pick = None
            for c in kids:
                k = heads.index(c) if c in heads else None
                if k is not None and C & territory[k]:
                    pick = c
                    break
            labels[pick if pick is not None else kids[0]] |= C
        for c in kids:
            robber[c] = labels[c]
            queue.append((c, [C for C in comps if C & ~labels[c] == 0]))
    return StrategyTree(D, root, parent, cops, robber, order)


# -- the solver ----------------------------------------------------------------

class _Arena:
    """Strong components of ``D - X`` for every ``|X| <= k``, with a lookup by vertex."""

    def __init__(self, D: Digraph, k: int, cap: int | None):
        self.D = D
        self.k = k
        self.comps: dict[int, list[int]] = {}
        self.comp_of: dict[int, list[int]] = {}
        count = 0
        for X in _sets_upto(D.n, k):
            count += 1
            if cap is not None and count > cap:
                raise CapExceeded(f"more than {cap} cop positions for k={k}")
            cs = scc_masks(D, D.full & ~X)
            self.comps[X] = cs
            arr = [0] * D.n
            for c in cs:
                for i in bits(c):
                    arr[i] = c
            self.comp_of[X] = arr

    def component(self, X: int, R: int) -> int:
        return self.comp_of[X][lowest(R)]


class GameSolution:
    """Solved arena: position values and optimal moves."""

    def __init__(self, D: Digraph, k: int, mode: str, arena: _Arena, value: dict,
                 choice: dict, good: dict, forbid):
        self.D, self.k, self.mode = D, k, mode
        self.arena = arena
        self.value = value          # (C, R) -> min subtree size
        self.choice = choice        # (C, R) -> X
        self.good = good            # (X, S) -> (value, C')
        self.forbid = forbid

    def wins(self, C: int, R: int) -> bool:
        return (C, R) in self.value

    def positions(self):
        for C, comps in self.arena.comps.items():
            if self.forbid is not None and self.forbid(C):
                continue
            for R in comps:
                yield C, R

    def losing_positions(self) -> list[tuple[int, int]]:
        return [p for p in self.positions() if p not in self.value]

    def start_positions(self) -> list[tuple[int, int]]:
        return [(0, R) for R in self.arena.comps[0]]

    def cops_win(self) -> bool:
        return all(self.wins(C, R) for C, R in self.start_positions())

    def best_move(self, C: int, R: int) -> int:
        X = self.choice[(C, R)]
        S = self.arena.component(X, R)
        return self.good[(X, S)][1]

    def tree_size(self, root_cops: int) -> int | None:
        """Least node count of a one-edge-per-component tree rooted at ``root_cops``."""
        total = 1
        for R in self.arena.comps.get(root_cops, scc_masks(self.D, self.D.full & ~root_cops)):
            v = self.value.get((root_cops, R))
            if v is None:
                return None
            total += v
        return total

    def strategy_tree(self, root_cops: int | None = None) -> StrategyTree:
        D = self.D
        if root_cops is None:
            starts = self.start_positions()
            if len(starts) == 1 and starts[0][1] == D.full:
                root_cops = self.best_move(0, D.full)
            else:
                root_cops = 0
        cops, parent, robber, order = {}, {}, {}, []
        counter = itertools.count()

        def add(c, p, lab):
            t = f"s{next(counter)}"
            cops[t] = c
            parent[t] = p
            if p is not None:
                robber[t] = lab
            order.append(t)
            return t

        root = add(root_cops, None, None)
        stack = []
        for R in scc_masks(D, D.full & ~root_cops):
            if (root_cops, R) not in self.value:
                raise StrategyError("root position is not winning for the cops")
            stack.append((root, root_cops, R))
        stack.reverse()
        while stack:
            node, C, R = stack.pop()
            C2 = self.best_move(C, R)
            t = add(C2, node, R)
            S = self.arena.component(C & C2, R) if popcount(C & C2) <= self.k else None
            if S is None:
                S = _component_of(D, C & C2, R)
            kids = [R2 for R2 in self.arena.comps[C2] if R2 & ~S == 0]
            for R2 in reversed(kids):
                stack.append((t, C2, R2))
        return StrategyTree(D, root, parent, cops, robber, order)

    def escape_certificate(self) -> list[tuple[list[str], list[str]]]:
        D = self.D
        return [(D.names_of(C), D.names_of(R)) for C, R in self.losing_positions()]


def _component_of(D: Digraph, X: int, R: int) -> int:
    allowed = D.full & ~X
    v = R & -R
    return reach(D, v, allowed) & coreach(D, v, allowed)


def solve_arena(D: Digraph, k: int, mode: str = "free", budget: int | None = None,
                cap: int | None = DEFAULT_ARENA_CAP, forbid: Callable | None = None) -> GameSolution:
    """Solve the game with ``k`` cops; ``forbid(C)`` bars cop positions."""
    mode = _normalize_mode(mode)
    if k < 0:
        raise ValueError("k must be non-negative")
    k = min(k, D.n)
    A = _Arena(D, k, cap)
    n = D.n
    monotone = mode == "robber_monotone"
    value: dict = {}
    choice: dict = {}
    good: dict = {}
    pending: dict = {}
    heap: list = []
    pops = 0

    def allowed(C):
        return forbid is None or not forbid(C)

    # a single move onto X ∪ S captures the robber
    for X, comps in A.comps.items():
        for S in comps:
            C2 = X | S
            if popcount(C2) <= k and allowed(C2):
                heapq.heappush(heap, (1, 0, tuple(bits(C2)), X, S, C2))

    while heap:
        val, kind, _, a, b, c = heapq.heappop(heap)
        if kind == 0:
            X, S, C2 = a, b, c
            if (X, S) in good:
                continue
            good[(X, S)] = (val, C2)
            pops += 1
            if budget is not None and pops > budget:
                raise BudgetExceeded(f"game solver exceeded {budget} steps")
            if monotone:
                for C in _sets_upto(n, k, X, S):
                    if allowed(C) and (C, S) not in value:
                        heapq.heappush(heap, (val, 1, tuple(bits(X)), C, S, X))
            else:
                for C in _sets_upto(n, k, X):
                    if not allowed(C):
                        continue
                    for R in A.comps[C]:
                        if R & ~S == 0 and (C, R) not in value:
                            heapq.heappush(heap, (val, 1, tuple(bits(X)), C, R, X))
            continue
        C, R, X = a, b, c
        if (C, R) in value:
            continue
        value[(C, R)] = val
        choice[(C, R)] = X
        pops += 1
        if budget is not None and pops > budget:
            raise BudgetExceeded(f"game solver exceeded {budget} steps")
        lowR = lowest(R)
        seen_S = set()
        for Y in _submasks(C):
            S = A.comp_of[Y][lowR]
            if S in seen_S:
                continue
            seen_S.add(S)
            key = (C, S)
            ent = pending.get(key)
            if ent is None:
                ent = [sum(1 for R2 in A.comps[C] if R2 & ~S == 0), 0]
                pending[key] = ent
            ent[0] -= 1
            ent[1] += val
            if ent[0] == 0:
                cand = 1 + ent[1]
                lowS = lowest(S)
                for Y2 in _submasks(C):
                    if A.comp_of[Y2][lowS] == S and (Y2, S) not in good:
                        heapq.heappush(heap, (cand, 0, tuple(bits(C)), Y2, S, C))
    return GameSolution(D, k, mode, A, value, choice, good, forbid)


@dataclass
class SolveResult:
    winner: str                 # "cops" or "robber"
    k: int
    mode: str
    strategy: StrategyTree | None
    escape: list | None
    solution: GameSolution


def solve_game(D: Digraph, k: int, mode: str = "free", budget: int | None = None,
               cap: int | None = DEFAULT_ARENA_CAP) -> SolveResult:
    sol = solve_arena(D, k, mode, budget, cap)
    if sol.cops_win():
        return SolveResult("cops", k, sol.mode, sol.strategy_tree(), None, sol)
    return SolveResult("robber", k, sol.mode, None, sol.escape_certificate(), sol)


def cop_number(D: Digraph, mode: str = "free", budget: int | None = None,
               cap: int | None = DEFAULT_ARENA_CAP, lower: int = 0) -> int:
    """Least ``k`` for which the cops win."""
    if D.n == 0:
        return 0
    for k in range(lower, D.n + 1):
        if solve_arena(D, k, mode, budget, cap).cops_win():
            return k
    raise AssertionError("cops always win with every vertex occupied")


def audit_escape(sol: GameSolution) -> list[str]:
    """Check that every cop announcement from a losing position has a losing reply."""
    D, k = sol.D, sol.k
    monotone = sol.mode == "robber_monotone"
    losing = set(sol.losing_positions())
    problems = []
    for C, R in losing:
        for C2 in _sets_upto(D.n, k):
            if sol.forbid is not None and sol.forbid(C2):
                continue
            S = _component_of(D, C & C2, R)
            if monotone and S != R:
                continue
            replies = [R2 for R2 in scc_masks(D, D.full & ~C2) if R2 & ~S == 0]
            if not any((C2, R2) in losing for R2 in replies):
                problems.append(f"({D.names_of(C)}, {D.names_of(R)}) -> {D.names_of(C2)}")
                break
    return problems


# -- plays --------------------------------------------------------------------

@dataclass
class Play:
    cops: list[int]
    robber: list[int]
    spaces: list[int]
    captured: bool
    cop_monotone: bool
    robber_monotone: bool

    def transcript(self, D: Digraph) -> list[str]:
        out = []
        for i, (C, v) in enumerate(zip(self.cops, self.robber)):
            out.append(f"round {i}: cops {{{', '.join(D.names_of(C))}}}, robber {D.names[v]}")
        out.append("captured" if self.captured else "not captured")
        return out


def greedy_robber(D: Digraph, C: int, v: int, C2: int) -> int:
    """Move to the vertex whose new component is largest; stay put on ties."""
    S = _component_of(D, C & C2, 1 << v)
    best, best_size = v, -1
    for u in [v] + [i for i in bits(S) if i != v]:
        if C2 >> u & 1:
            continue
        size = popcount(_component_of(D, C2, 1 << u))
        if size > best_size:
            best, best_size = u, size
    if best_size < 0:
        return v
    return best


def stationary_robber(D: Digraph, C: int, v: int, C2: int) -> int:
    return v


def tree_cop_strategy(Ts: StrategyTree):
    """A cop move function that walks a strategy tree as the play unfolds."""
    D = Ts.host
    state = {"node": None}

    def move(C: int, v: int) -> int:
        t = state["node"]
        if t is None:
            state["node"] = Ts.root
            return Ts.cops[Ts.root]
        comp = _component_of(D, Ts.cops[t], 1 << v)
        for c in Ts.children[t]:
            if comp & ~Ts.robber[c] == 0:
                state["node"] = c
                return Ts.cops[c]
        raise StrategyError(f"cop strategy has no move for robber at {D.names[v]}")
    return move


def simulate_play(D: Digraph, cop_strategy, robber_strategy, start, max_rounds: int = 1000) -> Play:
    """Play from ``(∅, start)``; ``cop_strategy`` may be a StrategyTree or ``f(C, v) -> C'``."""
    if isinstance(cop_strategy, StrategyTree):
        cop_strategy = tree_cop_strategy(cop_strategy)
    v = D.idx(start)
    C = 0
    cops, robber, spaces = [0], [v], [D.full]
    captured = False
    for _ in range(max_rounds):
        C2 = cop_strategy(C, v)
        v2 = robber_strategy(D, C, v, C2)
        S = _component_of(D, C & C2, 1 << v)
        if not S >> v2 & 1:
            raise StrategyError(f"robber made an illegal move to {D.names[v2]}")
        C, v = C2, v2
        cops.append(C)
        robber.append(v)
        if C >> v & 1:
            captured = True
            spaces.append(0)
            break
        spaces.append(_component_of(D, C, 1 << v))
    cop_mono = True
    for i in range(len(cops)):
        for j in range(i + 1, len(cops)):
            for l in range(j + 1, len(cops)):
                if cops[i] & cops[l] & ~cops[j]:
                    cop_mono = False
    rob_mono = all(spaces[i + 1] & ~spaces[i] == 0 for i in range(len(spaces) - 1))
    return Play(cops, robber, spaces, captured, cop_mono, rob_mono)


def all_plays_captured(D: Digraph, Ts: StrategyTree, max_rounds: int | None = None) -> bool:
    """Adversarial check: every robber choice of component is eventually caught."""
    limit = max_rounds or len(Ts) + 1

    def go(t, inc_comps, depth):
        if depth > limit:
            return False
        C = Ts.cops[t]
        for C2 in inc_comps:
            child = [c for c in Ts.children[t] if C2 & ~Ts.robber[c] == 0]
            if not child:
                return False
            c = child[0]
            nxt = _reachable_components(D, C, [C2], Ts.cops[c])
            if not go(c, nxt, depth + 1):
                return False
        return True

    return go(Ts.root, scc_masks(D, D.full & ~Ts.cops[Ts.root]), 0)


# -- least robber-monotone strategy trees, merges allowed ----------------------

@dataclass
class TreeSizeResult:
    size: int | None            # None: no robber-monotone tree of this width exists
    tree: StrategyTree | None
    explored: int


def min_monotone_tree(D: Digraph, k: int, root_cops, budget: int | None = None,
                      cap: int | None = DEFAULT_ARENA_CAP) -> TreeSizeResult:
    """Least node count of a robber-monotone strategy tree of width ``k`` with the given root.

    An edge may carry several robber components at once, so this ranges over
    every strategy tree, not just those with one edge per component. States
    are pairs ``(C, W)``: a node with cops ``C`` that must cover the robber
    territory ``W``, a union of components of ``D - C``.

    ``F(C, W) = 1 + P(C, W)``, where ``P`` splits the components of ``W``
    into groups, one per outgoing edge. A group ``W1`` costs ``G(C, W1)``, the
    least ``F(C', W1 - C')`` over legal next positions ``C'``. Legality only
    depends on ``X = C ∩ C'``: each component in ``W1`` must stay a strong
    component of ``D - X``. ``H(X, W1)`` is the least ``F(C', W1 - C')`` over
    ``C' ⊇ X``. All four are solved together by a Dijkstra-style worklist.
    """
    n = D.n
    k = min(k, n)
    C_root = D.mask(root_cops) if not isinstance(root_cops, int) else root_cops
    if popcount(C_root) > k:
        raise ValueError("root cop set is larger than k")
    A = _Arena(D, k, cap)
    Fv, Hv, Gv, Pv = {}, {}, {}, {}
    Hbest, Gbest, Pbest = {}, {}, {}
    Gfin: dict[int, dict[int, int]] = {}
    Pfin: dict[int, dict[int, int]] = {}
    heap: list = []
    target = (C_root, D.full & ~C_root)
    explored = 0

    def comps_in(C, W):
        return [R for R in A.comps[C] if R & ~W == 0]

    def unions(parts):
        for r in range(1, len(parts) + 1):
            for combo in itertools.combinations(parts, r):
                m = 0
                for p in combo:
                    m |= p
                yield m

    # the next node can occupy the whole territory
    for X, comps in A.comps.items():
        room = k - popcount(X)
        small = [R for R in comps if popcount(R) <= room]
        for W in unions(small):
            if popcount(W) <= room:
                heapq.heappush(heap, (1, 0, X, W, X | W))

    if target[1] == 0:
        return TreeSizeResult(1, StrategyTree(D, "s0", {"s0": None}, {"s0": C_root}, {}), 0)

    while heap:
        val, kind, a, W, extra = heapq.heappop(heap)
        if kind == 0:                       # H(X, W), extra = C'
            X = a
            if (X, W) in Hv:
                continue
            Hv[(X, W)] = val
            Hbest[(X, W)] = extra
            for C in _sets_upto(n, k, X, W):
                if (C, W) not in Gv:
                    heapq.heappush(heap, (val, 1, C, W, X))
        elif kind == 1:                     # G(C, W), extra = X
            C = a
            if (C, W) in Gv:
                continue
            Gv[(C, W)] = val
            Gbest[(C, W)] = extra
            Gfin.setdefault(C, {})[W] = val
            pf = Pfin.setdefault(C, {0: 0})
            for W2, p in list(pf.items()):
                if W & W2:
                    continue
                U = W | W2
                if U & -U & W and (C, U) not in Pv:
                    heapq.heappush(heap, (val + p, 2, C, U, (W, W2)))
        elif kind == 2:                     # P(C, W), extra = (group, rest)
            C = a
            if (C, W) in Pv:
                continue
            Pv[(C, W)] = val
            Pbest[(C, W)] = extra
            Pfin.setdefault(C, {0: 0})[W] = val
            for W1, g in list(Gfin.get(C, {}).items()):
                if W1 & W:
                    continue
                U = W1 | W
                if U & -U & W1 and (C, U) not in Pv:
                    heapq.heappush(heap, (g + val, 2, C, U, (W1, W)))
            if (C, W) not in Fv:
                heapq.heappush(heap, (val + 1, 3, C, W, None))
        else:                               # F(C', W')
            C2, W2 = a, W
            if (C2, W2) in Fv:
                continue
            Fv[(C2, W2)] = val
            explored += 1
            if budget is not None and explored > budget:
                raise BudgetExceeded(f"tree-size search exceeded {budget} states")
            if (C2, W2) == target:
                break
            for X in _submasks(C2):
                arr = A.comp_of[X]
                Wmin = 0
                for v in bits(W2):
                    Wmin |= arr[v]
                if Wmin & ~C2 != W2:
                    continue
                spare = [K for K in A.comps[X] if K & ~C2 == 0 and not K & Wmin]
                for E in itertools.chain([0], unions(spare)):
                    key = (X, Wmin | E)
                    if key not in Hv:
                        heapq.heappush(heap, (val, 0, X, Wmin | E, C2))

    if target not in Fv:
        return TreeSizeResult(None, None, explored)

    # rebuild an optimal tree
    cops, parent, robber, order = {}, {}, {}, []
    counter = itertools.count()

    def add(c, p, lab):
        t = f"s{next(counter)}"
        cops[t] = c
        parent[t] = p
        if p is not None:
            robber[t] = lab
        order.append(t)
        return t

    root = add(C_root, None, None)
    stack = [(root, C_root, target[1])]
    while stack:
        t, C, W = stack.pop()
        groups = []
        while W:
            W1, W = Pbest[(C, W)]
            groups.append(W1)
        for W1 in groups:
            X = Gbest[(C, W1)]
            C2 = Hbest[(X, W1)]
            c = add(C2, t, W1)
            if W1 & ~C2:
                stack.append((c, C2, W1 & ~C2))
    tree = StrategyTree(D, root, parent, cops, robber, order)
    return TreeSizeResult(Fv[target], tree, explored)
