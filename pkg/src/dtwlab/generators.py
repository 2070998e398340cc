"""Small digraph families, random instances and isomorphism-free enumeration."""

from __future__ import annotations

import itertools
import random

from .digraph import Digraph, build_digraph


def directed_cycle(n: int) -> Digraph:
    names = [str(i) for i in range(1, n + 1)]
    return build_digraph(names, [(names[i], names[(i + 1) % n]) for i in range(n)])


def directed_path(n: int) -> Digraph:
    names = [str(i) for i in range(1, n + 1)]
    return build_digraph(names, [(names[i], names[i + 1]) for i in range(n - 1)])


def bidirected_clique(n: int) -> Digraph:
    names = [str(i) for i in range(1, n + 1)]
    return build_digraph(names, [(a, b) for a in names for b in names if a != b])


def random_digraph(n: int, p: float, rng: random.Random) -> Digraph:
    names = [str(i) for i in range(n)]
    edges = [(a, b) for a in names for b in names if a != b and rng.random() < p]
    return build_digraph(names, edges)


def random_dag(n: int, p: float, rng: random.Random) -> Digraph:
    names = [str(i) for i in range(n)]
    edges = [(names[i], names[j]) for i in range(n) for j in range(i + 1, n)
             if rng.random() < p]
    return build_digraph(names, edges)


def adjacency_code(n: int, edges, perm) -> int:
    """Edge set relabelled by ``perm`` packed into an integer."""
    code = 0
    for u, v in edges:
        code |= 1 << (perm[u] * n + perm[v])
    return code


def canonical_code(D: Digraph) -> tuple[int, int]:
    """Isomorphism-invariant code: least relabelled adjacency over all orders.

    Exponential in ``n``; intended for ``n <= 7``.
    """
    n = D.n
    best = None
    for perm in itertools.permutations(range(n)):
        code = adjacency_code(n, D.edges, perm)
        if best is None or code < best:
            best = code
    return n, (best or 0)


def nonisomorphic_digraphs(n: int):
    """Yield one representative per isomorphism class of simple digraphs on n vertices."""
    names = [str(i) for i in range(n)]
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    perms = list(itertools.permutations(range(n)))
    seen = set()
    for code in range(1 << len(pairs)):
        edges = [pairs[k] for k in range(len(pairs)) if code >> k & 1]
        canon = min(adjacency_code(n, edges, p) for p in perms)
        if canon in seen:
            continue
        seen.add(canon)
        yield Digraph(names, edges)


def sample_nonisomorphic(n: int, count: int, rng: random.Random, p: float = 0.5):
    """``count`` pairwise non-isomorphic random digraphs on n vertices."""
    out = []
    seen = set()
    attempts = 0
    while len(out) < count and attempts < 100 * count:
        attempts += 1
        D = random_digraph(n, p, rng)
        key = canonical_code(D)
        if key in seen:
            continue
        seen.add(key)
        out.append(D)
    return out
