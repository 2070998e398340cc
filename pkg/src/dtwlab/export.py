"""Graphviz DOT export for digraphs, decompositions and strategy trees."""

from __future__ import annotations

from .decomp import DirectedTreeDecomposition
from .digraph import Digraph
from .game import StrategyTree


def digraph_to_dot(D: Digraph, name: str = "D") -> str:
    """Digons are drawn as one undirected-looking edge, like the source drawings."""
    lines = [f"digraph {name} {{"]
    for v in D.names:
        lines.append(f'  "{v}";')
    for u, v in D.edge_names():
        if D.has_edge(v, u):
            if D.idx(u) < D.idx(v):
                lines.append(f'  "{u}" -> "{v}" [dir=both];')
        else:
            lines.append(f'  "{u}" -> "{v}";')
    lines.append("}")
    return "\n".join(lines)


def to_dot(obj) -> str:
    if isinstance(obj, Digraph):
        return digraph_to_dot(obj)
    if isinstance(obj, (DirectedTreeDecomposition, StrategyTree)):
        return obj.to_dot()
    raise TypeError(f"cannot export {type(obj).__name__} as DOT")
