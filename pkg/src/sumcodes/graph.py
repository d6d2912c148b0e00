"""Cayley sum graphs CS(G, S): g ~ h iff g + h in S and g != h."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

from .abelian import (
    ElementLike,
    ElementSet,
    GroupSpec,
    Subgroup,
    is_square_free,
    stabilizer,
    subgroup_generated,
)

__all__ = [
    "CayleySumGraph", "ConnectivityEvidence", "make_graph", "neighbors",
    "is_regular", "is_connected_algebraic", "is_connected_bfs", "export_dot",
]


class CayleySumGraph:
    """Cayley sum graph of an abelian group.

    No adjacency matrix is stored. The neighbourhood of ``g`` is
    ``(S - g) \\ {g}``, kept as one bit-mask per vertex.
    """

    def __init__(self, group: GroupSpec, S: ElementSet):
        if S.group != group:
            raise ValueError("connection set belongs to a different group")
        if not S:
            raise ValueError("connection set must be nonempty")
        self.group = group
        self.S = S

    def __repr__(self):
        return f"CayleySumGraph({self.group}, {self.S.elements()})"

    def __eq__(self, other):
        return isinstance(other, CayleySumGraph) and (self.group, self.S) == (other.group, other.S)

    def __hash__(self):
        return hash((self.group, self.S))

    @property
    def order(self) -> int:
        return self.group.order

    @cached_property
    def square_free(self) -> bool:
        return is_square_free(self.S)

    @cached_property
    def stabilizer(self) -> Subgroup:
        return stabilizer(self.group, self.S)

    @cached_property
    def neighbor_masks(self) -> tuple[int, ...]:
        G = self.group
        s_idx = list(self.S)
        masks = []
        for g in range(G.order):
            m = 0
            for s in s_idx:
                m |= 1 << G.sub_index(s, g)
            masks.append(m & ~(1 << g))
        return tuple(masks)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(m.bit_count() for m in self.neighbor_masks)

    def neighbors(self, g: ElementLike) -> ElementSet:
        return ElementSet(self.group, self.neighbor_masks[self.group.encode(g)])

    def degree(self, g: ElementLike) -> int:
        return self.degrees[self.group.encode(g)]

    def edges(self) -> list[tuple[int, int]]:
        """Undirected edges as (smaller index, larger index), sorted."""
        out = []
        for u, m in enumerate(self.neighbor_masks):
            m >>= u + 1
            v = u + 1
            while m:
                if m & 1:
                    out.append((u, v))
                m >>= 1
                v += 1
        return out


def make_graph(G: GroupSpec, S: ElementSet) -> CayleySumGraph:
    return CayleySumGraph(G, S)


def neighbors(graph: CayleySumGraph, g: ElementLike) -> ElementSet:
    return graph.neighbors(g)


def is_regular(graph: CayleySumGraph) -> Optional[int]:
    """Common vertex degree, or None when degrees differ."""
    degs = set(graph.degrees)
    return degs.pop() if len(degs) == 1 else None


@dataclass(frozen=True)
class ConnectivityEvidence:
    connected: bool
    span: Subgroup
    difference_span: Subgroup
    index: int

    def __bool__(self):
        return self.connected


def is_connected_algebraic(graph: CayleySumGraph) -> ConnectivityEvidence:
    """Connected iff <S> = G and [G : <S - S>] <= 2."""
    G, S = graph.group, graph.S
    span = subgroup_generated(G, S)
    diff = subgroup_generated(G, S.minus(S))
    index = G.order // len(diff)
    return ConnectivityEvidence(len(span) == G.order and index <= 2, span, diff, index)


def is_connected_bfs(graph: CayleySumGraph) -> bool:
    masks = graph.neighbor_masks
    seen = 1
    queue = deque([0])
    while queue:
        u = queue.popleft()
        fresh = masks[u] & ~seen
        seen |= fresh
        while fresh:
            low = fresh & -fresh
            queue.append(low.bit_length() - 1)
            fresh ^= low
    return seen == graph.group.full_mask


def _label(g) -> str:
    return str(g[0]) if len(g) == 1 else "(" + ",".join(map(str, g)) + ")"


def export_dot(graph: CayleySumGraph, highlight: Optional[ElementSet] = None, name: str = "CS") -> str:
    G = graph.group
    if highlight is not None and highlight.group != G:
        raise ValueError("highlight set is not a subset of the graph's group")
    lines = [f"graph {name} {{"]
    lines.append(f'  label="CS({G}, {{{", ".join(_label(s) for s in graph.S.elements())}}})";')
    for i, g in enumerate(G.elements):
        attrs = f'label="{_label(g)}"'
        if highlight is not None and i in highlight:
            attrs += ', style=filled, fillcolor="orange"'
        lines.append(f"  {i} [{attrs}];")
    for u, v in graph.edges():
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
