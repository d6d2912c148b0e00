"""Total perfect codes of Cayley sum graphs.

A set C is a total perfect code (TPC) when every vertex has exactly one
neighbour in C. Enumeration is an exact-cover search: one column per vertex,
one row per candidate code element ``c`` covering the columns ``N(c)``.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional

from sympy import divisors

from .abelian import ElementSet, GroupSpec, Subgroup, enumerate_subgroups, is_square_free, stabilizer
from .graph import CayleySumGraph

__all__ = [
    "TPCCheck", "SearchLimits", "SearchResult", "EnumerationBoundError",
    "is_total_perfect_code", "enumerate_total_perfect_codes", "subgroup_total_perfect_codes",
    "translates_of_code", "partition_check", "canonical_code_cyclic",
    "theorem34_code_family", "distinct_mod", "max_enumeration_order", "code_key",
]

DEFAULT_MAX_ORDER = 40
SUBGROUP_SEARCH_MAX_ORDER = 256


class EnumerationBoundError(ValueError):
    pass


def max_enumeration_order() -> int:
    env = os.environ.get("TPC_MAX_ORDER")
    if env:
        try:
            value = int(env)
        except ValueError:
            raise ValueError(f"TPC_MAX_ORDER must be an integer, got {env!r}") from None
        if value < 1:
            raise ValueError(f"TPC_MAX_ORDER must be positive, got {value}")
        return value
    return DEFAULT_MAX_ORDER


def code_key(C: ElementSet) -> list[int]:
    """Canonical sort key: the sorted member indices."""
    return C.indices


@dataclass(frozen=True)
class TPCCheck:
    ok: bool
    vertex: Optional[int] = None  # first violating vertex (index)
    count: Optional[int] = None  # its number of neighbours in C

    def __bool__(self):
        return self.ok


def is_total_perfect_code(graph: CayleySumGraph, C: ElementSet) -> TPCCheck:
    if C.group != graph.group:
        raise ValueError("code is not a subset of the graph's group")
    c = C.bits
    for g, mask in enumerate(graph.neighbor_masks):
        k = (mask & c).bit_count()
        if k != 1:
            return TPCCheck(False, g, k)
    return TPCCheck(True)


@dataclass(frozen=True)
class SearchLimits:
    max_solutions: Optional[int] = None
    node_budget: Optional[int] = None
    code_size: Optional[int] = None

    def __post_init__(self):
        for name in ("max_solutions", "node_budget", "code_size"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise ValueError(f"{name} must be positive, got {v}")


@dataclass
class SearchResult:
    codes: list[ElementSet]
    complete: bool
    nodes: int = 0

    def __len__(self):
        return len(self.codes)

    def __iter__(self):
        return iter(self.codes)


class _BudgetExhausted(Exception):
    pass


class _Search:
    def __init__(self, masks: tuple[int, ...], limits: SearchLimits):
        self.masks = masks
        self.limits = limits
        self.nodes = 0
        self.solutions: list[int] = []

    def run(self, uncovered: int, alive: int, chosen: int, depth: int, roots: Optional[list[int]] = None):
        self.nodes += 1
        if self.limits.node_budget is not None and self.nodes > self.limits.node_budget:
            raise _BudgetExhausted
        if not uncovered:
            self.solutions.append(chosen)
            if self.limits.max_solutions is not None and len(self.solutions) >= self.limits.max_solutions:
                raise _BudgetExhausted
            return
        if self.limits.code_size is not None and depth >= self.limits.code_size:
            return
        masks = self.masks
        # fail-first: the column with the fewest live candidate rows, lowest index on ties
        best_rows, best_n = 0, 1 << 30
        rest = uncovered
        while rest:
            low = rest & -rest
            col = low.bit_length() - 1
            rows = masks[col] & alive
            n = rows.bit_count()
            if n < best_n:
                best_rows, best_n = rows, n
                if n == 0:
                    return
            rest ^= low
        rows = best_rows
        if roots is not None:
            rows &= sum(1 << r for r in roots)
        while rows:
            low = rows & -rows
            r = low.bit_length() - 1
            rows ^= low
            cover = masks[r]
            # rows sharing a column with ``cover`` are the neighbours of its columns
            clash = 0
            rest = cover
            while rest:
                lc = rest & -rest
                clash |= masks[lc.bit_length() - 1]
                rest ^= lc
            self.run(uncovered & ~cover, alive & ~clash, chosen | low, depth + 1)


def _root_rows(graph: CayleySumGraph) -> list[int]:
    """Candidate rows of the first branching column, in search order."""
    masks = graph.neighbor_masks
    alive = sum(1 << c for c, m in enumerate(masks) if m)
    best = min(range(graph.order), key=lambda col: ((masks[col] & alive).bit_count(), col))
    rows = masks[best] & alive
    return [r for r in range(graph.order) if rows >> r & 1]


def _search(graph: CayleySumGraph, limits: SearchLimits, roots: Optional[list[int]] = None):
    masks = graph.neighbor_masks
    full = graph.group.full_mask
    alive = sum(1 << c for c, m in enumerate(masks) if m)
    s = _Search(masks, limits)
    complete = True
    try:
        s.run(full, alive, 0, 0, roots)
    except _BudgetExhausted:
        complete = False
    return s.solutions, complete, s.nodes


def _search_branch(args):
    graph, limits, root = args
    return _search(graph, limits, [root])


def enumerate_total_perfect_codes(
    graph: CayleySumGraph,
    limits: Optional[SearchLimits] = None,
    *,
    jobs: int = 1,
    max_order: Optional[int] = None,
) -> SearchResult:
    """All total perfect codes, sorted canonically.

    With ``jobs > 1`` the root branches are searched in separate processes
    and merged in branch order, giving the same output as a serial run.
    Parallel runs do not accept a node budget.
    """
    limits = limits or SearchLimits()
    bound = max_order if max_order is not None else max_enumeration_order()
    if graph.order > bound:
        raise EnumerationBoundError(
            f"group order {graph.order} exceeds the enumeration bound {bound} (set TPC_MAX_ORDER)"
        )
    if jobs > 1:
        if limits.node_budget is not None:
            raise ValueError("node budgets are only supported for serial search")
        roots = _root_rows(graph)
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_search_branch, [(graph, limits, r) for r in roots]))
        covers, nodes, complete = [], 1, True
        for sols, done, n in parts:
            covers.extend(sols)
            nodes += n
            complete = complete and done
        if limits.max_solutions is not None and len(covers) >= limits.max_solutions:
            covers = covers[: limits.max_solutions]
            complete = False
    else:
        covers, complete, nodes = _search(graph, limits)
    # an isolated vertex has no neighbour in any C, so such graphs yield nothing
    result = sorted((ElementSet(graph.group, c) for c in covers), key=code_key)
    return SearchResult(result, complete, nodes)


def _cyclic_subgroup(G: GroupSpec, order: int) -> Subgroup:
    step = G.order // order
    return Subgroup._unchecked(G, sum(1 << (step * i) for i in range(order)))


def subgroup_total_perfect_codes(graph: CayleySumGraph) -> list[Subgroup]:
    G = graph.group
    if G.rank == 1:
        candidates = [_cyclic_subgroup(G, d) for d in divisors(G.order)]
    else:
        if G.order > SUBGROUP_SEARCH_MAX_ORDER:
            raise EnumerationBoundError(
                f"group order {G.order} exceeds the subgroup search bound {SUBGROUP_SEARCH_MAX_ORDER}"
            )
        candidates = enumerate_subgroups(G)
    found = [H for H in candidates if is_total_perfect_code(graph, H)]
    return sorted(found, key=lambda H: (len(H), code_key(H)))


def _require_code(graph: CayleySumGraph, C: ElementSet):
    if not graph.square_free:
        raise ValueError("connection set is not square-free")
    check = is_total_perfect_code(graph, C)
    if not check:
        raise ValueError(
            f"not a total perfect code: vertex {graph.group.decode(check.vertex)} has {check.count} neighbours in C"
        )


def translates_of_code(graph: CayleySumGraph, C: ElementSet) -> list[ElementSet]:
    """The sets -C + s for s in S; each one is again a total perfect code."""
    _require_code(graph, C)
    G = graph.group
    negC = C.negate()
    out = []
    for s in graph.S:
        T = negC.translate(G.decode(s))
        if not is_total_perfect_code(graph, T):
            raise AssertionError(f"translate -C + {G.decode(s)} is not a total perfect code")
        out.append(T)
    return out


def partition_check(graph: CayleySumGraph, C: ElementSet) -> bool:
    """True iff {-C + s : s in S} partitions G."""
    _require_code(graph, C)
    G = graph.group
    negC = C.negate()
    seen = 0
    for s in graph.S:
        t = negC.translate(G.decode(s)).bits
        if seen & t:
            return False
        seen |= t
    return seen == G.full_mask


def distinct_mod(values: Iterable[int], k: int) -> bool:
    """True iff the integers are pairwise distinct modulo k."""
    if k < 1:
        raise ValueError(f"modulus must be >= 1, got {k}")
    residues = [v % k for v in values]
    return len(set(residues)) == len(residues)


def _cyclic_values(S: ElementSet) -> list[int]:
    if S.group.rank != 1:
        raise ValueError("expected a subset of a cyclic group Z_n")
    return S.indices


def canonical_code_cyclic(n: int, S: ElementSet) -> Optional[ElementSet]:
    """k Z_n for k = |S| when S is pairwise distinct mod k, else None."""
    G = S.group
    if G.moduli != (n,):
        raise ValueError(f"connection set is not a subset of Z_{n}")
    k = len(S)
    if k == 0 or n % k:
        raise ValueError(f"|S| = {k} does not divide n = {n}")
    if not distinct_mod(_cyclic_values(S), k):
        return None
    return ElementSet.from_indices(G, range(0, n, k))


def theorem34_code_family(n: int, S: ElementSet) -> list[ElementSet]:
    """Sets {h1 + i, h2 + i + k} with h1, h2 in H = stab(S), k = |S|/|H|, 0 <= i < k.

    Requires n >= 4, S square-free and n = 2|S|.
    """
    G = S.group
    if G.moduli != (n,):
        raise ValueError(f"connection set is not a subset of Z_{n}")
    if n < 4:
        raise ValueError(f"hypothesis failed: n = {n} < 4")
    if not S:
        raise ValueError("hypothesis failed: S is empty")
    if not is_square_free(S):
        raise ValueError("hypothesis failed: S is not square-free")
    if n != 2 * len(S):
        raise ValueError(f"hypothesis failed: n = {n} is not 2|S| = {2 * len(S)}")
    H = stabilizer(G, S)
    k = len(S) // len(H)
    family = set()
    for i in range(k):
        for h1 in H:
            for h2 in H:
                family.add((1 << (h1 + i) % n) | (1 << (h2 + i + k) % n))
    return sorted((ElementSet(G, b) for b in family), key=code_key)
