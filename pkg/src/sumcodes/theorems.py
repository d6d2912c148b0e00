"""Existence theorems for total perfect codes, checked against exhaustive search.

Each :class:`TheoremCase` pairs a hypothesis predicate with a modular
condition. For an instance meeting the hypotheses, :func:`check_case` compares
the condition with the search oracle; :func:`scan` runs that over a finite
parameter space and collects the inconsistent instances.
"""

from __future__ import annotations

import itertools
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import cached_property
from math import gcd, prod
from typing import Callable, Iterable, Iterator, Optional, Sequence

from sympy import divisors, factorint, isprime

from .abelian import (
    ElementSet,
    GroupSpec,
    is_good_abelian_order,
    quotient_reduce,
    squares,
)
from .codes import (
    SearchLimits,
    code_key,
    distinct_mod,
    enumerate_total_perfect_codes,
    is_total_perfect_code,
    subgroup_total_perfect_codes,
    theorem34_code_family,
)
from .graph import CayleySumGraph, is_connected_algebraic, is_regular

__all__ = [
    "CASE_IDS", "CASES", "TheoremCase", "Verdict", "CounterexampleReport", "ScanSpace",
    "HypothesisError", "Instance", "distinct_mod", "coordinate_distinct_mod",
    "product_sufficient_condition", "factor_shapes", "applicable_cases", "check_case",
    "scan", "default_space", "case_instances",
]


class HypothesisError(ValueError):
    pass


# -- modular conditions ------------------------------------------------------


def coordinate_distinct_mod(S: ElementSet, t: int, m: int) -> bool:
    """True iff the t-th coordinates (1-based) of S are pairwise distinct mod m."""
    if not 1 <= t <= S.group.rank:
        raise ValueError(f"coordinate {t} out of range 1..{S.group.rank}")
    if m < 1:
        raise ValueError(f"modulus must be >= 1, got {m}")
    return distinct_mod((g[t - 1] for g in S.elements()), m)


def factor_shapes(G: GroupSpec, size: int) -> list[tuple[int, ...]]:
    """All (m_1, ..., m_d) with m_i | n_i and m_1 ... m_d = size."""
    choices = [[m for m in divisors(n) if size % m == 0] for n in G.moduli]
    return [shape for shape in itertools.product(*choices) if prod(shape) == size]


def product_sufficient_condition(S: ElementSet, factors: Sequence[int]) -> bool:
    """Every pair of distinct elements differs mod m_j in some coordinate j."""
    G = S.group
    factors = tuple(factors)
    if len(factors) != G.rank:
        raise ValueError(f"need {G.rank} factors, got {len(factors)}")
    for m, n in zip(factors, G.moduli):
        if m < 1 or n % m:
            raise ValueError(f"factor {m} does not divide modulus {n}")
    if prod(factors) != len(S):
        raise ValueError(f"factors multiply to {prod(factors)}, |S| = {len(S)}")
    reduced = [tuple(a % m for a, m in zip(g, factors)) for g in S.elements()]
    return len(set(reduced)) == len(reduced)


def _prime_power(k: int) -> Optional[tuple[int, int]]:
    f = factorint(k)
    if len(f) != 1:
        return None
    (p, l), = f.items()
    return p, l


def _distinct_prime_pair(k: int) -> bool:
    f = factorint(k)
    return len(f) == 2 and all(e == 1 for e in f.values())


# -- instances -----------------------------------------------------------------


class Instance:
    """A (G, S) pair with lazily computed facts shared by all cases."""

    def __init__(self, G: GroupSpec, S: ElementSet):
        self.G = G
        self.S = S
        self.graph = CayleySumGraph(G, S)

    @property
    def n(self) -> int:
        return self.G.order

    @property
    def k(self) -> int:
        return len(self.S)

    @cached_property
    def connectivity(self):
        return is_connected_algebraic(self.graph)

    @property
    def connected(self) -> bool:
        return self.connectivity.connected

    @cached_property
    def degree(self) -> Optional[int]:
        return is_regular(self.graph)

    @property
    def square_free(self) -> bool:
        return self.graph.square_free

    @property
    def stabilizer(self):
        return self.graph.stabilizer

    @property
    def periodic(self) -> bool:
        return len(self.stabilizer) > 1

    @property
    def values(self) -> list[int]:
        return self.S.indices


Predicate = tuple[str, Callable[[Instance], bool]]


@dataclass(frozen=True)
class TheoremCase:
    identifier: str
    statement: str
    direction: str  # "iff" or "sufficient"
    domain: str  # "cyclic" or "product"
    size_ok: Callable[[GroupSpec, int], bool] = field(repr=False)
    hypotheses: tuple[Predicate, ...] = field(repr=False)
    condition: Callable[[Instance], bool] = field(repr=False)
    oracle: str = "any"  # "any" or "subgroup"

    def failed_hypothesis(self, inst: Instance) -> Optional[str]:
        if (self.domain == "cyclic") != (inst.G.rank == 1):
            return f"domain: {self.domain} group required"
        if not self.size_ok(inst.G, inst.k):
            return "size: |S| does not fit the case"
        for name, pred in self.hypotheses:
            if not pred(inst):
                return name
        return None


_CONNECTED: Predicate = ("connected", lambda I: I.connected)
_DEGREE_K: Predicate = ("regular of degree |S|", lambda I: I.degree == I.k)
_SQUARE_FREE: Predicate = ("square-free", lambda I: I.square_free)


def _divides(G: GroupSpec, k: int) -> bool:
    return G.order % k == 0


def _coprime_cofactor(G: GroupSpec, k: int) -> bool:
    return G.order % k == 0 and gcd(k, G.order // k) == 1


def _exact_prime_power(G: GroupSpec, k: int) -> bool:
    pl = _prime_power(k)
    return pl is not None and G.order % k == 0 and G.order % (k * pl[0]) != 0


def _single_modulus(G: GroupSpec, p: int) -> Optional[int]:
    """The 1-based coordinate t with p | n_t, when exactly one exists."""
    hits = [t for t, n in enumerate(G.moduli, 1) if n % p == 0]
    return hits[0] if len(hits) == 1 else None


def _cond_distinct_k(I: Instance) -> bool:
    return distinct_mod(I.values, I.k)


def _sh_half_prime(I: Instance) -> int:
    return I.n // I.k


def _cond_sh_half(I: Instance) -> bool:
    if _sh_half_prime(I) != 2:
        return False
    H = I.stabilizer
    k = I.k // len(H)
    reps = quotient_reduce(I.G, H, I.S).labels
    return distinct_mod(reps, k)


def _cond_prod_suff(I: Instance) -> bool:
    return any(product_sufficient_condition(I.S, shape) for shape in factor_shapes(I.G, I.k))


def _cond_coordinate(I: Instance) -> bool:
    p = _prime_power(I.k)[0]
    t = _single_modulus(I.G, p)
    return coordinate_distinct_mod(I.S, t, I.k)


def _n_is_pqr_or_pqrs(G: GroupSpec) -> bool:
    f = factorint(G.order)
    return len(f) in (3, 4) and all(e == 1 for e in f.values())


CASES: dict[str, TheoremCase] = {}


def _register(case: TheoremCase):
    CASES[case.identifier] = case


_register(TheoremCase(
    "T-SUBGROUP-KN",
    "connected CS(Z_n,S) of degree k=|S|, n>=4, k|n: subgroup TPC iff S distinct mod k",
    "iff", "cyclic",
    size_ok=lambda G, k: G.order >= 4 and _divides(G, k),
    hypotheses=(_DEGREE_K, _CONNECTED),
    condition=_cond_distinct_k,
    oracle="subgroup",
))
_register(TheoremCase(
    "T-SH-HALF",
    "connected CS(Z_n,S), S square-free, n>=4, n=p|S|: TPC iff p=2 and S/H distinct mod |S|/|H|",
    "iff", "cyclic",
    size_ok=lambda G, k: G.order >= 4 and _divides(G, k) and isprime(G.order // k),
    hypotheses=(_SQUARE_FREE, _CONNECTED),
    condition=_cond_sh_half,
))
_register(TheoremCase(
    "T-DEG-P",
    "connected CS(Z_n,S) of odd prime degree p, p|n: TPC iff S distinct mod p",
    "iff", "cyclic",
    size_ok=lambda G, k: k > 2 and isprime(k) and _divides(G, k),
    hypotheses=(_DEGREE_K, _CONNECTED),
    condition=_cond_distinct_k,
))
_register(TheoremCase(
    "T-DEG-PL",
    "connected CS(Z_n,S) of degree p^l, p^l || n: TPC iff S distinct mod p^l",
    "iff", "cyclic",
    size_ok=_exact_prime_power,
    hypotheses=(_DEGREE_K, _CONNECTED),
    condition=_cond_distinct_k,
))
_register(TheoremCase(
    "T-PQ-PERIODIC",
    "n>=6, |S|=pq, (pq, n/pq)=1, S square-free periodic, connected: TPC iff S distinct mod pq",
    "iff", "cyclic",
    size_ok=lambda G, k: G.order >= 6 and _distinct_prime_pair(k) and _coprime_cofactor(G, k),
    hypotheses=(_SQUARE_FREE, ("periodic", lambda I: I.periodic), _CONNECTED),
    condition=_cond_distinct_k,
))
_register(TheoremCase(
    "L-PQ-APERIODIC",
    "n in {pqr, pqrs}, |S|=pq, (pq, n/pq)=1, S square-free aperiodic, connected: TPC iff S distinct mod pq",
    "iff", "cyclic",
    size_ok=lambda G, k: _n_is_pqr_or_pqrs(G) and _distinct_prime_pair(k) and _coprime_cofactor(G, k),
    hypotheses=(_SQUARE_FREE, ("aperiodic", lambda I: not I.periodic), _CONNECTED),
    condition=_cond_distinct_k,
))
_register(TheoremCase(
    "T-GOODN",
    "n in N, S square-free, |S| | n, (|S|, n/|S|)=1, connected: TPC iff S distinct mod |S|",
    "iff", "cyclic",
    size_ok=lambda G, k: is_good_abelian_order(G.order)[0] and _coprime_cofactor(G, k),
    hypotheses=(_SQUARE_FREE, _CONNECTED),
    condition=_cond_distinct_k,
))
_register(TheoremCase(
    "L-PROD-SUFF",
    "product G, |S|=m_1...m_d with m_i|n_i, connected: some shape separating S implies a TPC",
    "sufficient", "product",
    size_ok=lambda G, k: bool(factor_shapes(G, k)),
    hypotheses=(_DEGREE_K, _CONNECTED),
    condition=_cond_prod_suff,
))
_register(TheoremCase(
    "T-PROD-P",
    "product G, |S|=p odd prime dividing exactly one n_t, connected: TPC iff t-th coordinates distinct mod p",
    "iff", "product",
    size_ok=lambda G, k: k > 2 and isprime(k) and _single_modulus(G, k) is not None,
    hypotheses=(_DEGREE_K, _CONNECTED),
    condition=_cond_coordinate,
))
_register(TheoremCase(
    "T-PROD-PL",
    "product G, |S|=p^l, p^l || |G|, p divides exactly one n_t, connected: TPC iff t-th coordinates distinct mod p^l",
    "iff", "product",
    size_ok=lambda G, k: _exact_prime_power(G, k) and _single_modulus(G, _prime_power(k)[0]) is not None,
    hypotheses=(_DEGREE_K, _CONNECTED),
    condition=_cond_coordinate,
))

CASE_IDS: tuple[str, ...] = tuple(CASES)


def _case(case) -> TheoremCase:
    if isinstance(case, TheoremCase):
        return case
    try:
        return CASES[case]
    except KeyError:
        raise ValueError(f"unknown case id {case!r}; known: {', '.join(CASE_IDS)}") from None


def applicable_cases(G: GroupSpec, S: ElementSet) -> list[TheoremCase]:
    inst = Instance(G, S)
    return [c for c in CASES.values() if c.failed_hypothesis(inst) is None]


# -- verdicts ------------------------------------------------------------------


@dataclass
class Verdict:
    case: str
    moduli: tuple[int, ...]
    S: list[tuple[int, ...]]
    hypotheses_met: bool
    condition_holds: bool
    tpc_exists: bool
    consistent: bool
    complete: bool = True
    codes_found: Optional[int] = None
    witness: Optional[list[tuple[int, ...]]] = None
    family_match: Optional[bool] = None
    transport_ok: Optional[bool] = None

    def describe(self) -> str:
        G = " x ".join(f"Z{m}" for m in self.moduli)
        S = "{" + ", ".join(_fmt(g) for g in self.S) + "}"
        parts = [
            f"case={self.case}",
            f"G={G}",
            f"S={S}",
            f"condition={_yn(self.condition_holds)}",
            f"tpc={_yn(self.tpc_exists)}",
            f"consistent={_yn(self.consistent)}",
        ]
        if self.witness is not None:
            parts.append("witness={" + ", ".join(_fmt(g) for g in self.witness) + "}")
        if self.family_match is not None:
            parts.append(f"family_match={_yn(self.family_match)}")
        if self.transport_ok is not None:
            parts.append(f"transport={_yn(self.transport_ok)}")
        if not self.complete:
            parts.append("complete=no")
        return " ".join(parts)


def _fmt(g) -> str:
    return str(g[0]) if len(g) == 1 else "(" + ",".join(map(str, g)) + ")"


def _yn(b: bool) -> str:
    return "yes" if b else "no"


def _transport_check(inst: Instance, codes: list[ElementSet], limits: SearchLimits) -> Optional[bool]:
    """Push codes through Z_n/H ~ Z_l and pull the reduced codes back, H = stab(S)."""
    H = inst.stabilizer
    if inst.G.rank != 1 or len(H) == 1:
        return None
    red = quotient_reduce(inst.G, H, inst.S)
    if red.reduced_group is None:
        return None
    Gl, T = red.reduced_group, red.reduced_set
    l = Gl.order
    reduced_graph = CayleySumGraph(Gl, T)
    for C in codes:
        image = ElementSet.from_indices(Gl, (c % l for c in C))
        if len(image) != len(C) or not is_total_perfect_code(reduced_graph, image):
            return False
    reduced = enumerate_total_perfect_codes(reduced_graph, limits)
    for D in reduced.codes:
        if not is_total_perfect_code(inst.graph, ElementSet.from_indices(inst.G, D)):
            return False
    if not reduced.codes:
        return not codes
    size = len(reduced.codes[0])
    return len(codes) == len(reduced.codes) * len(H) ** size


def check_case(case, G: GroupSpec, S: ElementSet, limits: Optional[SearchLimits] = None,
               *, instance: Optional[Instance] = None) -> Verdict:
    case = _case(case)
    limits = limits or SearchLimits()
    inst = instance or Instance(G, S)
    failed = case.failed_hypothesis(inst)
    if failed is not None:
        raise HypothesisError(f"{case.identifier}: hypothesis failed: {failed}")
    condition = case.condition(inst)
    complete = True
    family_match = transport = None
    witness = None
    if case.oracle == "subgroup":
        found = subgroup_total_perfect_codes(inst.graph)
        n_codes = len(found)
        if found:
            witness = found[0].elements()
    else:
        full = case.identifier == "T-SH-HALF" or (G.rank == 1 and inst.periodic)
        run_limits = limits if full else SearchLimits(1, limits.node_budget, limits.code_size)
        result = enumerate_total_perfect_codes(inst.graph, run_limits)
        found = result.codes
        n_codes = len(found) if full else None
        # stopping at the first code still decides existence
        complete = result.complete or (not full and bool(found))
        if found:
            witness = found[0].elements()
        if full and complete:
            transport = _transport_check(inst, found, limits)
        if case.identifier == "T-SH-HALF" and found:
            family = theorem34_code_family(G.order, S)
            family_match = [code_key(c) for c in family] == [code_key(c) for c in found]
    exists = bool(found)
    if case.direction == "iff":
        consistent = condition == exists
    else:
        consistent = (not condition) or exists
    consistent = consistent and family_match is not False and transport is not False
    return Verdict(
        case.identifier, G.moduli, S.elements(), True, condition, exists,
        consistent if complete else True, complete, n_codes, witness, family_match, transport,
    )


# -- scanning ------------------------------------------------------------------


@dataclass(frozen=True)
class ScanSpace:
    """Instances to scan: cyclic orders ``n_values``, product orders up to ``max_product_order``."""

    n_values: tuple[int, ...] = ()
    max_product_order: int = 0
    degrees: Optional[tuple[int, ...]] = None
    max_degree: int = 6

    def describe(self) -> str:
        parts = []
        if self.n_values:
            parts.append(f"n in {_ranges(self.n_values)}")
        if self.max_product_order:
            parts.append(f"products |G| <= {self.max_product_order}")
        if self.degrees is not None:
            parts.append(f"|S| in {{{', '.join(map(str, self.degrees))}}}")
        parts.append(f"|S| <= {self.max_degree}")
        return ", ".join(parts)


def _ranges(values: Sequence[int]) -> str:
    values = sorted(values)
    if values == list(range(values[0], values[-1] + 1)) and len(values) > 2:
        return f"[{values[0]}, {values[-1]}]"
    return "{" + ", ".join(map(str, values)) + "}"


_DEFAULT_SPACES = {
    "T-SUBGROUP-KN": ScanSpace(tuple(range(4, 25))),
    "T-SH-HALF": ScanSpace(tuple(range(4, 25))),
    "T-DEG-P": ScanSpace(tuple(range(2, 25)), degrees=(3, 5)),
    "T-DEG-PL": ScanSpace(tuple(range(2, 25)), degrees=(4,)),
    "T-PQ-PERIODIC": ScanSpace((30,), degrees=(6,)),
    "L-PQ-APERIODIC": ScanSpace((30,), degrees=(6,)),
    "T-GOODN": ScanSpace((12, 30)),
    "L-PROD-SUFF": ScanSpace(max_product_order=16),
    "T-PROD-P": ScanSpace(max_product_order=36),
    "T-PROD-PL": ScanSpace(max_product_order=36),
}


def default_space(case_id: str) -> ScanSpace:
    _case(case_id)
    return _DEFAULT_SPACES[case_id]


def product_moduli(max_order: int) -> list[tuple[int, ...]]:
    """Non-decreasing moduli tuples of length >= 2 with product <= max_order."""
    out = []

    def grow(prefix: tuple[int, ...], size: int):
        if len(prefix) >= 2:
            out.append(prefix)
        lo = prefix[-1] if prefix else 2
        for m in range(lo, max_order // size + 1):
            grow(prefix + (m,), size * m)

    grow((), 1)
    return sorted(out, key=lambda t: (prod(t), t))


def _groups(case: TheoremCase, space: ScanSpace) -> list[GroupSpec]:
    if case.domain == "cyclic":
        return [GroupSpec((n,)) for n in sorted(set(space.n_values)) if n >= 2]
    return [GroupSpec(m) for m in product_moduli(space.max_product_order)]


def case_instances(case, space: ScanSpace) -> Iterator[tuple[GroupSpec, ElementSet]]:
    """Square-free candidate sets of every group in the space, in bit-vector order.

    Every case requires S square-free (directly or through regularity of
    degree |S|), so only subsets of the non-squares are generated.
    """
    case = _case(case)
    for G in _groups(case, space):
        sizes = [
            k for k in range(1, min(space.max_degree, G.order) + 1)
            if (space.degrees is None or k in space.degrees) and case.size_ok(G, k)
        ]
        if not sizes:
            continue
        pool = list(ElementSet.whole(G) - squares(G))
        masks = []
        for k in sizes:
            for combo in itertools.combinations(pool, k):
                masks.append(sum(1 << i for i in combo))
        for bits in sorted(masks):
            yield G, ElementSet(G, bits)


def _run_one(args) -> Optional[Verdict]:
    case_id, moduli, bits, limits = args
    G = GroupSpec(moduli)
    inst = Instance(G, ElementSet(G, bits))
    case = CASES[case_id]
    if case.failed_hypothesis(inst) is not None:
        return None
    return check_case(case, G, inst.S, limits, instance=inst)


@dataclass
class CaseSummary:
    case: str
    space: str
    candidates: int = 0
    checked: int = 0
    condition_true: int = 0
    tpc_exists: int = 0
    inconsistent: int = 0
    incomplete: int = 0


@dataclass
class CounterexampleReport:
    summaries: list[CaseSummary]
    counterexamples: list[Verdict]
    complete: bool = True

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def to_text(self) -> str:
        lines = []
        for s in self.summaries:
            lines.append(f"case: {s.case}")
            lines.append(f"  space: {s.space}")
            lines.append(f"  candidates: {s.candidates}")
            lines.append(f"  hypotheses met: {s.checked}")
            lines.append(f"  condition true: {s.condition_true}")
            lines.append(f"  tpc exists: {s.tpc_exists}")
            lines.append(f"  inconsistent: {s.inconsistent}")
            if s.incomplete:
                lines.append(f"  incomplete: {s.incomplete}")
        for v in self.counterexamples:
            lines.append(f"counterexample: {v.describe()}")
        lines.append(f"complete: {_yn(self.complete)}")
        lines.append(f"{len(self.counterexamples)} counterexamples")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps(
            {
                "summaries": [asdict(s) for s in self.summaries],
                "counterexamples": [asdict(v) for v in self.counterexamples],
                "complete": self.complete,
                "passed": self.passed,
            },
            indent=2,
            sort_keys=True,
        ) + "\n"


def scan(cases: Iterable, space: Optional[ScanSpace] = None, limits: Optional[SearchLimits] = None,
         jobs: int = 1, collect: Optional[list] = None) -> CounterexampleReport:
    """Check every hypothesis-satisfying instance of each case.

    ``space=None`` uses each case's default space. Verdicts are merged in
    instance order, so the report does not depend on ``jobs``. When
    ``collect`` is a list, every verdict is appended to it.
    """
    limits = limits or SearchLimits()
    summaries, bad = [], []
    complete = True
    pool = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        for case in cases:
            case = _case(case)
            sp = space or default_space(case.identifier)
            work = [(case.identifier, G.moduli, S.bits, limits) for G, S in case_instances(case, sp)]
            summary = CaseSummary(case.identifier, sp.describe(), candidates=len(work))
            if pool is None:
                verdicts = map(_run_one, work)
            else:
                verdicts = pool.map(_run_one, work, chunksize=max(1, len(work) // (8 * jobs)))
            for v in verdicts:
                if v is None:
                    continue
                if collect is not None:
                    collect.append(v)
                summary.checked += 1
                summary.condition_true += v.condition_holds
                summary.tpc_exists += v.tpc_exists
                if not v.complete:
                    summary.incomplete += 1
                    complete = False
                if not v.consistent:
                    summary.inconsistent += 1
                    bad.append(v)
            summaries.append(summary)
    finally:
        if pool is not None:
            pool.shutdown()
    return CounterexampleReport(summaries, bad, complete)
