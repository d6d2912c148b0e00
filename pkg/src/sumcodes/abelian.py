"""Finite abelian groups Z_{n1} x ... x Z_{nd}.

Elements are residue tuples; internally every element is identified with its
mixed-radix index in ``range(order)`` so that subsets can be stored as
integer bit-vectors.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from math import prod
from typing import Iterable, Iterator, Optional, Sequence, Union

from sympy import factorint

Element = tuple[int, ...]
ElementLike = Union[int, Sequence[int]]

__all__ = [
    "Element", "GroupSpec", "ElementSet", "Subgroup", "Quotient",
    "make_group", "subgroup_generated", "stabilizer", "is_periodic",
    "squares", "is_square_free", "is_normal_subset", "quotient_reduce",
    "QuotientReduction", "enumerate_subgroups", "is_good_abelian_order",
    "prime_signature",
]


@dataclass(frozen=True)
class GroupSpec:
    moduli: tuple[int, ...]

    def __post_init__(self):
        if len(self.moduli) == 0:
            raise ValueError("group needs at least one modulus")
        for m in self.moduli:
            if not isinstance(m, int) or m < 2:
                raise ValueError(f"invalid modulus {m!r}: every modulus must be an integer >= 2")

    @property
    def rank(self) -> int:
        return len(self.moduli)

    @property
    def is_cyclic_spec(self) -> bool:
        """True when the group is given as a single cyclic factor."""
        return len(self.moduli) == 1

    @cached_property
    def order(self) -> int:
        return prod(self.moduli)

    @cached_property
    def radices(self) -> tuple[int, ...]:
        # radix of coordinate i is the product of the moduli after it
        out = []
        r = 1
        for m in reversed(self.moduli):
            out.append(r)
            r *= m
        return tuple(reversed(out))

    @cached_property
    def elements(self) -> tuple[Element, ...]:
        """All elements, listed in index order."""
        return tuple(itertools.product(*(range(m) for m in self.moduli)))

    @cached_property
    def _neg_table(self) -> tuple[int, ...]:
        return tuple(self.encode(self.neg(g)) for g in self.elements)

    @cached_property
    def _add_table(self) -> Optional[tuple[tuple[int, ...], ...]]:
        return _add_table(self.moduli) if self.order <= 2048 else None

    @cached_property
    def full_mask(self) -> int:
        return (1 << self.order) - 1

    def __str__(self):
        return " x ".join(f"Z{m}" for m in self.moduli)

    # -- element arithmetic -------------------------------------------------

    def element(self, g: ElementLike) -> Element:
        """Validate ``g`` and return it as a residue tuple."""
        if isinstance(g, int):
            if self.rank != 1:
                raise ValueError(f"integer element {g} given for rank-{self.rank} group {self}")
            g = (g,)
        g = tuple(g)
        if len(g) != self.rank:
            raise ValueError(f"element {g} has {len(g)} coordinates, group {self} has {self.rank}")
        for x, m in zip(g, self.moduli):
            if not isinstance(x, int) or not 0 <= x < m:
                raise ValueError(f"coordinate {x!r} of {g} out of range [0, {m})")
        return g

    def add(self, g: ElementLike, h: ElementLike) -> Element:
        g, h = self.element(g), self.element(h)
        return tuple((a + b) % m for a, b, m in zip(g, h, self.moduli))

    def neg(self, g: ElementLike) -> Element:
        g = self.element(g)
        return tuple((-a) % m for a, m in zip(g, self.moduli))

    def sub(self, g: ElementLike, h: ElementLike) -> Element:
        return self.add(g, self.neg(h))

    def encode(self, g: ElementLike) -> int:
        g = self.element(g)
        return sum(a * r for a, r in zip(g, self.radices))

    def decode(self, index: int) -> Element:
        if not isinstance(index, int) or not 0 <= index < self.order:
            raise ValueError(f"index {index!r} out of range [0, {self.order})")
        return self.elements[index]

    # index-level arithmetic, used by the hot loops
    def add_index(self, i: int, j: int) -> int:
        if self.rank == 1:
            return (i + j) % self.order
        table = self._add_table
        if table is not None:
            return table[i][j]
        return self._add_slow(i, j)

    def _add_slow(self, i: int, j: int) -> int:
        gi, gj = self.elements[i], self.elements[j]
        return sum(((a + b) % m) * r for a, b, m, r in zip(gi, gj, self.moduli, self.radices))

    def neg_index(self, i: int) -> int:
        if self.rank == 1:
            return (-i) % self.order
        return self._neg_table[i]

    def sub_index(self, i: int, j: int) -> int:
        return self.add_index(i, self.neg_index(j))

    def double_index(self, i: int) -> int:
        return self.add_index(i, i)


@lru_cache(maxsize=256)
def _add_table(moduli: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    G = GroupSpec(moduli)
    return tuple(tuple(G._add_slow(i, j) for j in range(G.order)) for i in range(G.order))


def make_group(moduli: Iterable[int]) -> GroupSpec:
    moduli = tuple(moduli)
    if not moduli:
        raise ValueError("invalid modulus list: empty")
    return GroupSpec(moduli)


def _iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True, eq=False)
class ElementSet:
    """A subset of a group stored as a bit-vector over element indices."""

    group: GroupSpec
    bits: int = 0

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.group.order:
            raise ValueError("bit-vector has members outside the group")

    @classmethod
    def of(cls, group: GroupSpec, members: Iterable[ElementLike]) -> "ElementSet":
        bits = 0
        for g in members:
            bits |= 1 << group.encode(g)
        return cls(group, bits)

    @classmethod
    def from_indices(cls, group: GroupSpec, indices: Iterable[int]) -> "ElementSet":
        bits = 0
        for i in indices:
            if not 0 <= i < group.order:
                raise ValueError(f"index {i} out of range [0, {group.order})")
            bits |= 1 << i
        return cls(group, bits)

    @classmethod
    def whole(cls, group: GroupSpec) -> "ElementSet":
        return cls(group, group.full_mask)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __iter__(self) -> Iterator[int]:
        return _iter_bits(self.bits)

    def __contains__(self, g) -> bool:
        # an int is an element index (for Z_n the index is the element itself)
        if isinstance(g, int):
            return 0 <= g < self.group.order and bool(self.bits >> g & 1)
        return bool(self.bits >> self.group.encode(g) & 1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ElementSet):
            return NotImplemented
        return self.group == other.group and self.bits == other.bits

    def __hash__(self) -> int:
        return hash((self.group, self.bits))

    def __bool__(self) -> bool:
        return self.bits != 0

    def __repr__(self):
        return f"ElementSet({self.group.moduli}, {self.elements()})"

    @property
    def indices(self) -> list[int]:
        return list(self)

    def elements(self) -> list[Element]:
        return [self.group.elements[i] for i in self]

    def _check(self, other: "ElementSet"):
        if other.group != self.group:
            raise ValueError("sets belong to different groups")

    def __or__(self, other: "ElementSet") -> "ElementSet":
        self._check(other)
        return ElementSet(self.group, self.bits | other.bits)

    def __and__(self, other: "ElementSet") -> "ElementSet":
        self._check(other)
        return ElementSet(self.group, self.bits & other.bits)

    def __sub__(self, other: "ElementSet") -> "ElementSet":
        """Set difference (not the difference set X - Y, see :meth:`minus`)."""
        self._check(other)
        return ElementSet(self.group, self.bits & ~other.bits)

    def issubset(self, other: "ElementSet") -> bool:
        self._check(other)
        return self.bits & ~other.bits == 0

    def translate(self, g: ElementLike) -> "ElementSet":
        G = self.group
        k = G.encode(g)
        if G.rank == 1:
            n = G.order
            return ElementSet(G, ((self.bits << k) | (self.bits >> (n - k))) & G.full_mask)
        return ElementSet.from_indices(G, (G.add_index(i, k) for i in self))

    def negate(self) -> "ElementSet":
        G = self.group
        return ElementSet.from_indices(G, (G.neg_index(i) for i in self))

    def plus(self, other: "ElementSet") -> "ElementSet":
        """Sumset X + Y."""
        self._check(other)
        G = self.group
        return ElementSet.from_indices(G, (G.add_index(i, j) for i in self for j in other))

    def minus(self, other: "ElementSet") -> "ElementSet":
        """Difference set X - Y."""
        return self.plus(other.negate())


@dataclass(frozen=True, eq=False, repr=False)
class Subgroup(ElementSet):
    def __post_init__(self):
        super().__post_init__()
        if not self.bits & 1:
            raise ValueError("not a subgroup: identity missing")
        G = self.group
        members = list(self)
        for i in members:
            if not self.bits >> G.neg_index(i) & 1:
                raise ValueError(f"not a subgroup: not closed under negation at {G.decode(i)}")
            for j in members:
                if not self.bits >> G.add_index(i, j) & 1:
                    raise ValueError(f"not a subgroup: not closed under addition at {G.decode(i)}, {G.decode(j)}")

    @classmethod
    def _unchecked(cls, group: GroupSpec, bits: int) -> "Subgroup":
        # for bit-vectors that are subgroups by construction
        obj = object.__new__(cls)
        object.__setattr__(obj, "group", group)
        object.__setattr__(obj, "bits", bits)
        return obj

    def __repr__(self):
        return f"Subgroup({self.group.moduli}, {self.elements()})"

    @property
    def index(self) -> int:
        return self.group.order // len(self)


def _closure_bits(G: GroupSpec, bits: int) -> int:
    """Smallest subgroup containing the set ``bits``, as a bit-vector."""
    closed = 1  # identity
    frontier = [i for i in _iter_bits(bits) if i != 0]
    gens = list(frontier)
    for i in gens:
        closed |= 1 << i
    # in a finite group closure under addition alone already gives a subgroup
    while frontier:
        nxt = []
        for i in frontier:
            for g in gens:
                j = G.add_index(i, g)
                if not closed >> j & 1:
                    closed |= 1 << j
                    nxt.append(j)
        frontier = nxt
    return closed


def subgroup_generated(G: GroupSpec, X: ElementSet) -> Subgroup:
    """The subgroup <X>; the empty set generates the trivial subgroup."""
    if X.group != G:
        raise ValueError("set belongs to a different group")
    return Subgroup._unchecked(G, _closure_bits(G, X.bits))


def stabilizer(G: GroupSpec, X: ElementSet) -> Subgroup:
    """The subgroup of periods {g : X + g = X}."""
    if X.group != G:
        raise ValueError("set belongs to a different group")
    if not X:
        raise ValueError("stabilizer of empty set undefined")
    # every period maps the first member onto some member
    first = next(iter(X))
    bits = 0
    for x in X:
        g = G.sub_index(x, first)
        if X.translate(G.decode(g)).bits == X.bits:
            bits |= 1 << g
    return Subgroup._unchecked(G, bits)


def is_periodic(X: ElementSet) -> bool:
    return len(stabilizer(X.group, X)) > 1


def squares(G: GroupSpec) -> ElementSet:
    return ElementSet.from_indices(G, (G.double_index(i) for i in range(G.order)))


def is_square_free(X: ElementSet) -> bool:
    return not (X & squares(X.group))


def is_normal_subset(X: ElementSet) -> bool:
    """Every subset of an abelian group is normal."""
    return True


def enumerate_subgroups(G: GroupSpec) -> list[Subgroup]:
    """All subgroups of G, sorted by (order, bit-vector)."""
    level = {1}
    seen = {1}
    for _ in range(G.rank):
        nxt = set()
        for H in level:
            for g in range(G.order):
                if H >> g & 1:
                    continue
                K = _closure_bits(G, H | 1 << g)
                if K not in seen:
                    seen.add(K)
                    nxt.add(K)
        level = nxt | level
    return [Subgroup._unchecked(G, b) for b in sorted(seen, key=lambda b: (b.bit_count(), b))]


class Quotient:
    """The quotient G/H with cosets labelled by their smallest element index."""

    def __init__(self, G: GroupSpec, H: ElementSet):
        if H.group != G:
            raise ValueError("subgroup belongs to a different group")
        if not isinstance(H, Subgroup):
            H = Subgroup(G, H.bits)  # validates
        self.group = G
        self.subgroup = H
        label = [-1] * G.order
        reps = []
        for x in range(G.order):
            if label[x] < 0:
                reps.append(x)
                for h in H:
                    label[G.add_index(x, h)] = x
        self.label = label
        self.reps = reps

    @property
    def order(self) -> int:
        return len(self.reps)

    def labels(self, X: ElementSet) -> frozenset[int]:
        return frozenset(self.label[x] for x in X)

    def add(self, a: int, b: int) -> int:
        return self.label[self.group.add_index(a, b)]

    def translate(self, labels: Iterable[int], g: int) -> frozenset[int]:
        return frozenset(self.add(a, g) for a in labels)

    def stabilizer(self, labels: frozenset[int]) -> frozenset[int]:
        """Periods of a set of cosets, as coset labels."""
        return frozenset(g for g in self.reps if self.translate(labels, g) == labels)

    def lift(self, labels: Iterable[int]) -> ElementSet:
        G, H = self.group, self.subgroup
        return ElementSet.from_indices(G, (G.add_index(a, h) for a in labels for h in H))


@dataclass(frozen=True)
class QuotientReduction:
    quotient: Quotient = field(repr=False)
    labels: frozenset[int]
    cosets: tuple[tuple[int, ...], ...]
    reduced_group: Optional[GroupSpec]
    reduced_set: Optional[ElementSet]


def quotient_reduce(G: GroupSpec, H: ElementSet, X: ElementSet) -> QuotientReduction:
    """Reduce X modulo H.

    For a cyclic group with |H| = h the reduced instance lives on Z_{n/h}
    through x -> x mod (n/h); for trivial H the instance is returned as is.
    """
    Q = Quotient(G, H)
    labels = Q.labels(X)
    cosets = tuple(
        tuple(sorted(G.add_index(a, h) for h in Q.subgroup)) for a in sorted(labels)
    )
    reduced_group = reduced_set = None
    if len(H) == 1:
        reduced_group, reduced_set = G, X
    elif G.rank == 1:
        m = G.order // len(H)
        if m >= 2:
            reduced_group = GroupSpec((m,))
            reduced_set = ElementSet.from_indices(reduced_group, (x % m for x in X))
    return QuotientReduction(Q, labels, cosets, reduced_group, reduced_set)


def prime_signature(n: int) -> dict[int, int]:
    return factorint(n)


_GOOD_CLASSES = {
    (2, 2): "p^2q^2",
    (1, 1, 1): "pqr",
    (2, 1, 1): "p^2qr",
    (1, 1, 1, 1): "pqrs",
}


def is_good_abelian_order(n: int) -> tuple[bool, str]:
    """Classify n against the known good cyclic orders.

    Returns ``(True, label)`` for p^λ, p^λq, p^2q^2, pqr, p^2qr and pqrs
    (distinct primes, λ >= 1) and ``(False, "not in N")`` otherwise.
    """
    if n < 2:
        raise ValueError(f"order must be >= 2, got {n}")
    exps = tuple(sorted(factorint(n).values(), reverse=True))
    if len(exps) == 1:
        return True, "p^λ"
    if exps in _GOOD_CLASSES:
        return True, _GOOD_CLASSES[exps]
    if len(exps) == 2 and exps[1] == 1:
        return True, "p^λq"
    return False, "not in N"
