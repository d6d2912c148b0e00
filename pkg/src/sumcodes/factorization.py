"""Factorizations G = X (+) Y and the convolution certificates for codes."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .abelian import ElementSet, GroupSpec, Quotient, stabilizer

__all__ = [
    "FactorizationReport", "Certificate", "unique_sum_factorization", "two_of_three_check",
    "quotient_factorization_check", "cyclic_certificate", "multivariate_certificate",
    "convolution",
]


@dataclass(frozen=True)
class FactorizationReport:
    is_factorization: bool
    condition_a: bool  # G = X + Y
    condition_b: bool  # (X - X) & (Y - Y) = {0}
    condition_c: bool  # |G| = |X||Y|
    counts: tuple[int, ...]  # representations of each element, by index

    def __bool__(self):
        return self.is_factorization


def _representation_counts(G: GroupSpec, X: ElementSet, Y: ElementSet) -> list[int]:
    counts = [0] * G.order
    ys = list(Y)
    for x in X:
        for y in ys:
            counts[G.add_index(x, y)] += 1
    return counts


def unique_sum_factorization(G: GroupSpec, X: ElementSet, Y: ElementSet) -> FactorizationReport:
    if X.group != G or Y.group != G:
        raise ValueError("factors must be subsets of the group")
    if not X or not Y:
        raise ValueError("factors must be nonempty")
    counts = _representation_counts(G, X, Y)
    a = all(counts)
    b = (X.minus(X) & Y.minus(Y)).bits == 1
    c = G.order == len(X) * len(Y)
    return FactorizationReport(all(k == 1 for k in counts), a, b, c, tuple(counts))


def two_of_three_check(G: GroupSpec, X: ElementSet, Y: ElementSet) -> bool:
    """Whether the instance agrees with: G = X (+) Y iff any two of (a), (b), (c) hold."""
    r = unique_sum_factorization(G, X, Y)
    held = r.condition_a + r.condition_b + r.condition_c
    if held >= 2:
        return r.is_factorization and held == 3
    return not r.is_factorization


def quotient_factorization_check(G: GroupSpec, X: ElementSet, Y: ElementSet) -> bool:
    """Whether G = X (+) Y iff (G/H = X/H (+) Y/H and H & (Y - Y) = {0}), H = stab(X)."""
    direct = unique_sum_factorization(G, X, Y).is_factorization
    H = stabilizer(G, X)
    Q = Quotient(G, H)
    xl, yl = Q.labels(X), Q.labels(Y)
    counts: dict[int, int] = {}
    for a in xl:
        for b in yl:
            s = Q.add(a, b)
            counts[s] = counts.get(s, 0) + 1
    quotient_ok = len(counts) == Q.order and all(v == 1 for v in counts.values())
    meet_ok = (H & Y.minus(Y)).bits == 1
    return direct == (quotient_ok and meet_ok)


@dataclass(frozen=True)
class Certificate:
    passed: bool
    vector: np.ndarray  # entry at g: #{(u, s) in -C x S : u + s = g}

    def __bool__(self):
        return self.passed


def convolution(G: GroupSpec, C: ElementSet, S: ElementSet) -> np.ndarray:
    """Cyclic convolution of the indicators of -C and S, shaped like G."""
    n = G.order
    out = np.zeros(n, dtype=np.int64)
    s_coords = [G.elements[s] for s in S]
    moduli = G.moduli
    radices = G.radices
    for c in C:
        u = [(-a) % m for a, m in zip(G.elements[c], moduli)]
        for s in s_coords:
            out[sum(((a + b) % m) * r for a, b, m, r in zip(u, s, moduli, radices))] += 1
    return out.reshape(moduli)


def _certificate(G: GroupSpec, C: ElementSet, S: ElementSet) -> Certificate:
    if C.group != G or S.group != G:
        raise ValueError("C and S must be subsets of the group")
    if not C or not S:
        raise ValueError("C and S must be nonempty")
    vec = convolution(G, C, S)
    return Certificate(bool((vec == 1).all()), vec)


def cyclic_certificate(n: int, C: ElementSet, S: ElementSet) -> Certificate:
    """f_{-C}(x) f_S(x) == 1 + x + ... + x^(n-1) mod x^n - 1, as a coefficient check."""
    G = S.group
    if G.moduli != (n,):
        raise ValueError(f"expected subsets of Z_{n}")
    return _certificate(G, C, S)


def multivariate_certificate(G: GroupSpec, C: ElementSet, S: ElementSet) -> Certificate:
    """The product-group analogue: the d-dimensional convolution tensor is all ones."""
    return _certificate(G, C, S)
