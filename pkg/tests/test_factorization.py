import itertools
import random

import numpy as np
import pytest

import oracles
from conftest import cyc
from sumcodes.abelian import ElementSet, is_periodic, make_group, quotient_reduce, stabilizer
from sumcodes.factorization import (
    convolution,
    cyclic_certificate,
    multivariate_certificate,
    quotient_factorization_check,
    two_of_three_check,
    unique_sum_factorization,
)


def test_unique_sum_examples(z4z4):
    G = make_group([6])
    X, Y = ElementSet.of(G, [0, 3]), ElementSet.of(G, [1, 3, 5])
    r = unique_sum_factorization(G, X, Y)
    assert r and r.condition_a and r.condition_b and r.condition_c
    assert r.counts == (1,) * 6
    G, X = cyc(4, [0, 1])
    r = unique_sum_factorization(G, X, X)
    # 4 = 2 * 2, so only (c) holds; element 1 is hit twice and 3 never
    assert not r and r.condition_c and not r.condition_a and not r.condition_b
    assert r.counts == (1, 2, 1, 0)
    G, S, C = z4z4
    assert unique_sum_factorization(G, C.negate(), S)


def test_unique_sum_rejects_empty():
    G, X = cyc(4, [0])
    with pytest.raises(ValueError):
        unique_sum_factorization(G, X, ElementSet(G))


def test_two_of_three_examples():
    G = make_group([6])
    X, Y = ElementSet.of(G, [0, 3]), ElementSet.of(G, [1, 3, 5])
    assert two_of_three_check(G, X, Y)
    G, X = cyc(4, [0, 2])
    r = unique_sum_factorization(G, X, X)
    assert r.condition_c and not r.condition_b and not r
    assert two_of_three_check(G, X, X)


@pytest.mark.parametrize("moduli", [[4], [6], [8], [2, 2], [2, 4], [3, 3]])
def test_two_of_three_exhaustive(moduli):
    G = make_group(moduli)
    full = 1 << G.order
    for xb in range(1, full):
        for yb in range(xb, full):
            X, Y = ElementSet(G, xb), ElementSet(G, yb)
            assert two_of_three_check(G, X, Y)


def test_factorization_matches_oracle():
    rng = random.Random(7)
    for moduli in ([6], [8], [9], [2, 4], [3, 3], [2, 6]):
        G = make_group(moduli)
        for _ in range(300):
            X = ElementSet(G, rng.randrange(1, 1 << G.order))
            Y = ElementSet(G, rng.randrange(1, 1 << G.order))
            got = unique_sum_factorization(G, X, Y).is_factorization
            assert got == oracles.is_unique_sum(tuple(moduli), X.elements(), Y.elements())


def test_quotient_factorization_examples():
    G = make_group([6])
    assert quotient_factorization_check(G, ElementSet.of(G, [1, 3, 5]), ElementSet.of(G, [0, 3]))
    G = make_group([4])
    assert quotient_factorization_check(G, ElementSet.of(G, [1, 3]), ElementSet.of(G, [0, 1]))
    assert quotient_factorization_check(G, ElementSet.of(G, [0, 1]), ElementSet.of(G, [0, 2]))


@pytest.mark.parametrize("moduli", [[4], [6], [2, 2], [7]])
def test_quotient_factorization_exhaustive(moduli):
    G = make_group(moduli)
    full = 1 << G.order
    for xb in range(1, full):
        for yb in range(1, full):
            assert quotient_factorization_check(G, ElementSet(G, xb), ElementSet(G, yb))


# convolution values from oracles.cyclic_product_coeffs
def test_cyclic_certificate_examples():
    G = make_group([6])
    cert = cyclic_certificate(6, ElementSet.of(G, [0, 3]), ElementSet.of(G, [1, 3, 5]))
    assert cert and cert.vector.tolist() == [1] * 6
    G = make_group([4])
    cert = cyclic_certificate(4, ElementSet.of(G, [0, 1]), ElementSet.of(G, [1, 3]))
    assert cert and cert.vector.tolist() == [1] * 4
    cert = cyclic_certificate(4, ElementSet.of(G, [0, 2]), ElementSet.of(G, [1, 3]))
    assert not cert and cert.vector.tolist() == [0, 2, 0, 2]


def test_multivariate_examples(z4z4, z3z6):
    for G, S, C in (z4z4, z3z6):
        cert = multivariate_certificate(G, C, S)
        assert cert and cert.vector.shape == G.moduli and (cert.vector == 1).all()
    G = make_group([2, 2])
    cert = multivariate_certificate(G, ElementSet.of(G, [(0, 0)]), ElementSet.of(G, [(0, 1)]))
    assert not cert and cert.vector.tolist() == [[0, 1], [0, 0]]


def test_certificate_rejects():
    G = make_group([4])
    with pytest.raises(ValueError):
        cyclic_certificate(6, ElementSet.of(G, [0]), ElementSet.of(G, [1]))
    with pytest.raises(ValueError):
        cyclic_certificate(4, ElementSet(G), ElementSet.of(G, [1]))


@pytest.mark.parametrize("n", range(2, 11))
def test_convolution_matches_polynomial_product(n):
    G = make_group([n])
    rng = random.Random(n)
    for _ in range(200):
        C = ElementSet(G, rng.randrange(1, 1 << n))
        S = ElementSet(G, rng.randrange(1, 1 << n))
        vec = convolution(G, C, S)
        expect = oracles.cyclic_product_coeffs(n, C.negate().indices, S.indices)
        assert vec.tolist() == expect
        assert int(vec.sum()) == len(C) * len(S)


def test_multivariate_total_mass():
    rng = random.Random(3)
    for moduli in ([2, 3], [3, 6], [4, 4], [2, 2, 3]):
        G = make_group(moduli)
        for _ in range(100):
            C = ElementSet(G, rng.randrange(1, 1 << G.order))
            S = ElementSet(G, rng.randrange(1, 1 << G.order))
            vec = convolution(G, C, S)
            assert int(vec.sum()) == len(C) * len(S)
            # entry at g counts pairs (u, s) in -C x S with u + s = g
            for idx in rng.sample(range(G.order), 3):
                g = G.decode(idx)
                want = sum(
                    oracles.add(tuple(moduli), oracles.neg(tuple(moduli), c), s) == g
                    for c in C.elements() for s in S.elements()
                )
                assert vec[g] == want


def _tilings(n, X):
    """All Y containing 0 with Z_n = X (+) Y, by exact cover over translates of X."""
    xs = [x for x in range(n) if X >> x & 1]
    full = (1 << n) - 1

    def shift(y):
        return sum(1 << ((x + y) % n) for x in xs)

    out = []

    def go(covered, chosen):
        if covered == full:
            out.append(chosen)
            return
        g = (~covered & (covered + 1)).bit_length() - 1
        for x in xs:
            y = (g - x) % n
            t = shift(y)
            if not t & covered:
                go(covered | t, chosen | 1 << y)

    # element 0 is covered by x + y with y = -x; keep tilings whose Y holds 0
    start = shift(0)
    go(start, 1)
    return out


def _factorizations(n, size):
    """Pairs (X, Y) with 0 in both, |X| = size and Z_n = X (+) Y."""
    for rest in itertools.combinations(range(1, n), size - 1):
        X = 1 | sum(1 << r for r in rest)
        for Y in _tilings(n, X):
            yield X, Y


def _prime_power(k):
    from sympy import factorint
    return k == 1 or len(factorint(k)) == 1


@pytest.mark.slow
def test_factor_prime_and_aperiodic_quotient():
    total = 0
    for n in range(2, 31):
        G = make_group([n])
        for a in range(1, n + 1):
            if n % a or not (_prime_power(a) or _prime_power(n // a)):
                continue
            # enumerate from the smaller side; the roles are symmetric
            if a > n // a:
                continue
            for xb, yb in _factorizations(n, a):
                X, Y = ElementSet(G, xb), ElementSet(G, yb)
                assert unique_sum_factorization(G, X, Y)
                assert is_periodic(X) or is_periodic(Y), (n, X.indices, Y.indices)
                for Z in (X, Y):
                    red = quotient_reduce(G, stabilizer(G, Z), Z)
                    assert red.quotient.stabilizer(red.labels) == frozenset({0})
                total += 1
    assert total > 1000


def test_tiler_against_oracle():
    for n in (4, 6, 8):
        G = make_group([n])
        for xb in range(1, 1 << n, 2):
            X = ElementSet(G, xb)
            got = sorted(_tilings(n, xb))
            want = sorted(
                yb for yb in range(1, 1 << n, 2)
                if oracles.is_unique_sum((n,), X.elements(), ElementSet(G, yb).elements())
            )
            assert got == want


@pytest.mark.parametrize("n", range(2, 31))
def test_coset_distinct_mod_size(n):
    # |X| = |stab(X)| forces X to be a coset of its stabilizer
    G = make_group([n])
    for h in range(2, n + 1):
        if n % h or np.gcd(h, n // h) != 1:
            continue
        step = n // h
        for x in range(step):
            X = ElementSet.from_indices(G, ((x + step * i) % n for i in range(h)))
            assert len(stabilizer(G, X)) == len(X)
            assert len({v % h for v in X.indices}) == h
