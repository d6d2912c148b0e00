import itertools

import pytest

import oracles
from conftest import Z4Z4_S, cyc
from sumcodes.abelian import (
    ElementSet,
    Quotient,
    Subgroup,
    enumerate_subgroups,
    is_good_abelian_order,
    is_normal_subset,
    is_periodic,
    is_square_free,
    make_group,
    quotient_reduce,
    squares,
    stabilizer,
    subgroup_generated,
)


@pytest.mark.parametrize("moduli, order", [([4, 4], 16), ([6], 6), ([3, 6], 18)])
def test_make_group_order(moduli, order):
    assert make_group(moduli).order == order


@pytest.mark.parametrize("moduli", [[], [1], [4, 1], [0], [-3]])
def test_make_group_rejects(moduli):
    with pytest.raises(ValueError, match="invalid modulus|empty"):
        make_group(moduli)


def test_element_ops():
    G = make_group([4, 4])
    assert G.add((3, 2), (1, 3)) == (0, 1)
    assert make_group([6]).neg(1) == (5,)
    H = make_group([3, 6])
    assert H.radices == (6, 1)
    assert H.encode((1, 2)) == 8
    assert H.decode(8) == (1, 2)


def test_element_out_of_range():
    G = make_group([3, 6])
    with pytest.raises(ValueError):
        G.encode((3, 0))
    with pytest.raises(ValueError):
        G.add((0, 6), (0, 0))
    with pytest.raises(ValueError):
        G.decode(18)


@pytest.mark.parametrize("moduli", [[5], [2, 3], [3, 6], [2, 2, 2], [4, 4]])
def test_codec_bijection(moduli):
    G = make_group(moduli)
    assert [G.encode(G.decode(i)) for i in range(G.order)] == list(range(G.order))
    assert sorted(G.elements) == oracles.elements(moduli)


@pytest.mark.parametrize("moduli", [[6], [2, 3], [2, 4], [3, 3]])
def test_index_arithmetic_matches_tuples(moduli):
    G = make_group(moduli)
    for i, j in itertools.product(range(G.order), repeat=2):
        assert G.decode(G.add_index(i, j)) == oracles.add(moduli, G.decode(i), G.decode(j))
        assert G.decode(G.neg_index(i)) == oracles.neg(moduli, G.decode(i))


def test_subgroup_generated():
    G, X = cyc(6, [1, 3, 5])
    assert len(subgroup_generated(G, X)) == 6
    G, X = cyc(6, [0, 2, 4])
    assert subgroup_generated(G, X).indices == [0, 2, 4]
    G = make_group([4, 4])
    S = ElementSet.of(G, Z4Z4_S)
    assert len(subgroup_generated(G, S.minus(S))) == 16
    assert subgroup_generated(G, ElementSet(G)).indices == [0]


def test_subgroup_construction_check():
    G = make_group([6])
    Subgroup(G, ElementSet.of(G, [0, 3]).bits)
    with pytest.raises(ValueError, match="not a subgroup"):
        Subgroup(G, ElementSet.of(G, [0, 1]).bits)
    with pytest.raises(ValueError, match="identity"):
        Subgroup(G, ElementSet.of(G, [2, 4]).bits)


def test_stabilizer_examples():
    G, X = cyc(4, [1, 3])
    assert stabilizer(G, X).indices == [0, 2]
    G, X = cyc(6, [1, 3, 5])
    assert stabilizer(G, X).indices == [0, 2, 4]
    G = make_group([3, 6])
    assert stabilizer(G, ElementSet.of(G, [(2, 5)])).indices == [0]
    assert is_periodic(ElementSet.of(make_group([4]), [1, 3]))
    with pytest.raises(ValueError, match="empty"):
        stabilizer(G, ElementSet(G))


@pytest.mark.parametrize("moduli", [[4], [6], [8], [2, 4], [3, 3]])
def test_stabilizer_matches_oracle(moduli):
    G = make_group(moduli)
    for bits in range(1, 1 << G.order, 7):
        X = ElementSet(G, bits)
        expect = oracles.stabilizer(moduli, X.elements())
        assert set(stabilizer(G, X).elements()) == expect


def test_squares():
    assert squares(make_group([4])).indices == [0, 2]
    assert is_square_free(ElementSet.of(make_group([4]), [1, 3]))
    assert len(squares(make_group([5]))) == 5
    G = make_group([4, 4])
    assert set(squares(G).elements()) == oracles.squares((4, 4))
    assert is_square_free(ElementSet.of(G, Z4Z4_S))
    assert is_normal_subset(ElementSet.of(G, Z4Z4_S))


def test_quotient_reduce_examples():
    G, X = cyc(4, [1, 3])
    H = stabilizer(G, X)
    r = quotient_reduce(G, H, X)
    assert sorted(r.labels) == [1]
    assert r.reduced_group.moduli == (2,) and r.reduced_set.indices == [1]

    G, X = cyc(6, [1, 2])
    H = ElementSet.of(G, [0, 3])
    r = quotient_reduce(G, H, X)
    assert r.cosets == ((1, 4), (2, 5))
    assert r.reduced_group.moduli == (3,) and r.reduced_set.indices == [1, 2]

    G = make_group([2, 4])
    X = ElementSet.of(G, [(1, 1), (0, 3)])
    r = quotient_reduce(G, ElementSet.of(G, [(0, 0)]), X)
    assert r.reduced_set == X


def test_quotient_rejects_non_subgroup():
    G, X = cyc(6, [1])
    with pytest.raises(ValueError):
        quotient_reduce(G, ElementSet.of(G, [0, 1]), X)


def test_quotient_cyclic_iso_agrees_with_labels():
    # the min-index label of x + H in Z_n is x mod n/|H|
    for n in range(2, 13):
        G = make_group([n])
        for d in range(1, n + 1):
            if n % d:
                continue
            H = ElementSet.from_indices(G, range(0, n, n // d))
            Q = Quotient(G, H)
            assert all(Q.label[x] == x % (n // d) for x in range(n))


@pytest.mark.parametrize("moduli", [[12], [2, 4], [2, 2, 2], [3, 6], [4, 4]])
def test_enumerate_subgroups_matches_oracle(moduli):
    G = make_group(moduli)
    found = {frozenset(H.elements()) for H in enumerate_subgroups(G)}
    els = oracles.elements(moduli)
    expect = set()
    for r in range(1, len(moduli) + 1):
        for gens in itertools.product(els, repeat=r):
            expect.add(frozenset(oracles.closure(moduli, gens)))
    assert found == expect


def test_enumerate_subgroups_counts():
    # Z2^3 has 16 subgroups, Z4 x Z4 has 15
    assert len(enumerate_subgroups(make_group([2, 2, 2]))) == 16
    assert len(enumerate_subgroups(make_group([4, 4]))) == 15
    assert len(enumerate_subgroups(make_group([12]))) == 6


@pytest.mark.parametrize(
    "n, label",
    [
        (12, "p^λq"), (30, "pqr"), (8, "p^λ"), (2, "p^λ"), (6, "p^λq"), (36, "p^2q^2"),
        (60, "p^2qr"), (210, "pqrs"), (72, None), (144, None), (2310, None), (180, None),
    ],
)
def test_good_abelian_order(n, label):
    good, got = is_good_abelian_order(n)
    if label is None:
        assert not good and got == "not in N"
    else:
        assert good and got == label


def test_good_abelian_order_rejects_small():
    with pytest.raises(ValueError):
        is_good_abelian_order(1)


def test_elementset_canonical():
    G = make_group([6])
    assert ElementSet.of(G, [3, 1, 3]) == ElementSet.of(G, [1, 3])
    assert len(ElementSet.of(G, [5, 1])) == 2
    H = Subgroup(G, ElementSet.of(G, [0, 3]).bits)
    assert H == ElementSet.of(G, [0, 3])
    assert hash(H) == hash(ElementSet.of(G, [0, 3]))
    with pytest.raises(ValueError):
        ElementSet.of(G, [1]) | ElementSet.of(make_group([3, 2]), [(0, 1)])


def test_translate_and_sumsets():
    G = make_group([2, 3])
    X = ElementSet.of(G, [(0, 1), (1, 2)])
    assert set(X.translate((1, 1)).elements()) == {(1, 2), (0, 0)}
    Y = ElementSet.of(G, [(0, 0), (1, 0)])
    assert set(X.plus(Y).elements()) == {(0, 1), (1, 1), (1, 2), (0, 2)}
    assert set(X.minus(X).elements()) == {(0, 0), (1, 1), (1, 2)}
    G6, Z = cyc(6, [1, 4])
    assert Z.translate(5).indices == [0, 3]
