from itertools import product

import pytest
from hypothesis import given, strategies as st

from schur_ginibre.partitions import (
    Partition,
    conjugate,
    enumerate_partitions,
    hooks_of,
    is_even,
    partitions_of,
    weight,
)


def partition_counts(n_max):
    """p(0..n_max) by Euler's pentagonal recurrence."""
    p = [1] + [0] * n_max
    for n in range(1, n_max + 1):
        k, total = 1, 0
        while True:
            for g in (k * (3 * k - 1) // 2, k * (3 * k + 1) // 2):
                if g > n:
                    break
                total += (-1) ** (k + 1) * p[n - g]
            if k * (3 * k - 1) // 2 > n:
                break
            k += 1
        p[n] = total
    return p


def brute_force_partitions(max_weight, max_length, max_part):
    out = set()
    for length in range(max_length + 1):
        for parts in product(range(1, max_part + 1), repeat=length):
            if list(parts) == sorted(parts, reverse=True) and sum(parts) <= max_weight:
                out.add(parts)
    return out


@st.composite
def partitions(draw, max_weight=12):
    w = draw(st.integers(0, max_weight))
    parts = []
    while w > 0:
        p = draw(st.integers(1, min(w, parts[-1] if parts else w)))
        parts.append(p)
        w -= p
    return Partition(parts)


def test_pentagonal_oracle_known_values():
    assert partition_counts(12) == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77]


@pytest.mark.parametrize("parts, w", [((4, 2), 6), ((), 0), ((3, 1, 1), 5)])
def test_weight(parts, w):
    assert weight(Partition(parts)) == w


@pytest.mark.parametrize("parts, conj", [((2, 2), (2, 2)), ((3, 1), (2, 1, 1)), ((), ())])
def test_conjugate_examples(parts, conj):
    assert conjugate(Partition(parts)) == Partition(conj)


@pytest.mark.parametrize("parts, even", [((4, 2, 2), True), ((2, 1), False), ((), True)])
def test_is_even(parts, even):
    assert is_even(Partition(parts)) is even


@given(partitions())
def test_conjugate_involution_and_weight(lam):
    assert lam.conjugate().conjugate() == lam
    assert lam.conjugate().weight() == lam.weight()


@given(partitions())
def test_conjugate_is_diagram_transpose(lam):
    cells = {(i, j) for i, p in enumerate(lam) for j in range(p)}
    conj_cells = {(i, j) for i, p in enumerate(lam.conjugate()) for j in range(p)}
    assert conj_cells == {(j, i) for i, j in cells}


def test_zero_parts_dropped_and_validation():
    assert Partition((2, 0, 0)) == Partition((2,))
    assert hash(Partition((2, 1, 0))) == hash(Partition((2, 1)))
    with pytest.raises(ValueError):
        Partition((1, 2))
    with pytest.raises(ValueError):
        Partition((2, -1))


@pytest.mark.parametrize("text, parts", [("4,2,2", (4, 2, 2)), ("", ()), ("0", ()), (" 3, 1 ", (3, 1))])
def test_parse(text, parts):
    assert Partition.parse(text) == Partition(parts)


@pytest.mark.parametrize("text", ["2,3", "a,b", "1,-1"])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        Partition.parse(text)


def test_text_round_trip():
    for lam in enumerate_partitions(8, 8, 8):
        assert Partition.parse(str(lam)) == lam


def test_enumerate_example_4_2_4():
    got = [p.parts for p in enumerate_partitions(4, 2, 4)]
    assert got == [(4,), (3, 1), (3,), (2, 2), (2, 1), (2,), (1, 1), (1,), ()]
    assert set(got) == brute_force_partitions(4, 2, 4)


def test_enumerate_trivial_cases():
    assert list(enumerate_partitions(0, 5, 5)) == [Partition()]
    assert [p.parts for p in enumerate_partitions(2, 1, 2)] == [(2,), (1,), ()]


@pytest.mark.parametrize("bounds", [(5, 3, 2), (6, 6, 6), (7, 2, 5), (3, 0, 3)])
def test_enumerate_matches_brute_force(bounds):
    got = [p.parts for p in enumerate_partitions(*bounds)]
    assert len(got) == len(set(got))
    assert set(got) == brute_force_partitions(*bounds)
    assert got == sorted(got, reverse=True)


@pytest.mark.parametrize("w", range(13))
def test_enumerate_count_matches_recurrence(w):
    assert sum(1 for _ in enumerate_partitions(w, w, w)) == sum(partition_counts(w))
    assert sum(1 for _ in partitions_of(w)) == partition_counts(w)[w]


def test_hooks_examples():
    assert list(hooks_of(1)) == [(Partition((1,)), 1)]
    assert list(hooks_of(2)) == [(Partition((2,)), 1), (Partition((1, 1)), -1)]
    assert list(hooks_of(4)) == [
        (Partition((4,)), 1),
        (Partition((3, 1)), -1),
        (Partition((2, 1, 1)), 1),
        (Partition((1, 1, 1, 1)), -1),
    ]


@pytest.mark.parametrize("n", range(1, 10))
def test_hooks_shape(n):
    hooks = list(hooks_of(n))
    assert len(hooks) == n
    for lam, sign in hooks:
        assert lam.weight() == n
        assert len(lam) < 2 or lam[1] <= 1
        assert sign == (-1) ** (n - lam[0])
