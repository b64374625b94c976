import math

import numpy as np
import pytest

from symperm import (
    MultisetColumns,
    SizeLimitError,
    ValidationError,
    expand_multiset,
    permanent_multiset,
    permanent_naive,
    permanent_ryser,
)


def random_matrix(n, rng):
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def test_naive_all_ones():
    assert permanent_naive(np.ones((3, 3))) == pytest.approx(6)


def test_naive_identity():
    assert permanent_naive(np.eye(3)) == pytest.approx(1)


def test_naive_2x2():
    assert permanent_naive([[1, 2], [3, 4]]) == pytest.approx(10)


def test_ryser_identity():
    assert permanent_ryser(np.eye(3)) == pytest.approx(1)


def test_ryser_all_ones_4():
    assert permanent_ryser(np.ones((4, 4))) == pytest.approx(24)


def test_ryser_matches_naive_unit_columns():
    rng = np.random.default_rng(11)
    a = random_matrix(6, rng)
    a /= np.linalg.norm(a, axis=0, keepdims=True)
    ry = permanent_ryser(a)
    nv = permanent_naive(a)
    assert abs(ry - nv) <= 1e-12 * (1 + abs(nv))


@pytest.mark.parametrize("n", range(1, 8))
def test_oracle_equivalence_random(n):
    rng = np.random.default_rng(100 + n)
    for _ in range(20):
        a = random_matrix(n, rng)
        ry = permanent_ryser(a)
        nv = permanent_naive(a)
        assert abs(ry - nv) <= 1e-10 * (1 + abs(nv))


def test_permutation_invariance():
    rng = np.random.default_rng(5)
    a = random_matrix(5, rng)
    base = permanent_ryser(a)
    perm = rng.permutation(5)
    assert permanent_ryser(a[:, perm]) == pytest.approx(base)
    assert permanent_ryser(a[perm, :]) == pytest.approx(base)


def test_multiset_single_column():
    cols = MultisetColumns(3, ((np.ones(3), 3),))
    assert permanent_multiset(cols) == pytest.approx(6)


def test_multiset_degenerate_d1():
    rng = np.random.default_rng(9)
    v = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    cols = MultisetColumns(5, ((v, 5),))
    expected = math.factorial(5) * np.prod(v)
    assert permanent_multiset(cols) == pytest.approx(expected)


def test_multiset_matches_ryser_on_expanded():
    v = np.full(4, 1 / math.sqrt(2))
    w = np.array([1, -1, 1, -1]) / math.sqrt(2)
    cols = MultisetColumns(4, ((v, 2), (w, 2)))
    assert permanent_multiset(cols) == pytest.approx(permanent_ryser(expand_multiset(cols)))


@pytest.mark.parametrize("seed", range(12))
def test_multiset_equivalence_random(seed):
    rng = np.random.default_rng(300 + seed)
    n = int(rng.integers(2, 11))
    d = int(rng.integers(1, min(n, 4) + 1))
    mults = rng.multinomial(n - d, [1.0 / d] * d) + 1
    cols = tuple(
        (rng.standard_normal(n) + 1j * rng.standard_normal(n), int(m)) for m in mults
    )
    ms = MultisetColumns(n, cols)
    ry = permanent_ryser(expand_multiset(ms))
    assert abs(permanent_multiset(ms) - ry) <= 1e-10 * (1 + abs(ry))


def test_multilinearity_in_distinct_column():
    rng = np.random.default_rng(77)
    v = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    w = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    base = permanent_multiset(MultisetColumns(5, ((v, 3), (w, 2))))
    c = 0.7 - 1.3j
    scaled = permanent_multiset(MultisetColumns(5, ((c * v, 3), (w, 2))))
    assert scaled == pytest.approx(c**3 * base)


def test_identity_and_all_ones_large():
    for n in (6, 12):
        cols_id = tuple((np.eye(n)[:, j], 1) for j in range(n))
        assert permanent_multiset(MultisetColumns(n, cols_id)) == pytest.approx(1)
        ones = MultisetColumns(n, ((np.ones(n), n),))
        assert permanent_multiset(ones) == pytest.approx(math.factorial(n))


def test_expand_declaration_order():
    v = np.array([1.0, 2.0])
    m = expand_multiset(MultisetColumns(2, ((v, 2),)))
    assert np.array_equal(m, np.column_stack([v, v]))
    w = np.array([3.0, 4.0])
    m2 = expand_multiset(MultisetColumns(2, ((v, 1), (w, 1))))
    assert np.array_equal(m2, np.column_stack([v, w]))


def test_naive_guard():
    with pytest.raises(SizeLimitError):
        permanent_naive(np.eye(11))
    assert permanent_naive(np.eye(11), order_limit=11) == pytest.approx(1)


def test_ryser_guard_and_validation():
    with pytest.raises(SizeLimitError):
        permanent_ryser(np.eye(31))
    with pytest.raises(ValidationError):
        permanent_ryser(np.ones((2, 3)))
    bad = np.ones((2, 2))
    bad[0, 0] = np.nan
    with pytest.raises(ValidationError):
        permanent_ryser(bad)


def test_multiset_multiplicity_mismatch():
    with pytest.raises(ValidationError):
        MultisetColumns(3, ((np.ones(3), 2),))
