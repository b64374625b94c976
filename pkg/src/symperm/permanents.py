"""Exact matrix permanents: naive expansion, Ryser with Gray-code updates,
and a grouped formula for matrices with repeated columns.

The three kernels have different cost profiles (n!, n*2^n, and
n*d*prod(k_i+1) respectively) and serve as mutual correctness oracles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations, product

import numpy as np

from .errors import SizeLimitError, ValidationError

NAIVE_ORDER_LIMIT = 10
RYSER_ORDER_LIMIT = 30


def as_square_matrix(m) -> np.ndarray:
    """Validate and convert input to a dense square complex matrix."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValidationError("matrix must be square with order >= 1, got shape %r" % (a.shape,))
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValidationError("matrix entries must be finite")
    return a


def permanent_naive(m, order_limit: int | None = None) -> complex:
    """Permanent by direct sum over all n! permutations.

    Exact and trivially correct; guarded at order ``NAIVE_ORDER_LIMIT``
    because of the factorial cost. Serves as the ground-truth oracle for
    the faster kernels.
    """
    a = as_square_matrix(m)
    n = a.shape[0]
    limit = NAIVE_ORDER_LIMIT if order_limit is None else order_limit
    if n > limit:
        raise SizeLimitError("order %d exceeds naive guard %d" % (n, limit))
    rows = a.tolist()
    total = 0j
    for perm in permutations(range(n)):
        total += math.prod(rows[i][perm[i]] for i in range(n))
    return complex(total)


def permanent_ryser(m, order_limit: int | None = None) -> complex:
    """Permanent by Ryser's inclusion-exclusion formula.

    Column subsets are enumerated in Gray-code order so each step updates
    the running row sums in O(n), for O(n 2^n) total work.
    """
    a = as_square_matrix(m)
    n = a.shape[0]
    limit = RYSER_ORDER_LIMIT if order_limit is None else order_limit
    if n > limit:
        raise SizeLimitError("order %d exceeds Ryser guard %d" % (n, limit))

    cols = [a[:, j].copy() for j in range(n)]
    row_sums = np.zeros(n, dtype=complex)
    included = [False] * n
    size = 0
    total = 0j
    for k in range(1, 1 << n):
        # bit toggled between Gray codes of k-1 and k
        j = (k & -k).bit_length() - 1
        if included[j]:
            row_sums -= cols[j]
            included[j] = False
            size -= 1
        else:
            row_sums += cols[j]
            included[j] = True
            size += 1
        term = np.prod(row_sums)
        total += -term if size & 1 else term
    return complex(-total if n & 1 else total)


@dataclass(frozen=True)
class MultisetColumns:
    """A square matrix given as distinct columns with multiplicities.

    ``dimension`` is the vector length n; the multiplicities must sum to n
    so that expansion yields a valid square matrix.
    """

    dimension: int
    columns: tuple[tuple[np.ndarray, int], ...]

    def __post_init__(self):
        if self.dimension < 1:
            raise ValidationError("dimension must be >= 1")
        if not self.columns:
            raise ValidationError("at least one column required")
        total = 0
        cleaned = []
        for vec, mult in self.columns:
            v = np.asarray(vec, dtype=complex)
            if v.shape != (self.dimension,):
                raise ValidationError(
                    "column length %r does not match dimension %d" % (v.shape, self.dimension)
                )
            if not np.all(np.isfinite(v.real)) or not np.all(np.isfinite(v.imag)):
                raise ValidationError("column entries must be finite")
            if mult < 1:
                raise ValidationError("multiplicity must be positive")
            total += mult
            cleaned.append((v, int(mult)))
        if total != self.dimension:
            raise ValidationError(
                "multiplicities sum to %d, expected %d" % (total, self.dimension)
            )
        object.__setattr__(self, "columns", tuple(cleaned))


def expand_multiset(cols: MultisetColumns) -> np.ndarray:
    """Expand to a dense square matrix, repeating each column in declaration order."""
    stacked = [vec for vec, mult in cols.columns for _ in range(mult)]
    return np.column_stack(stacked)


def permanent_multiset(cols: MultisetColumns) -> complex:
    """Permanent of the expanded matrix, computed without expanding.

    Groups Ryser's column subsets by how many copies r_i of each distinct
    column are selected:

        per = (-1)^n sum_{0<=r_i<=k_i} (-1)^{sum r} prod_i C(k_i, r_i)
              * prod_j (sum_i r_i v_{j,i})

    Cost O(n * d * prod(k_i + 1)), so e.g. n=100 with d=2 is fast. The
    formula is validated against the expanded-matrix Ryser oracle in tests.
    """
    n = cols.dimension
    mults = [mult for _, mult in cols.columns]
    vmat = np.column_stack([vec for vec, _ in cols.columns])  # (n, d)
    total = 0j
    for r in product(*(range(k + 1) for k in mults)):
        s = sum(r)
        if s == 0:
            continue
        w = vmat @ np.asarray(r, dtype=float)
        coeff = math.prod(math.comb(k, ri) for k, ri in zip(mults, r))
        term = coeff * np.prod(w)
        total += -term if s & 1 else term
    return complex(-total if n & 1 else total)
