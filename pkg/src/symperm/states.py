"""Permutation-invariant states: compositions, Dicke basis vectors,
dense conversions, and local-unitary action on the symmetric subspace.

Levels are 0-based internally (level l in {0, ..., d-1}); a composition
(k_0, ..., k_{d-1}) counts how many of the n parties sit in each level.
Dense vectors index the computational basis big-endian: party 0 is the
most significant base-d digit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import SizeLimitError, ValidationError

DENSE_GUARD = 2**24
NORM_TOL = 1e-12
UNITARY_TOL = 1e-10
COEFF_DROP = 1e-15

Composition = tuple[int, ...]


def validate_composition(k) -> Composition:
    k = tuple(int(v) for v in k)
    if len(k) < 1:
        raise ValidationError("composition needs at least one part")
    if any(v < 0 for v in k):
        raise ValidationError("composition parts must be nonnegative, got %r" % (k,))
    if sum(k) < 1:
        raise ValidationError("composition must sum to n >= 1")
    return k


def compositions(n: int, d: int) -> list[Composition]:
    """All compositions of n into d nonnegative parts, first part descending.

    There are C(n+d-1, d-1) of them, e.g. (3,2) -> [(3,0),(2,1),(1,2),(0,3)].
    """
    if n < 1 or d < 1:
        raise ValidationError("need n >= 1 and d >= 1, got n=%d d=%d" % (n, d))
    out: list[Composition] = []

    def rec(prefix: list[int], remaining: int, slots: int) -> None:
        if slots == 1:
            out.append(tuple(prefix) + (remaining,))
            return
        for v in range(remaining, -1, -1):
            prefix.append(v)
            rec(prefix, remaining - v, slots - 1)
            prefix.pop()

    rec([], n, d)
    return out


def multinomial(k) -> int:
    """Exact multinomial coefficient n! / prod(k_i!) for composition k."""
    k = validate_composition(k)
    n = sum(k)
    result = math.factorial(n)
    for v in k:
        result //= math.factorial(v)
    return result


def log_multinomial(k) -> float:
    """log(n! / prod(k_i!)) via log-gamma; safe for large n."""
    k = validate_composition(k)
    n = sum(k)
    return math.lgamma(n + 1) - sum(math.lgamma(v + 1) for v in k)


def _check_dense_guard(n: int, d: int, guard: int = DENSE_GUARD) -> None:
    if d**n > guard:
        raise SizeLimitError("dense dimension %d^%d exceeds guard %d" % (d, n, guard))


def multiset_index_list(k: Composition) -> list[int]:
    """Flat dense indices of all arrangements of the level multiset k.

    Indices are base-d with party 0 most significant; the list has
    multinomial(k) entries.
    """
    d = len(k)
    n = sum(k)
    out: list[int] = []

    def rec(index: int, counts: list[int], depth: int) -> None:
        if depth == n:
            out.append(index)
            return
        for lvl in range(d):
            if counts[lvl]:
                counts[lvl] -= 1
                rec(index * d + lvl, counts, depth + 1)
                counts[lvl] += 1

    rec(0, list(k), 0)
    return out


@dataclass(frozen=True)
class DenseState:
    """Dense amplitude vector over the computational basis of n d-level parties."""

    n: int
    d: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if self.n < 1 or self.d < 1:
            raise ValidationError("need n >= 1 and d >= 1")
        if amps.shape != (self.d**self.n,):
            raise ValidationError(
                "amplitude vector has length %d, expected %d" % (amps.size, self.d**self.n)
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValidationError("dense state norm %.3e deviates from 1" % norm)
        object.__setattr__(self, "amplitudes", amps)


@dataclass
class SymmetricState:
    """State expanded in the symmetric (Dicke) basis: composition -> coefficient.

    Normalized on construction; coefficients below ``COEFF_DROP`` in
    magnitude are discarded to keep the sparse map sparse.
    """

    n: int
    d: int
    terms: dict[Composition, complex] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise ValidationError("need n >= 1 and d >= 1")
        cleaned: dict[Composition, complex] = {}
        for k, coeff in self.terms.items():
            k = validate_composition(k)
            if len(k) != self.d or sum(k) != self.n:
                raise ValidationError(
                    "composition %r incompatible with (n=%d, d=%d)" % (k, self.n, self.d)
                )
            c = complex(coeff)
            if not (math.isfinite(c.real) and math.isfinite(c.imag)):
                raise ValidationError("coefficient for %r is not finite" % (k,))
            if abs(c) >= COEFF_DROP:
                cleaned[k] = cleaned.get(k, 0j) + c
        norm = math.sqrt(sum(abs(c) ** 2 for c in cleaned.values()))
        if norm < 1e-14:
            raise ValidationError("state has (near-)zero norm")
        if abs(norm - 1.0) > NORM_TOL:
            cleaned = {k: c / norm for k, c in cleaned.items()}
        self.terms = cleaned


@dataclass(frozen=True)
class ProductState:
    """n single-party states of d complex amplitudes each; every row unit norm."""

    rows: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.rows, dtype=complex)
        if r.ndim != 2 or r.shape[0] < 1 or r.shape[1] < 1:
            raise ValidationError("rows must form an (n, d) array, got %r" % (r.shape,))
        if not np.all(np.isfinite(r.real)) or not np.all(np.isfinite(r.imag)):
            raise ValidationError("row amplitudes must be finite")
        norms = np.linalg.norm(r, axis=1)
        if np.any(np.abs(norms - 1.0) > NORM_TOL):
            raise ValidationError("every row must have unit norm (worst %.3e)" % np.max(np.abs(norms - 1.0)))
        object.__setattr__(self, "rows", r)

    @property
    def n(self) -> int:
        return self.rows.shape[0]

    @property
    def d(self) -> int:
        return self.rows.shape[1]


def dicke_dense(k) -> DenseState:
    """Dense vector of the permutation-invariant basis state for composition k.

    Has multinomial(k) nonzero amplitudes, all equal to 1/sqrt(multinomial(k)).
    """
    k = validate_composition(k)
    d = len(k)
    n = sum(k)
    _check_dense_guard(n, d)
    amps = np.zeros(d**n, dtype=complex)
    idx = multiset_index_list(k)
    amps[idx] = 1.0 / math.sqrt(len(idx))
    return DenseState(n, d, amps)


def symmetric_to_dense(s: SymmetricState) -> DenseState:
    """Linear extension of ``dicke_dense``; an isometry into the dense space."""
    _check_dense_guard(s.n, s.d)
    amps = np.zeros(s.d**s.n, dtype=complex)
    for k, coeff in s.terms.items():
        idx = multiset_index_list(k)
        amps[idx] += coeff / math.sqrt(len(idx))
    return DenseState(s.n, s.d, amps)


def overlap_dense(a: DenseState, b: DenseState) -> complex:
    """Inner product <a|b>, conjugate-linear in the first argument."""
    if (a.n, a.d) != (b.n, b.d):
        raise ValidationError(
            "shape mismatch: (n=%d, d=%d) vs (n=%d, d=%d)" % (a.n, a.d, b.n, b.d)
        )
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def product_to_dense(p: ProductState) -> DenseState:
    """Tensor product of the rows as a dense vector."""
    _check_dense_guard(p.n, p.d)
    amps = p.rows[0]
    for j in range(1, p.n):
        amps = np.kron(amps, p.rows[j])
    return DenseState(p.n, p.d, amps)


def _check_unitary(u, d: int) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.shape != (d, d):
        raise ValidationError("unitary must be %dx%d, got %r" % (d, d, u.shape))
    dev = np.max(np.abs(u.conj().T @ u - np.eye(d)))
    if dev > UNITARY_TOL:
        raise ValidationError("matrix is not unitary (deviation %.3e)" % dev)
    return u


def apply_symmetric_unitary(s: SymmetricState, u) -> SymmetricState:
    """Coefficients of (U (x) ... (x) U)|s> in the symmetric basis.

    Implemented by dense expansion, per-party application of u, and
    re-projection onto the Dicke basis; the residual norm outside the
    symmetric subspace must stay below 1e-10.
    """
    u = _check_unitary(u, s.d)
    _check_dense_guard(s.n, s.d)
    n, d = s.n, s.d
    tensor = symmetric_to_dense(s).amplitudes.reshape((d,) * n)
    for axis in range(n):
        tensor = np.moveaxis(np.tensordot(u, tensor, axes=(1, axis)), 0, axis)
    flat = tensor.reshape(-1)
    terms: dict[Composition, complex] = {}
    captured = 0.0
    for k in compositions(n, d):
        idx = multiset_index_list(k)
        bk = complex(flat[idx].sum() / math.sqrt(len(idx)))
        captured += abs(bk) ** 2
        if abs(bk) >= COEFF_DROP:
            terms[k] = bk
    residual = float(np.linalg.norm(flat) ** 2 - captured)
    if residual > 1e-10:
        raise ValidationError("result leaks out of the symmetric subspace (%.3e)" % residual)
    return SymmetricState(n, d, terms)


def averaged_amplitudes(p: ProductState) -> np.ndarray:
    """Root-mean-square amplitude per level across the parties.

    Returns a nonnegative d-vector whose squares sum to 1.
    """
    return np.sqrt(np.mean(np.abs(p.rows) ** 2, axis=0))


def symmetric_product_state(alpha_bar, n: int) -> SymmetricState:
    """The n-fold product of the single-party state with amplitudes alpha_bar,
    expanded in the symmetric basis: coefficient sqrt(multinomial(k)) *
    prod_i alpha_bar_i^{k_i}. Unit norm by the multinomial theorem.
    """
    a = np.asarray(alpha_bar, dtype=float)
    if a.ndim != 1 or a.size < 1:
        raise ValidationError("alpha_bar must be a vector")
    if np.any(a < -1e-12):
        raise ValidationError("alpha_bar entries must be nonnegative")
    if abs(float(np.sum(a**2)) - 1.0) > 1e-10:
        raise ValidationError("alpha_bar squares must sum to 1")
    if n < 1:
        raise ValidationError("need n >= 1")
    a = np.clip(a, 0.0, None)
    d = a.size
    terms: dict[Composition, complex] = {}
    for k in compositions(n, d):
        if any(ki > 0 and a[i] == 0.0 for i, ki in enumerate(k)):
            continue
        logc = 0.5 * log_multinomial(k) + sum(
            ki * math.log(a[i]) for i, ki in enumerate(k) if ki > 0
        )
        terms[k] = complex(math.exp(logc))
    return SymmetricState(n, d, terms)
