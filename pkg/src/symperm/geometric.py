"""Largest product-state overlap (geometric measure of entanglement).

Three independent routes are provided: the closed form for Dicke basis
states, permanent-based overlaps, and two numerical maximizers (a
symmetric single-row ansatz and a general per-party alternating ascent).
The general maximizer deliberately treats parties independently so it can
serve as an oracle for the symmetric-ansatz claim.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SizeLimitError, ValidationError
from .permanents import MultisetColumns, permanent_multiset
from .states import (
    Composition,
    DenseState,
    ProductState,
    SymmetricState,
    log_multinomial,
    symmetric_to_dense,
    validate_composition,
)

GENERAL_DENSE_GUARD = 2**20


@dataclass(frozen=True)
class OptimizerConfig:
    max_iterations: int = 10000
    tolerance: float = 1e-10
    restarts: int = 20
    seed: int = 0

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValidationError("max_iterations must be >= 1")
        if not self.tolerance > 0:
            raise ValidationError("tolerance must be positive")
        if self.restarts < 1:
            raise ValidationError("restarts must be >= 1")


@dataclass
class OptimizerReport:
    """Outcome of a maximization run.

    ``maximizer`` is an (n, d) row array for the general ansatz or a single
    d-vector for the symmetric ansatz. Maximizers are not unique (phase
    freedom), so comparisons should use ``lambda_max`` only.
    """

    lambda_max: float
    maximizer: np.ndarray
    iterations_used: int
    restarts_used: int
    converged: bool

    def __post_init__(self):
        if not -1e-9 <= self.lambda_max <= 1 + 1e-9:
            raise ValidationError("lambda_max %.6e outside [0, 1]" % self.lambda_max)


def build_overlap_matrix(p: ProductState, k) -> MultisetColumns:
    """Columns (alpha_{1,i}, ..., alpha_{n,i})^T with multiplicity k_i,
    skipping levels with k_i = 0."""
    k = validate_composition(k)
    if len(k) != p.d or sum(k) != p.n:
        raise ValidationError(
            "composition %r incompatible with product state (n=%d, d=%d)" % (k, p.n, p.d)
        )
    cols = tuple(
        (p.rows[:, i].copy(), ki) for i, ki in enumerate(k) if ki > 0
    )
    return MultisetColumns(p.n, cols)


def overlap_via_permanent(p: ProductState, k) -> complex:
    """Overlap <S(n,k)|phi> as a scaled permanent of the column-multiset matrix.

    The Dicke coefficients are real, so no conjugation is applied to the
    product-state amplitudes.
    """
    k = validate_composition(k)
    per = permanent_multiset(build_overlap_matrix(p, k))
    scale = math.exp(0.5 * log_multinomial(k) - math.lgamma(p.n + 1))
    return per * scale


def lambda_closed_form(k) -> float:
    """Largest product-state overlap of the Dicke basis state for composition k.

    Evaluated in the log domain (log-gamma) so large n does not overflow:
    sqrt(n!/prod k_i!) * prod_{k_i>0} (k_i/n)^{k_i/2}.
    """
    k = validate_composition(k)
    n = sum(k)
    log_val = 0.5 * log_multinomial(k)
    for ki in k:
        if ki > 0:
            log_val += 0.5 * ki * (math.log(ki) - math.log(n))
    return math.exp(log_val)


def lambda_qubit(n: int, k: int) -> float:
    """Two-level special case: composition (k, n-k)."""
    if n < 1:
        raise ValidationError("need n >= 1")
    if not 0 <= k <= n:
        raise ValidationError("need 0 <= k <= n, got k=%d n=%d" % (k, n))
    return lambda_closed_form((k, n - k))


def e_sin2(lam: float) -> float:
    """Entanglement as 1 - lambda^2."""
    if not 0 <= lam <= 1 + 1e-12:
        raise ValidationError("lambda must lie in [0, 1]")
    return 1.0 - min(lam, 1.0) ** 2


def e_log(lam: float) -> float:
    """Entanglement as -2 log2 lambda; undefined at lambda = 0."""
    if not 0 < lam <= 1 + 1e-12:
        raise ValidationError("lambda must lie in (0, 1]")
    val = -2.0 * math.log2(min(lam, 1.0))
    return val if val != 0 else 0.0


def _random_unit_vector(rng: np.random.Generator, d: int) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def _symmetric_overlap_and_gradient(weights, alpha):
    """Overlap G = sum_k w_k prod_l conj(alpha_l)^{k_l} and dG/d conj(alpha).

    ``weights`` is a list of (composition array, q_k * sqrt(multinomial)).
    """
    beta = np.conj(alpha)
    d = beta.size
    overlap = 0j
    grad = np.zeros(d, dtype=complex)
    for karr, w in weights:
        # per-level powers; 0^0 = 1
        powers = np.ones(d, dtype=complex)
        nz = karr > 0
        powers[nz] = beta[nz] ** karr[nz]
        prod_all = w * np.prod(powers)
        overlap += prod_all
        for l in np.nonzero(nz)[0]:
            if beta[l] != 0:
                grad[l] += prod_all * karr[l] / beta[l]
            else:
                others = np.prod(np.delete(powers, l))
                grad[l] += w * karr[l] * (beta[l] ** (karr[l] - 1)) * others
    return overlap, grad


def maximize_symmetric(s: SymmetricState, cfg: OptimizerConfig | None = None) -> OptimizerReport:
    """Best overlap with an n-fold copy of a single d-level state.

    Fixed-point iteration (higher-order power method): the row is replaced
    by the normalized contraction of the state with n-1 copies of the row.
    The contraction is rotated by the conjugate phase of the current
    overlap and mixed with a unit positive shift, which removes the phase
    drift and local stalls of the plain power map. Restart i is seeded
    with seed + i; non-convergence is reported, never raised.
    """
    cfg = cfg or OptimizerConfig()
    n, d = s.n, s.d
    weights = [
        (np.asarray(k, dtype=int), coeff * math.exp(0.5 * log_multinomial(k)))
        for k, coeff in s.terms.items()
    ]
    best_lam = -1.0
    best_alpha = None
    best_iters = 0
    best_converged = False
    for r in range(cfg.restarts):
        rng = np.random.default_rng(cfg.seed + r)
        alpha = _random_unit_vector(rng, d)
        lam_prev = abs(_symmetric_overlap_and_gradient(weights, alpha)[0])
        converged = False
        iters = cfg.max_iterations
        shift = 1.0
        for it in range(1, cfg.max_iterations + 1):
            overlap, grad = _symmetric_overlap_and_gradient(weights, alpha)
            c = grad / n
            if abs(overlap) > 0:
                c = c * np.conj(overlap) / abs(overlap)
            c = c + shift * alpha
            nrm = np.linalg.norm(c)
            if nrm < 1e-300:
                alpha = _random_unit_vector(rng, d)
                continue
            alpha = c / nrm
            lam = abs(_symmetric_overlap_and_gradient(weights, alpha)[0])
            if abs(lam - lam_prev) < cfg.tolerance:
                converged = True
                iters = it
                lam_prev = lam
                break
            lam_prev = lam
        if lam_prev > best_lam:
            best_lam = lam_prev
            best_alpha = alpha
            best_iters = iters
            best_converged = converged
    return OptimizerReport(
        lambda_max=min(best_lam, 1.0 + 1e-12),
        maximizer=best_alpha,
        iterations_used=best_iters,
        restarts_used=cfg.restarts,
        converged=best_converged,
    )


def _contract_except(tensor: np.ndarray, conj_rows: np.ndarray, skip: int) -> np.ndarray:
    """Contract every party slot except ``skip`` with the matching conjugated row."""
    n = tensor.ndim
    result = tensor
    for i in range(n - 1, -1, -1):
        if i == skip:
            continue
        result = np.tensordot(result, conj_rows[i], axes=(i, 0))
    return result


def maximize_general(v: DenseState, cfg: OptimizerConfig | None = None) -> OptimizerReport:
    """Best overlap with an arbitrary product state by alternating ascent.

    Each sweep replaces one party's row with the normalized contraction of
    the state against all other rows, which cannot decrease the overlap;
    parties are treated independently even for symmetric inputs.
    """
    cfg = cfg or OptimizerConfig()
    n, d = v.n, v.d
    if d**n > GENERAL_DENSE_GUARD:
        raise SizeLimitError(
            "dense dimension %d^%d exceeds optimizer guard %d" % (d, n, GENERAL_DENSE_GUARD)
        )
    tensor = v.amplitudes.reshape((d,) * n)
    best_lam = -1.0
    best_rows = None
    best_iters = 0
    best_converged = False
    for r in range(cfg.restarts):
        rng = np.random.default_rng(cfg.seed + r)
        rows = np.stack([_random_unit_vector(rng, d) for _ in range(n)])
        lam_prev = 0.0
        lam = 0.0
        converged = False
        iters = cfg.max_iterations
        for sweep in range(1, cfg.max_iterations + 1):
            for j in range(n):
                c = _contract_except(tensor, np.conj(rows), j)
                nrm = np.linalg.norm(c)
                if nrm < 1e-300:
                    rows[j] = _random_unit_vector(rng, d)
                    continue
                rows[j] = c / nrm
                lam = float(nrm)
            if abs(lam - lam_prev) < cfg.tolerance:
                converged = True
                iters = sweep
                break
            lam_prev = lam
        if lam > best_lam:
            best_lam = lam
            best_rows = rows.copy()
            best_iters = iters
            best_converged = converged
    return OptimizerReport(
        lambda_max=min(best_lam, 1.0 + 1e-12),
        maximizer=best_rows,
        iterations_used=best_iters,
        restarts_used=cfg.restarts,
        converged=best_converged,
    )


def conjecture_gap(s: SymmetricState, cfg: OptimizerConfig | None = None) -> float:
    """Lambda(general ansatz) - Lambda(symmetric ansatz) for the same state.

    May be slightly negative from optimizer noise; a magnitude below the
    test tolerance supports restricting to the symmetric ansatz.
    """
    cfg = cfg or OptimizerConfig()
    dense = symmetric_to_dense(s)
    lam_general = maximize_general(dense, cfg).lambda_max
    lam_symmetric = maximize_symmetric(s, cfg).lambda_max
    return lam_general - lam_symmetric
