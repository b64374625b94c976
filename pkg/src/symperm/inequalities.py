"""Property checks for the permanent inequalities used by the closed-form
results: the Carlen-Lieb-Loss column-norm bound, the averaged-matrix
bound, the Maclaurin step, and the exploratory generalized inequality.

Every checker returns an :class:`InequalityRecord` with exact left/right
sides; theorem checkers must never report a violation (a violation means
an implementation bug), while the generalized probe only collects them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import SizeLimitError, ValidationError
from .geometric import (
    OptimizerConfig,
    conjecture_gap,
    maximize_symmetric,
    overlap_via_permanent,
)
from .permanents import as_square_matrix, permanent_ryser
from .states import (
    ProductState,
    SymmetricState,
    averaged_amplitudes,
    compositions,
    log_multinomial,
    validate_composition,
)

SLACK_TOL = 1e-12
CLL_ORDER_LIMIT = 12
GAP_TOL = 1e-6


@dataclass(frozen=True)
class InequalityRecord:
    lhs: float
    rhs: float
    holds: bool
    slack: float
    instance_seed: int

    def __post_init__(self):
        if not math.isfinite(self.slack):
            raise ValidationError("slack must be finite")

    @property
    def equality(self) -> bool:
        return abs(self.slack) <= SLACK_TOL


def _record(lhs: float, rhs: float, seed: int) -> InequalityRecord:
    lhs = float(lhs)
    rhs = float(rhs)
    return InequalityRecord(
        lhs=lhs,
        rhs=rhs,
        holds=lhs <= rhs + SLACK_TOL,
        slack=rhs - lhs,
        instance_seed=int(seed),
    )


def check_cll(m, instance_seed: int = 0) -> InequalityRecord:
    """|per(F)| <= (n!/n^(n/2)) * prod of column L2 norms."""
    a = as_square_matrix(m)
    n = a.shape[0]
    if n > CLL_ORDER_LIMIT:
        raise SizeLimitError("order %d exceeds exact-permanent limit %d" % (n, CLL_ORDER_LIMIT))
    lhs = abs(permanent_ryser(a))
    col_norms = np.linalg.norm(a, axis=0)
    rhs = math.factorial(n) / n ** (n / 2) * float(np.prod(col_norms))
    return _record(lhs, rhs, instance_seed)


def check_averaging_bound(p: ProductState, k, instance_seed: int = 0) -> InequalityRecord:
    """|<S(n,k)|phi>| <= sqrt(multinomial(k)) * prod_i abar_i^{k_i}
    with abar the per-level RMS amplitudes of phi."""
    k = validate_composition(k)
    if p.n > 12:
        raise SizeLimitError("n=%d too large for exact overlap check" % p.n)
    lhs = abs(overlap_via_permanent(p, k))
    abar = averaged_amplitudes(p)
    log_rhs = 0.5 * log_multinomial(k)
    for i, ki in enumerate(k):
        if ki > 0:
            if abar[i] == 0.0:
                return _record(lhs, 0.0, instance_seed)
            log_rhs += ki * math.log(abar[i])
    return _record(lhs, math.exp(log_rhs), instance_seed)


def check_maclaurin(x, k: int, instance_seed: int = 0) -> InequalityRecord:
    """Normalized elementary symmetric mean of degree k is at most the
    arithmetic mean to the k-th power. Exact subset enumeration, n <= 10."""
    x = np.asarray(x, dtype=float)
    n = x.size
    if x.ndim != 1 or n < 1:
        raise ValidationError("x must be a nonempty vector")
    if np.any(x < 0):
        raise ValidationError("x entries must be nonnegative")
    if not 1 <= k <= n:
        raise ValidationError("need 1 <= k <= n")
    if n > 10:
        raise SizeLimitError("n=%d exceeds enumeration limit 10" % n)
    ek = math.fsum(math.prod(x[list(c)]) for c in combinations(range(n), k))
    lhs = ek / math.comb(n, k)
    rhs = float(np.mean(x)) ** k
    return _record(lhs, rhs, instance_seed)


def probe_general_inequality(
    q: SymmetricState,
    p: ProductState,
    rhs_mode: str = "averaged",
    cfg: OptimizerConfig | None = None,
    instance_seed: int = 0,
) -> InequalityRecord:
    """Candidate bound |<psi|phi>| <= |<psi|phi_bar>| for a general
    symmetric state psi (coefficients q) and product state phi.

    ``rhs_mode='averaged'`` builds phi_bar from the per-level RMS
    amplitudes of phi; counterexamples to that specific choice are
    research data, to be reported rather than asserted. ``'optimized'``
    instead takes the best symmetric product state, which must dominate.
    """
    if (q.n, q.d) != (p.n, p.d):
        raise ValidationError("state and product shapes differ")
    if q.n > 10:
        raise SizeLimitError("n=%d too large for exact probe" % q.n)
    lhs_sum = 0j
    for k, coeff in q.terms.items():
        lhs_sum += np.conj(coeff) * overlap_via_permanent(p, k)
    lhs = abs(lhs_sum)
    if rhs_mode == "averaged":
        abar = averaged_amplitudes(p)
        rhs_sum = 0j
        for k, coeff in q.terms.items():
            log_term = 0.5 * log_multinomial(k)
            term = 1.0
            for i, ki in enumerate(k):
                if ki > 0:
                    term *= abar[i] ** ki
            rhs_sum += np.conj(coeff) * math.exp(log_term) * term
        rhs = abs(rhs_sum)
    elif rhs_mode == "optimized":
        rhs = maximize_symmetric(q, cfg or OptimizerConfig()).lambda_max
    else:
        raise ValidationError("rhs_mode must be 'averaged' or 'optimized'")
    return _record(lhs, rhs, instance_seed)


# ---------------------------------------------------------------------------
# Random instance generators and trial runners (shared by tests and the CLI)
# ---------------------------------------------------------------------------


def random_unit_columns(n: int, rng: np.random.Generator) -> np.ndarray:
    """n x n complex matrix with columns uniform on the complex unit sphere."""
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return a / np.linalg.norm(a, axis=0, keepdims=True)


def random_product_state(n: int, d: int, rng: np.random.Generator) -> ProductState:
    rows = rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d))
    rows /= np.linalg.norm(rows, axis=1, keepdims=True)
    return ProductState(rows)


def random_composition(n: int, d: int, rng: np.random.Generator) -> tuple[int, ...]:
    return tuple(int(v) for v in rng.multinomial(n, [1.0 / d] * d))


def random_symmetric_state(
    n: int, d: int, rng: np.random.Generator, nonnegative: bool = False
) -> SymmetricState:
    comps = compositions(n, d)
    if nonnegative:
        coeffs = rng.uniform(0.0, 1.0, len(comps))
    else:
        coeffs = rng.standard_normal(len(comps)) + 1j * rng.standard_normal(len(comps))
    coeffs = coeffs / np.linalg.norm(coeffs)
    return SymmetricState(n, d, dict(zip(comps, coeffs)))


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed d x d unitary via QR with phase fixing."""
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    qmat, rmat = np.linalg.qr(z)
    phases = np.diag(rmat) / np.abs(np.diag(rmat))
    return qmat * phases


@dataclass
class TrialSummary:
    target: str
    trials: int
    violations: int
    min_slack: float
    records: list[InequalityRecord]
    violating: list[InequalityRecord]


def run_trials(
    target: str,
    trials: int,
    seed: int = 0,
    n: int | None = None,
    d: int = 2,
    gap_tol: float = GAP_TOL,
    cfg: OptimizerConfig | None = None,
    keep_records: bool = False,
) -> TrialSummary:
    """Run seeded random instances of one inequality family.

    Targets: 'cll', 'averaging', 'maclaurin', 'probe' (averaged rhs),
    'probe-optimized', 'conjecture'. When ``n`` is None a per-trial size is
    drawn from the target's default range. Trial t uses seed + t, so any
    violation can be replayed exactly.
    """
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    records: list[InequalityRecord] = []
    violating: list[InequalityRecord] = []
    min_slack = math.inf
    for t in range(trials):
        s = seed + t
        rng = np.random.default_rng(s)
        if target == "cll":
            nn = n if n is not None else int(rng.integers(2, 9))
            rec = check_cll(random_unit_columns(nn, rng), instance_seed=s)
        elif target == "averaging":
            nn = n if n is not None else int(rng.integers(2, 9))
            p = random_product_state(nn, d, rng)
            rec = check_averaging_bound(p, random_composition(nn, d, rng), instance_seed=s)
        elif target == "maclaurin":
            nn = n if n is not None else int(rng.integers(2, 9))
            x = rng.uniform(0.0, 1.0, nn)
            kk = int(rng.integers(1, nn + 1))
            rec = check_maclaurin(x, kk, instance_seed=s)
        elif target in ("probe", "probe-optimized"):
            nn = n if n is not None else 3
            q = random_symmetric_state(nn, d, rng)
            p = random_product_state(nn, d, rng)
            mode = "averaged" if target == "probe" else "optimized"
            rec = probe_general_inequality(q, p, rhs_mode=mode, cfg=cfg, instance_seed=s)
        elif target == "conjecture":
            nn = n if n is not None else 3
            state = random_symmetric_state(nn, d, rng, nonnegative=(t % 2 == 0))
            if t % 2 == 1:
                from .states import apply_symmetric_unitary

                state = apply_symmetric_unitary(state, random_unitary(d, rng))
            gap = conjecture_gap(state, cfg or OptimizerConfig())
            rec = _record(abs(gap), gap_tol, s)
        else:
            raise ValidationError("unknown trial target %r" % target)
        min_slack = min(min_slack, rec.slack)
        if not rec.holds:
            violating.append(rec)
        if keep_records:
            records.append(rec)
    return TrialSummary(
        target=target,
        trials=trials,
        violations=len(violating),
        min_slack=min_slack,
        records=records,
        violating=violating,
    )
