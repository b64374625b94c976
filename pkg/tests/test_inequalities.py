import math

import numpy as np
import pytest

from symperm import (
    OptimizerConfig,
    ProductState,
    SymmetricState,
    ValidationError,
    check_averaging_bound,
    check_cll,
    check_maclaurin,
    probe_general_inequality,
    run_trials,
)
from symperm.inequalities import (
    SLACK_TOL,
    random_product_state,
    random_symmetric_state,
    random_unit_columns,
)


def test_cll_identity_equality():
    rec = check_cll(np.eye(2))
    assert rec.lhs == pytest.approx(1)
    assert rec.rhs == pytest.approx(1)
    assert rec.holds and rec.equality


def test_cll_all_ones_extremal():
    for n in (3, 5):
        m = np.ones((n, n)) / math.sqrt(n)
        rec = check_cll(m)
        assert rec.holds
        assert abs(rec.slack) <= SLACK_TOL
        assert rec.lhs == pytest.approx(math.factorial(n) / n ** (n / 2))


def test_cll_random_holds():
    rng = np.random.default_rng(101)
    for seed in range(300):
        rec = check_cll(random_unit_columns(6, rng), instance_seed=seed)
        assert rec.holds


def test_averaging_identical_rows_equality():
    row = np.array([0.6, 0.8])
    p = ProductState(np.tile(row, (3, 1)))
    rec = check_averaging_bound(p, (2, 1))
    assert rec.holds
    assert abs(rec.slack) <= SLACK_TOL


def test_averaging_random_holds():
    rng = np.random.default_rng(103)
    for _ in range(200):
        p = random_product_state(3, 2, rng)
        rec = check_averaging_bound(p, (2, 1))
        assert rec.holds


def test_averaging_single_level():
    rng = np.random.default_rng(107)
    p = random_product_state(4, 2, rng)
    rec = check_averaging_bound(p, (4, 0))
    assert rec.holds
    assert rec.lhs == pytest.approx(abs(np.prod(p.rows[:, 0])))


def test_maclaurin_equal_entries():
    rec = check_maclaurin(np.full(5, 0.7), 3)
    assert abs(rec.slack) <= SLACK_TOL
    assert rec.lhs == pytest.approx(0.7**3)


def test_maclaurin_simple():
    rec = check_maclaurin(np.array([1.0, 0.0]), 1)
    assert rec.lhs == pytest.approx(0.5)
    assert rec.rhs == pytest.approx(0.5)


def test_maclaurin_random_holds():
    rng = np.random.default_rng(109)
    for _ in range(300):
        x = rng.uniform(0, 1, 8)
        rec = check_maclaurin(x, 3)
        assert rec.holds


def test_maclaurin_validation():
    with pytest.raises(ValidationError):
        check_maclaurin(np.array([-1.0, 1.0]), 1)
    with pytest.raises(ValidationError):
        check_maclaurin(np.ones(4), 5)


def test_probe_single_term_reduces_to_averaging():
    rng = np.random.default_rng(113)
    p = random_product_state(3, 2, rng)
    q = SymmetricState(3, 2, {(2, 1): 1.0})
    probe = probe_general_inequality(q, p)
    direct = check_averaging_bound(p, (2, 1))
    assert probe.lhs == pytest.approx(direct.lhs, abs=1e-12)
    assert probe.rhs == pytest.approx(direct.rhs, abs=1e-12)


def test_probe_nonnegative_holds():
    rng = np.random.default_rng(127)
    for _ in range(100):
        q = random_symmetric_state(3, 2, rng, nonnegative=True)
        rows = np.abs(rng.standard_normal((3, 2))) + 0.05
        rows /= np.linalg.norm(rows, axis=1, keepdims=True)
        rec = probe_general_inequality(q, ProductState(rows))
        assert rec.holds


def test_probe_optimized_rhs_never_violated():
    cfg = OptimizerConfig(restarts=6, seed=5, tolerance=1e-12)
    summary = run_trials("probe-optimized", trials=60, seed=999, d=2, cfg=cfg)
    assert summary.violations == 0


def test_probe_averaged_rhs_reports_only():
    # complex-coefficient counterexamples to the fixed averaging choice are
    # collected as data, not treated as failures
    summary = run_trials("probe", trials=100, seed=7, d=2, keep_records=True)
    assert summary.trials == 100
    assert len(summary.records) == 100
    assert summary.violations == len(summary.violating)


def test_run_trials_cll_suite():
    summary = run_trials("cll", trials=500, seed=2024)
    assert summary.violations == 0
    assert summary.min_slack >= -SLACK_TOL


def test_run_trials_replayable():
    summary = run_trials("averaging", trials=50, seed=31, d=3, keep_records=True)
    rec = summary.records[17]
    rng = np.random.default_rng(rec.instance_seed)
    n = int(rng.integers(2, 9))
    p = random_product_state(n, 3, rng)
    k = tuple(int(v) for v in rng.multinomial(n, [1 / 3] * 3))
    replay = check_averaging_bound(p, k, instance_seed=rec.instance_seed)
    assert replay == rec


def test_run_trials_unknown_target():
    with pytest.raises(ValidationError):
        run_trials("nonsense", trials=1)
