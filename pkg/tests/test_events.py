import math

import numpy as np
import pytest

from dmlab.calibration import SPARSE_HEAVYTAIL_C, SPARSE_SUBGAUSSIAN_C
from dmlab.ensembles import EnsembleSpec, sample_matrix
from dmlab.events import (
    PowerIterationError,
    check_event_A,
    singular_extremes,
    sparse_supremum,
)


def test_extremes_orthonormal_and_diagonal():
    assert singular_extremes(np.eye(5)) == (1.0, 1.0)
    smin, smax = singular_extremes(np.diag([3.0, 1.0]))
    assert smin == pytest.approx(1.0, rel=1e-8)
    assert smax == pytest.approx(3.0, rel=1e-8)


def test_power_iteration_matches_full_decomposition():
    rng = np.random.default_rng(0)
    for shape in ((40, 12), (12, 40), (64, 64)):
        M = rng.standard_normal(shape)
        sv = np.linalg.svd(M, compute_uv=False)
        smin, smax = singular_extremes(M)
        assert abs(smax - sv[0]) / sv[0] <= 1e-6
        assert abs(smin - sv[-1]) <= 1e-6 * sv[0]


def test_extremes_large_side_uses_shifted_iteration():
    rng = np.random.default_rng(1)
    M = rng.standard_normal((90, 70))  # min(dims) > 64
    sv = np.linalg.svd(M, compute_uv=False)
    smin, smax = singular_extremes(M)
    assert abs(smax - sv[0]) / sv[0] <= 1e-6
    # shifted iteration plateaus once Rayleigh increments fall below tol
    assert abs(smin - sv[-1]) / sv[-1] <= 2e-3


def test_extremes_zero_matrix():
    smin, smax = singular_extremes(np.zeros((3, 5)))
    assert (smin, smax) == (0.0, 0.0)


def test_power_iteration_error_carries_residual():
    # near-degenerate top pair stalls convergence at a tiny iteration cap
    M = np.diag([1.0, 1.0 - 1e-13, 0.5])
    with pytest.raises(PowerIterationError) as exc_info:
        singular_extremes(M, tol=1e-14, max_iter=2)
    assert exc_info.value.residual >= 0.0


def test_bai_yin_interval_gaussian():
    vals_max, vals_min = [], []
    for seed in range(10):
        M = np.random.default_rng(seed).standard_normal((20, 2000))
        smin, smax = singular_extremes(M)
        vals_max.append(smax / math.sqrt(2000))
        vals_min.append(smin / math.sqrt(2000))
    assert 1.05 <= np.median(vals_max) <= 1.15
    assert 0.85 <= np.median(vals_min) <= 0.95


def test_sparse_identity_columns():
    s = sparse_supremum(np.eye(6), 2, method="exact")
    assert s.value == pytest.approx(1.0, rel=1e-12)
    assert s.support == (0, 1)  # lexicographic tie-break
    assert np.count_nonzero(s.witness) == 1  # top singular vector is an axis


def test_sparse_full_support_equals_operator_norm():
    X = np.random.default_rng(2).standard_normal((6, 9))
    s = sparse_supremum(X, 9)
    assert s.method == "exact"
    assert s.value == pytest.approx(np.linalg.svd(X, compute_uv=False)[0], rel=1e-7)


def test_sparse_exact_budget_error_mentions_greedy():
    X = np.zeros((4, 60))
    with pytest.raises(ValueError, match="greedy"):
        sparse_supremum(X, 20, method="exact")


def test_sparse_witness_realizes_value():
    X = np.random.default_rng(3).standard_normal((5, 12))
    s = sparse_supremum(X, 3, method="exact")
    assert np.linalg.norm(s.witness) == pytest.approx(1.0, rel=1e-12)
    assert np.linalg.norm(X @ s.witness) == pytest.approx(s.value, rel=1e-9)
    assert np.count_nonzero(s.witness) <= 3


def test_greedy_below_exact_and_usually_tight():
    hits = 0
    for seed in range(10):
        X = np.random.default_rng(seed).standard_normal((6, 14))
        ex = sparse_supremum(X, 3, method="exact")
        gr = sparse_supremum(X, 3, method="greedy", restarts=20, seed=seed)
        assert gr.value <= ex.value + 1e-9
        hits += gr.value >= 0.95 * ex.value
    assert hits >= 9


def test_sparse_validation():
    X = np.zeros((3, 5))
    with pytest.raises(ValueError):
        sparse_supremum(X, 0)
    with pytest.raises(ValueError):
        sparse_supremum(X, 6)
    with pytest.raises(ValueError):
        sparse_supremum(X, 2, method="magic")


def test_event_zero_matrix_holds():
    rep = check_event_A(np.zeros((4, 40)), kappa1=2.0, delta=0.2, theta=0.2, seed=0)
    assert rep.event_a_holds
    assert rep.kappa1_measured == 0.0


def test_event_single_heavy_column_fails():
    m = 40
    cols = np.zeros((4, m))
    cols[0, 0] = 2.0 * math.sqrt(m)
    rep = check_event_A(cols, kappa1=2.0, delta=0.24, theta=0.1, seed=0)
    assert not rep.event_a_holds
    assert rep.sparse_sup[max(1, rep.k_event)] >= 2.0 * math.sqrt(m) - 1e-9


def test_event_parameter_validation():
    X = np.zeros((2, 8))
    for kwargs in ({"theta": 0.3}, {"delta": 0.3}, {"kappa1": 0.5}):
        full = {"kappa1": 2.0, "delta": 0.2, "theta": 0.2, **kwargs}
        with pytest.raises(ValueError):
            check_event_A(X, **full)


def test_event_profile_monotone_and_exact_endpoint():
    X = sample_matrix(EnsembleSpec("UniformIsotropic", 8, 64, vector_axis="cols"), 5)
    rep = check_event_A(X, kappa1=2.0, delta=0.2, theta=0.2, seed=1)
    ks = sorted(rep.sparse_sup)
    vals = [rep.sparse_sup[k] for k in ks]
    assert all(a <= b + 1e-9 for a, b in zip(vals, vals[1:]))
    assert rep.sparse_sup[64] == pytest.approx(rep.lambda_max * 8.0, rel=1e-12)
    assert rep.sparse_methods[64] == "exact"
    assert rep.k_event == int(0.2 * 64)


def test_event_vacuous_sparsity_reduces_to_operator_norm():
    # floor(theta m) = 0: only a = 0 is feasible, the sparse condition holds
    X = sample_matrix(EnsembleSpec("LogConcaveSimplex", 8, 64, vector_axis="cols"), 7)
    rep = check_event_A(X, kappa1=2.0, delta=0.01, theta=1e-4, seed=2)
    assert rep.k_event == 0
    assert rep.event_a_holds == (rep.kappa1_measured <= 2.0)


def test_subgaussian_sparse_scaling_on_desk_grid():
    for d, m in ((6, 32), (8, 64), (12, 128)):
        for k in (1, 2, 4):
            for seed in range(3):
                X = sample_matrix(EnsembleSpec("UniformIsotropic", d, m,
                                               vector_axis="cols"), 1000 + seed)
                val = sparse_supremum(X, k, method="greedy", restarts=8, seed=seed).value
                scale = math.sqrt(d + k * math.log(math.e * m / k))
                assert val <= SPARSE_SUBGAUSSIAN_C * scale


def test_heavy_tailed_sparse_scaling_on_desk_grid():
    for d, m in ((6, 32), (8, 64), (12, 128)):
        for k in (1, 2, 4):
            for seed in range(3):
                X = sample_matrix(EnsembleSpec("HeavyTailedBounded", d, m,
                                               vector_axis="cols"), 2000 + seed)
                val = sparse_supremum(X, k, method="greedy", restarts=8, seed=seed).value
                ref = np.linalg.norm(X, axis=0).max() + (m * k) ** 0.25  # beta = 1
                assert val <= SPARSE_HEAVYTAIL_C * ref
