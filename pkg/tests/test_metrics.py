from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bandex.greedy import RecoveryResult, SPARSITY_REACHED
from bandex.metrics import bottleneck_1d, score_trial
from bandex.models import GridSpec, OffGridScene, SparseSignal


def brute_force_bottleneck(first, second):
    first = np.asarray(first, dtype=float)
    second = np.asarray(second, dtype=float)
    best = np.inf
    for perm in permutations(range(second.size)):
        best = min(best, np.max(np.abs(first - second[list(perm)])))
    return best


def test_bottleneck_identical():
    pts = np.array([0.5, 2.0, 9.0])
    assert bottleneck_1d(pts, pts) == 0.0


def test_bottleneck_shifted_pair():
    assert bottleneck_1d([1.0, 2.0], [1.5, 2.5]) == pytest.approx(0.5)


def test_bottleneck_unequal_cardinality_errors():
    with pytest.raises(ValueError):
        bottleneck_1d([1.0], [1.0, 2.0])


def test_bottleneck_matches_brute_force():
    rng = np.random.default_rng(0)
    for _ in range(40):
        a = rng.uniform(0, 10, 6)
        b = rng.uniform(0, 10, 6)
        assert bottleneck_1d(a, b) == pytest.approx(brute_force_bottleneck(a, b))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_bottleneck_metric_axioms(seed):
    rng = np.random.default_rng(seed)
    a, b, c = (rng.uniform(0, 5, 5) for _ in range(3))
    dab = bottleneck_1d(a, b)
    assert dab == pytest.approx(bottleneck_1d(b, a))  # symmetry
    assert bottleneck_1d(a, a) == 0.0  # identity
    assert dab <= bottleneck_1d(a, c) + bottleneck_1d(c, b) + 1e-12  # triangle


def test_bottleneck_permutation_invariance():
    rng = np.random.default_rng(1)
    a = rng.uniform(0, 10, 6)
    b = rng.uniform(0, 10, 6)
    assert bottleneck_1d(a, b) == bottleneck_1d(a[::-1], np.random.default_rng(2).permutation(b))


def test_bottleneck_dominates_hausdorff():
    rng = np.random.default_rng(3)
    for _ in range(30):
        a = rng.uniform(0, 10, 5)
        b = rng.uniform(0, 10, 5)
        hausdorff = max(
            max(min(abs(x - y) for y in b) for x in a),
            max(min(abs(x - y) for y in a) for x in b),
        )
        assert bottleneck_1d(a, b) >= hausdorff - 1e-12


def _result(support, amplitudes, residual_history):
    return RecoveryResult(
        estimate=SparseSignal(np.asarray(support), np.asarray(amplitudes, complex)),
        residual_norm_history=residual_history,
        iterations=len(residual_history) - 1,
        termination=SPARSITY_REACHED,
    )


def test_score_perfect_recovery():
    grid = GridSpec(10, 20.0)
    truth = SparseSignal(np.array([30, 80]), np.array([1.0, 1.0j]), grid)
    result = _result([30, 80], [1.0, 1.0j], [1.0, 0.0])
    outcome = score_trial(truth, result, grid)
    assert outcome.success
    assert outcome.bottleneck_rl == 0.0
    assert outcome.rel_residual <= 1e-10
    assert outcome.rel_coeff_error <= 1e-10


def test_score_displacement_over_threshold_fails():
    grid = GridSpec(10, 20.0)
    truth = SparseSignal(np.array([30, 80]), np.array([1.0, 1.0]), grid)
    result = _result([30, 92], [1.0, 1.0], [1.0, 0.1])  # 1.2 RL off
    outcome = score_trial(truth, result, grid)
    assert not outcome.success
    assert outcome.bottleneck_rl == pytest.approx(1.2)


def test_score_displacement_under_threshold_succeeds():
    grid = GridSpec(10, 20.0)
    truth = SparseSignal(np.array([30, 80]), np.array([1.0, 1.0]), grid)
    result = _result([30, 89], [1.0, 1.0], [1.0, 0.1])  # 0.9 RL off
    outcome = score_trial(truth, result, grid)
    assert outcome.success
    assert outcome.bottleneck_rl == pytest.approx(0.9)


def test_score_exact_threshold_is_failure():
    grid = GridSpec(10, 20.0)
    truth = SparseSignal(np.array([30]), np.array([1.0]), grid)
    result = _result([40], [1.0], [1.0, 0.1])  # exactly 1.0 RL
    assert not score_trial(truth, result, grid).success


def test_score_cardinality_deficit_is_infinite():
    grid = GridSpec(10, 20.0)
    truth = SparseSignal(np.array([30, 80]), np.array([1.0, 1.0]), grid)
    result = _result([30], [1.0], [1.0, 0.5])
    outcome = score_trial(truth, result, grid)
    assert not outcome.success
    assert outcome.bottleneck_rl == float("inf")


def test_score_offgrid_truth():
    grid = GridSpec(10, 20.0)
    scene = OffGridScene(np.array([3.04, 8.02]), np.array([1.0, 1.0 + 0j]))
    result = _result([30, 80], [1.0, 1.0], [1.0, 0.01])
    outcome = score_trial(scene, result, grid)
    assert outcome.success
    assert outcome.bottleneck_rl == pytest.approx(0.04)


def test_score_signal_error_with_frame():
    grid = GridSpec(2, 4.0)
    truth = SparseSignal(np.array([2]), np.array([1.0 + 0j]), grid)
    psi = np.eye(8, dtype=complex)[:, :8]
    y_true = psi @ truth.dense(8)
    result = _result([2], [1.0], [1.0, 0.0])
    outcome = score_trial(truth, result, grid, psi=psi, y_true=y_true)
    assert outcome.rel_signal_error <= 1e-12
