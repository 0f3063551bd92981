import numpy as np
import pytest

from bandex.coherence import BandIndex, CoherenceThreshold, build_band_index
from bandex.greedy import RESIDUAL_BELOW_EPS, RESIDUAL_NONIMPROVING, omp
from bandex.metrics import score_trial
from bandex.models import GridSpec, add_relative_noise, make_objects, spectral_matrix
from bandex.numlin import adjoint_apply
from bandex.thresh import (
    _excluded_top,
    be_only_variants,
    blocosamp,
    bloiht,
    blosp,
    blot,
    bmt,
)

from instance_tools import make_guarantee_instance, unique_band_assignment


def _instance(seed, s=4, dr=1.0, noise=0.0, span=100.0):
    grid = GridSpec(20, span)
    sensing = spectral_matrix(100, grid, seed)
    sig = make_objects(s, dr, 3.0, grid, seed + 1)
    b = sensing.matrix @ sig.dense()
    if noise:
        b, _ = add_relative_noise(b, noise, seed + 2)
    bands = build_band_index(sensing, CoherenceThreshold(0.3))
    return sensing, sig, b, bands


def test_bmt_single_pick_matches_omp():
    sensing, sig, b, bands = _instance(0, s=1)
    t = bmt(sensing.matrix, b, 1, bands)
    o = omp(sensing.matrix, b, 1)
    assert np.array_equal(t.estimate.support, o.estimate.support)


def test_bmt_guarantee_instances_stay_in_bands():
    for seed in range(5):
        sensing, signal, bands, b = make_guarantee_instance(
            seed + 50, s=3, min_sep_rl=8.0, require_double_sep=False
        )
        result = bmt(sensing.matrix, b, 3, bands)
        assert unique_band_assignment(bands, signal.support, result.estimate.support)


def test_excluded_top_respects_mutual_exclusion():
    sensing, sig, b, bands = _instance(1, s=5, dr=5.0, noise=0.02)
    corr = np.abs(adjoint_apply(sensing.matrix, b))
    picks = _excluded_top(corr, 5, bands)
    assert picks.size == 5
    for i in picks:
        for j in picks:
            if i != j:
                assert j not in bands.exclusion_band(int(i))


def test_excluded_top_all_zero_empty():
    bands = BandIndex.identity(8)
    assert _excluded_top(np.zeros(8), 3, bands).size == 0


def test_blot_preserves_band_separated_sparse_input():
    sensing, sig, b, bands = _instance(2, s=4, dr=3.0)
    out = blot(sig.dense(), sensing.matrix, b, 4, bands)
    assert np.array_equal(out.support, sig.support)


def test_blot_matched_filter_lands_in_bands():
    sensing, sig, b, bands = _instance(3, s=4)
    matched = adjoint_apply(sensing.matrix, b)
    out = blot(matched, sensing.matrix, b, 4, bands)
    positions = sensing.grid.position_rl(out.support)
    truth = sensing.grid.position_rl(sig.support)
    assert np.max(np.abs(np.sort(positions) - np.sort(truth))) <= 1.0


def test_blot_one_survivor_per_band():
    sensing, sig, b, bands = _instance(4, s=2)
    x = np.zeros(sensing.matrix.shape[1], complex)
    x[1000] = 1.0
    x[1002] = 1.0  # same band, equal magnitude
    out = blot(x, sensing.matrix, sensing.matrix @ x, 2, bands)
    in_band = [j for j in out.support if j in bands.exclusion_band(1000)]
    assert len(in_band) == 1


def test_blot_all_zero_input():
    sensing, sig, b, bands = _instance(5, s=2)
    out = blot(
        np.zeros(sensing.matrix.shape[1]), sensing.matrix, b, 2, bands
    )
    assert out.support.size == 0


def test_blosp_single_noiseless():
    sensing, sig, b, bands = _instance(6, s=1)
    result = blosp(sensing.matrix, b, 1, bands)
    assert np.array_equal(result.estimate.support, sig.support)
    assert result.iterations <= 2
    assert result.termination == RESIDUAL_BELOW_EPS


def test_plain_sp_fails_where_blosp_succeeds():
    sensing, sig, b, bands = _instance(7, s=6, span=200.0)
    plain = be_only_variants(
        sensing.matrix, b, 6, BandIndex.identity(sensing.matrix.shape[1]), kind="bsp"
    )
    banded = blosp(sensing.matrix, b, 6, bands)
    grid = sensing.grid
    assert not score_trial(sig, plain, grid).success
    assert score_trial(sig, banded, grid).success


def test_blocosamp_single_noiseless():
    sensing, sig, b, bands = _instance(8, s=1)
    result = blocosamp(sensing.matrix, b, 1, bands)
    assert np.array_equal(result.estimate.support, sig.support)


def test_blocosamp_close_to_blosp():
    agree = 0
    for seed in range(8):
        sensing, sig, b, bands = _instance(20 + seed, s=5, noise=0.02, span=200.0)
        a = score_trial(sig, blosp(sensing.matrix, b, 5, bands), sensing.grid)
        c = score_trial(sig, blocosamp(sensing.matrix, b, 5, bands), sensing.grid)
        agree += a.success == c.success
    assert agree >= 6


def test_bloiht_single_noiseless():
    sensing, sig, b, bands = _instance(9, s=1)
    result = bloiht(sensing.matrix, b, 1, bands)
    assert np.array_equal(result.estimate.support, sig.support)
    assert result.iterations <= 3


def test_bloiht_history_strictly_decreasing():
    sensing, sig, b, bands = _instance(10, s=5, dr=2.0, noise=0.05)
    result = bloiht(sensing.matrix, b, 5, bands)
    hist = result.residual_norm_history
    assert all(later < earlier for earlier, later in zip(hist, hist[1:]))


def test_be_only_single_noiseless_all_kinds():
    sensing, sig, b, bands = _instance(11, s=1)
    for kind in ("bsp", "bcosamp", "bniht"):
        result = be_only_variants(sensing.matrix, b, 1, bands, kind=kind)
        assert np.array_equal(result.estimate.support, sig.support), kind


def test_be_only_unknown_kind():
    sensing, sig, b, bands = _instance(12, s=1)
    with pytest.raises(ValueError):
        be_only_variants(sensing.matrix, b, 1, bands, kind="nope")


def test_blot_support_size_capped_and_filled():
    sensing, sig, b, bands = _instance(13, s=4, dr=2.0, noise=0.01)
    dense = adjoint_apply(sensing.matrix, b)
    out = blot(dense, sensing.matrix, b, 4, bands)
    assert out.support.size == 4  # plenty of admissible columns


def test_pursuits_stop_on_nonimprovement():
    sensing, sig, b, bands = _instance(14, s=5, dr=2.0, noise=0.1)
    for result in (
        blosp(sensing.matrix, b, 5, bands),
        blocosamp(sensing.matrix, b, 5, bands),
        bloiht(sensing.matrix, b, 5, bands),
    ):
        assert result.termination in (RESIDUAL_NONIMPROVING, RESIDUAL_BELOW_EPS)
        hist = result.residual_norm_history
        assert all(later < earlier for earlier, later in zip(hist, hist[1:]))
