"""Cross-algorithm comparisons the reference experiments report.

Paired trials throughout: every algorithm in a comparison sees the same
instances.  Sample sizes are desk scale; the thresholds were verified by
pilot runs before being frozen here.
"""

import numpy as np
import pytest

from bandex import bench
from bandex.coherence import CoherenceThreshold, build_band_index
from bandex.greedy import bloomp, bomp, loomp, omp
from bandex.metrics import score_trial
from bandex.models import (
    GridSpec,
    add_relative_noise,
    frame_model,
    make_objects,
    make_offgrid_scene,
    spectral_matrix,
    synthesize_data,
)
from bandex.thresh import be_only_variants, blosp, bmt


def _spectral_trial(seed, dr, noise, n_samples=100):
    grid = GridSpec(20, 200.0)
    sensing = spectral_matrix(n_samples, grid, seed)
    sig = make_objects(10, dr, 3.0, grid, seed + 7000)
    b = sensing.matrix @ sig.dense()
    if noise:
        b, _ = add_relative_noise(b, noise, seed + 9000)
    bands = build_band_index(sensing, CoherenceThreshold(0.3))
    return sensing, sig, b, bands


def test_band_exclusion_beats_plain_lo_off_grid():
    # at coarse refinement the gridding error is large and exclusion is what
    # keeps the locally optimized pursuit from stacking picks on one object;
    # at fine refinement the two are indistinguishable
    means = {}
    for refinement in (5, 20):
        bn = {"bloomp": [], "loomp": []}
        for seed in range(25):
            grid = GridSpec(refinement, 200.0)
            sensing = spectral_matrix(100, grid, 100 + seed)
            scene = make_offgrid_scene(10, 10.0, 3.0, 200.0, 300 + seed)
            b, _, _, _ = synthesize_data(scene, sensing, 0.05, 500 + seed)
            bands = build_band_index(sensing, CoherenceThreshold(0.3))
            for name, solver in (("bloomp", bloomp), ("loomp", loomp)):
                result = solver(sensing.matrix, b, 10, bands)
                bn[name].append(score_trial(scene, result, grid).bottleneck_rl)
        means[refinement] = {k: float(np.mean(v)) for k, v in bn.items()}
    assert means[5]["bloomp"] <= means[5]["loomp"]
    assert abs(means[20]["bloomp"] - means[20]["loomp"]) <= 0.1


def test_bomp_beats_matched_thresholding():
    # one-shot thresholding is not a stand-alone algorithm on these matrices
    wins = {"bomp": 0, "bmt": 0}
    for seed in range(25):
        sensing, sig, b, bands = _spectral_trial(800 + seed, dr=2.0, noise=0.02)
        wins["bomp"] += score_trial(
            sig, bomp(sensing.matrix, b, 10, bands), sensing.grid
        ).success
        wins["bmt"] += score_trial(
            sig, bmt(sensing.matrix, b, 10, bands), sensing.grid
        ).success
    assert wins["bomp"] >= wins["bmt"] + 10


def test_bomp_at_least_matches_bsp_under_noise_and_range():
    wins = {"bomp": 0, "bsp": 0}
    for seed in range(25):
        sensing, sig, b, bands = _spectral_trial(1300 + seed, dr=5.0, noise=0.05)
        wins["bomp"] += score_trial(
            sig, bomp(sensing.matrix, b, 10, bands), sensing.grid
        ).success
        wins["bsp"] += score_trial(
            sig,
            be_only_variants(sensing.matrix, b, 10, bands, kind="bsp"),
            sensing.grid,
        ).success
    assert wins["bomp"] >= wins["bsp"]


@pytest.mark.xfail(
    strict=False,
    reason="reference figures report the subspace-pursuit family reaching "
    "0.9 success with fewer measurements than the pursuit family at unit "
    "dynamic range; in this implementation the two families cross 0.9 at "
    "statistically indistinguishable measurement counts (pursuit slightly "
    "earlier), see the decisions ledger",
)
def test_sp_family_measurement_efficiency_ordering():
    def min_measurements(solver_name):
        for n_samples in (55, 65, 75, 85, 95):
            hits = 0
            for seed in range(20):
                sensing, sig, b, bands = _spectral_trial(
                    2100 + seed, dr=1.0, noise=0.0, n_samples=n_samples
                )
                if solver_name == "bsp":
                    result = be_only_variants(
                        sensing.matrix, b, 10, bands, kind="bsp"
                    )
                elif solver_name == "blosp":
                    result = blosp(sensing.matrix, b, 10, bands)
                elif solver_name == "bomp":
                    result = bomp(sensing.matrix, b, 10, bands)
                else:
                    result = bloomp(sensing.matrix, b, 10, bands)
                hits += score_trial(sig, result, sensing.grid).success
            if hits >= 18:  # 0.9
                return n_samples
        return 10**9

    assert min_measurements("bsp") <= min_measurements("bomp")
    assert min_measurements("blosp") <= min_measurements("bloomp")


def test_frame_analysis_coefficients_not_sparse():
    # ten well-separated objects smear into hundreds of significant
    # analysis coefficients
    rng = np.random.default_rng(1600)
    fm = frame_model(100, 200.0, 20, sigma=0.1, rng=rng)
    sig = make_objects(10, 1.0, 3.0, fm.sensing.grid, rng)
    profile = bench.analysis_coefficient_profile(fm, sig)
    assert int((profile > 0.01 * profile.max()).sum()) >= 200


def test_omp_error_decreases_with_allowed_sparsity():
    rng = np.random.default_rng(1601)
    fm = frame_model(100, 200.0, 20, sigma=0.1, rng=rng)
    sig = make_objects(10, 1.0, 3.0, fm.sensing.grid, rng)
    y = fm.psi @ sig.dense()
    b = fm.phi @ y
    errors = []
    for mult in (1, 2, 5):
        result = omp(fm.sensing.matrix, b, 10 * mult)
        y_hat = fm.psi @ result.estimate.dense(fm.psi.shape[1])
        errors.append(np.linalg.norm(y_hat - y) / np.linalg.norm(y))
    assert errors[0] > errors[1] > errors[2]
