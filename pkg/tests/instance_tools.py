"""Instance generators shared by the solver tests and the acceptance gate.

The guarantee suites need instances that *numerically verify* their
hypotheses: separation of the support bands and the range/noise inequality
of the respective guarantee.  Candidates are drawn and filtered until the
conditions hold, so every returned instance certifiably satisfies them.
"""

import math

import numpy as np
from scipy.sparse.csgraph import maximum_bipartite_matching
from scipy.sparse import csr_matrix

from bandex.coherence import CoherenceThreshold, build_band_index
from bandex.models import GridSpec, make_objects, spectral_matrix

GUARANTEE_ETA = 0.15
GUARANTEE_GRID = GridSpec(5, 40.0)
GUARANTEE_N = 1250


def _intersects(a, b):
    return np.intersect1d(a, b, assume_unique=False).size > 0


def bands_well_separated(bands, support, double=True):
    """Check band disjointness over all ordered support pairs.

    ``double=True`` checks single-vs-double band disjointness (the greedy
    guarantee hypothesis); ``double=False`` checks single-vs-single (the
    thresholding one).
    """
    support = np.asarray(support)
    for i in support:
        for j in support:
            if i == j:
                continue
            other = bands.exclusion_band(int(j)) if double else bands.band(int(j))
            if _intersects(bands.band(int(i)), other):
                return False
    return True


def greedy_condition(eta, s, dyn_range, err_norm, x_min):
    return eta * (5 * s - 4) * dyn_range + 2.5 * err_norm / x_min


def thresholding_condition(eta, s, dyn_range, err_norm, x_min):
    return eta * (2 * s - 1) * dyn_range + 2.0 * err_norm / x_min


def lo_condition_threshold(eta, s, err_norm):
    factor = 1.0 / (1.0 - eta) + math.sqrt(
        1.0 / (1.0 - eta) ** 2 + 1.0 / (1.0 - eta**2)
    )
    return (err_norm + 2.0 * (s - 1) * eta) * factor


def make_guarantee_instance(seed, s, min_sep_rl, require_double_sep):
    """Noiseless instance verified to satisfy separation plus the range
    inequality; retries seeds until both hold."""
    for attempt in range(50):
        rng = np.random.default_rng(seed + 100_000 * attempt)
        sensing = spectral_matrix(GUARANTEE_N, GUARANTEE_GRID, rng)
        signal = make_objects(s, 1.0, min_sep_rl, GUARANTEE_GRID, rng)
        bands = build_band_index(sensing, CoherenceThreshold(GUARANTEE_ETA))
        if not bands_well_separated(bands, signal.support, double=require_double_sep):
            continue
        cond = (greedy_condition if require_double_sep else thresholding_condition)(
            GUARANTEE_ETA, s, signal.dynamic_range(), 0.0, 1.0
        )
        if cond >= 1.0:
            continue
        b = sensing.matrix @ signal.dense()
        return sensing, signal, bands, b
    raise RuntimeError(f"no verified instance found from seed {seed}")


def unique_band_assignment(bands, true_support, est_support):
    """True iff every estimated index sits in the band of a unique truth.

    Builds the bipartite membership graph and checks it carries a perfect
    matching.
    """
    true_support = np.asarray(true_support)
    est_support = np.asarray(est_support)
    if est_support.size != true_support.size:
        return False
    rows, cols = [], []
    for i, est in enumerate(est_support):
        for j, true in enumerate(true_support):
            if est in bands.band(int(true)):
                rows.append(i)
                cols.append(j)
    if not rows:
        return False
    graph = csr_matrix(
        (np.ones(len(rows)), (rows, cols)),
        shape=(est_support.size, true_support.size),
    )
    match = maximum_bipartite_matching(graph, perm_type="column")
    return int((match >= 0).sum()) == true_support.size
