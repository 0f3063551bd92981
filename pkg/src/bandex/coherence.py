"""Pairwise/mutual coherence and the eta-coherence-band index structure.

The band of a column collects every column whose normalized inner product
with it exceeds a threshold eta; double bands (bands of bands) are what the
band-exclusion rule avoids.  For closely spaced experiments the threshold
policy is replaced by fixed radii in RL, with separate radii for the
exclusion rule and the local-optimization search.
"""

from dataclasses import dataclass

import numpy as np

from .models import SensingMatrix

_GRAM_BLOCK = 512


@dataclass(frozen=True)
class CoherenceThreshold:
    """Band policy: column l belongs to the band of k iff mu(k, l) > eta."""

    eta: float

    def __post_init__(self):
        if not 0 < self.eta < 1:
            raise ValueError("eta must lie in (0, 1)")


@dataclass(frozen=True)
class FixedRadius:
    """Band policy by grid distance: exclusion radius and LO radius, in RL."""

    r_be_rl: float
    r_lo_rl: float

    def __post_init__(self):
        if self.r_be_rl < 0 or self.r_lo_rl < 0:
            raise ValueError("band radii must be nonnegative")


def _column_norms(a):
    norms = np.linalg.norm(a, axis=0)
    if np.any(norms == 0):
        raise ValueError("matrix has a zero column")
    return norms


def pairwise_coherence(a, k, l):
    """Normalized inner-product magnitude between columns k and l, in [0, 1]."""
    a = np.asarray(a)
    ck, cl = a[:, k], a[:, l]
    nk, nl = np.linalg.norm(ck), np.linalg.norm(cl)
    if nk == 0 or nl == 0:
        raise ValueError("coherence of a zero column is undefined")
    return float(min(abs(np.vdot(ck, cl)) / (nk * nl), 1.0))


def mutual_coherence(a):
    """Maximum pairwise coherence over all column pairs (blockwise)."""
    a = np.asarray(a)
    m = a.shape[1]
    if m < 2:
        raise ValueError("mutual coherence needs at least two columns")
    norms = _column_norms(a)
    best = 0.0
    for lo in range(0, m, _GRAM_BLOCK):
        hi = min(lo + _GRAM_BLOCK, m)
        blk = np.abs(a[:, lo:hi].conj().T @ a) / np.outer(norms[lo:hi], norms)
        blk[np.arange(lo, hi) - lo, np.arange(lo, hi)] = 0.0
        best = max(best, float(blk.max()))
    return min(best, 1.0)


class BandIndex:
    """Precomputed coherence-band structure over the columns of one matrix.

    Single bands always contain their own column and are symmetric
    (l in band(k) iff k in band(l)).  Bands are clipped at the window
    boundary; there is no wraparound.
    """

    def __init__(self, m, policy, *, bands=None, width_be=None, width_lo=None,
                 eta=None):
        self.m = int(m)
        self.policy = policy
        self.eta = eta
        self._bands = bands
        self._width_be = width_be
        self._width_lo = width_lo
        self._double_cache = {}

    # -- construction helpers -------------------------------------------------

    @classmethod
    def identity(cls, m):
        """Trivial index: every band is the column itself (no real exclusion)."""
        return cls(m, FixedRadius(0.0, 0.0), width_be=0, width_lo=0)

    # -- queries ---------------------------------------------------------------

    def _window(self, k, width):
        return np.arange(max(k - width, 0), min(k + width, self.m - 1) + 1)

    def band(self, k):
        """Single band of column k: the LO search set, includes k."""
        if self._bands is not None:
            return self._bands[k]
        return self._window(k, self._width_lo)

    def band_of_set(self, support):
        """Union of the single bands of every member of ``support``."""
        support = np.asarray(support, dtype=np.intp)
        if support.size == 0:
            return np.empty(0, dtype=np.intp)
        return np.unique(np.concatenate([self.band(int(k)) for k in support]))

    def double_band(self, support):
        """Band of the band: the union of single bands of band_of_set."""
        return self.band_of_set(self.band_of_set(support))

    def exclusion_band(self, k):
        """Indices barred from selection once column k has been picked.

        Double band under a coherence threshold; the dedicated exclusion
        radius under a fixed-radius policy.
        """
        if self._bands is None:
            return self._window(k, self._width_be)
        k = int(k)
        cached = self._double_cache.get(k)
        if cached is None:
            cached = self.band_of_set(self._bands[k])
            self._double_cache[k] = cached
        return cached

    def exclusion_set(self, support):
        support = np.asarray(support, dtype=np.intp)
        if support.size == 0:
            return np.empty(0, dtype=np.intp)
        return np.unique(
            np.concatenate([self.exclusion_band(int(k)) for k in support])
        )

    def exclusion_mask(self, support, out=None):
        """Boolean mask over columns excluded by the current support."""
        if out is None:
            out = np.zeros(self.m, dtype=bool)
        else:
            out[:] = False
        for k in np.asarray(support, dtype=np.intp):
            out[self.exclusion_band(int(k))] = True
        return out

    def band_sizes(self):
        if self._bands is not None:
            return np.array([len(b) for b in self._bands])
        return np.array([len(self._window(k, self._width_lo)) for k in range(self.m)])

    def main_lobe_half_width(self, k):
        """Largest w with every neighbour within w steps of k inside band(k).

        Far sidelobe members do not count; this is the half width of the
        contiguous correlation lobe around the diagonal.
        """
        members = set(int(i) for i in self.band(k))
        w = 0
        while (k + w + 1 in members) and (k - w - 1 in members):
            w += 1
        return w


def _threshold_bands_from_gram(a, eta):
    a = np.asarray(a)
    m = a.shape[1]
    norms = _column_norms(a)
    bands = []
    for lo in range(0, m, _GRAM_BLOCK):
        hi = min(lo + _GRAM_BLOCK, m)
        blk = np.abs(a[:, lo:hi].conj().T @ a) / np.outer(norms[lo:hi], norms)
        blk[np.arange(lo, hi) - lo, np.arange(lo, hi)] = 1.0  # self-coherence
        for row in range(hi - lo):
            bands.append(np.nonzero(blk[row] > eta)[0].astype(np.intp))
    return bands


_TRANSLATION_INVARIANT_KINDS = ("spectral", "dft_frame")


def _threshold_bands_translation_invariant(sensing, eta):
    # Column inner products of the random-time spectral ensemble and of the
    # oversampled DFT frame depend only on the index separation, so one
    # correlation profile gives every band.
    a = sensing.matrix
    m = a.shape[1]
    norms = _column_norms(a)
    profile = np.abs(a.conj().T @ a[:, 0]) / (norms * norms[0])
    offsets = np.nonzero(profile > eta)[0]
    bands = []
    for k in range(m):
        idx = np.unique(np.concatenate((k - offsets, k + offsets)))
        bands.append(idx[(idx >= 0) & (idx < m)].astype(np.intp))
    return bands


def build_band_index(target, policy, grid=None):
    """Build a BandIndex for a matrix (or SensingMatrix) under a band policy.

    Fixed-radius policies need grid metadata to convert RL radii into index
    widths, so ``target`` must then be a SensingMatrix or ``grid`` given.
    """
    sensing = target if isinstance(target, SensingMatrix) else None
    a = sensing.matrix if sensing is not None else np.asarray(target)
    m = a.shape[1]
    if isinstance(policy, CoherenceThreshold):
        if sensing is not None and sensing.kind in _TRANSLATION_INVARIANT_KINDS:
            bands = _threshold_bands_translation_invariant(sensing, policy.eta)
        else:
            bands = _threshold_bands_from_gram(a, policy.eta)
        return BandIndex(m, policy, bands=bands, eta=policy.eta)
    if isinstance(policy, FixedRadius):
        grid = grid or (sensing.grid if sensing is not None else None)
        if grid is None:
            raise ValueError("fixed-radius bands need grid metadata")
        f = grid.refinement
        return BandIndex(
            m,
            policy,
            width_be=int(np.floor(policy.r_be_rl * f + 1e-9)),
            width_lo=int(np.floor(policy.r_lo_rl * f + 1e-9)),
        )
    raise TypeError(f"unknown band policy {policy!r}")


def coherence_profile(target, max_separation_rl=3.0):
    """Mean pairwise coherence as a function of column separation.

    Returns ``(separation_rl, mean_coherence)`` for separations from 0 to
    ``max_separation_rl`` in grid steps; the half cross-section of the
    coherence pattern around the diagonal.
    """
    sensing = target if isinstance(target, SensingMatrix) else None
    if sensing is None:
        raise TypeError("coherence_profile needs a SensingMatrix (grid metadata)")
    a = sensing.matrix
    m = a.shape[1]
    f = sensing.grid.refinement
    width = min(int(round(max_separation_rl * f)), m - 1)
    norms = _column_norms(a)
    mean = np.empty(width + 1)
    mean[0] = 1.0
    for delta in range(1, width + 1):
        dots = np.abs(np.einsum("ij,ij->j", a[:, :-delta].conj(), a[:, delta:]))
        mean[delta] = float(np.mean(dots / (norms[:-delta] * norms[delta:])))
    return np.arange(width + 1) / f, mean
