"""Sensing ensembles, sparse test objects, noise and gridding error.

Frequencies are measured in Rayleigh lengths (RL): for time samples in
[0, 1] one RL equals unit frequency separation, and a grid refined by a
factor F has spacing 1/F RL.  All generators take an explicit seeded
``numpy.random.Generator`` (or an integer seed); there is no global RNG,
so identical seeds reproduce matrices, objects and noise bit for bit.
"""

import json
from dataclasses import dataclass

import numpy as np

MAX_PLACEMENT_ATTEMPTS = 5000


class PlacementError(RuntimeError):
    """Raised when object placement stays infeasible after bounded retries."""


@dataclass(frozen=True)
class GridSpec:
    """Fractional frequency grid: points ``p_j = j / refinement`` RL, 0-based.

    ``refinement`` is the number of grid steps per RL; ``span_rl`` the window
    length in RL.  The grid carries ``refinement * span_rl`` columns.
    """

    refinement: int
    span_rl: float

    def __post_init__(self):
        if self.refinement < 1:
            raise ValueError("refinement factor must be a positive integer")
        m = self.refinement * self.span_rl
        if abs(m - round(m)) > 1e-9 or round(m) < 1:
            raise ValueError(
                f"span {self.span_rl} RL at refinement {self.refinement} does "
                "not yield an integer number of columns"
            )

    @property
    def n_columns(self):
        return int(round(self.refinement * self.span_rl))

    def points_rl(self):
        return np.arange(self.n_columns) / self.refinement

    def position_rl(self, index):
        return np.asarray(index) / self.refinement

    def nearest_index(self, freq_rl):
        """Index of the grid point closest to ``freq_rl`` (clipped to the window)."""
        j = int(round(float(freq_rl) * self.refinement))
        return min(max(j, 0), self.n_columns - 1)


@dataclass
class SparseSignal:
    """Support indices with complex amplitudes on a grid.

    ``grid`` is None for solver outputs whose grid context lives elsewhere.
    """

    support: np.ndarray
    amplitudes: np.ndarray
    grid: GridSpec | None = None

    def __post_init__(self):
        self.support = np.asarray(self.support, dtype=np.intp)
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.support.shape != self.amplitudes.shape:
            raise ValueError("support and amplitudes must have equal length")
        if self.support.size and np.any(np.diff(self.support) <= 0):
            raise ValueError("support must be strictly increasing")

    @property
    def sparsity(self):
        return int(self.support.size)

    def dense(self, n_columns=None):
        if n_columns is None:
            if self.grid is None:
                raise ValueError("dense() needs n_columns when grid is unset")
            n_columns = self.grid.n_columns
        x = np.zeros(n_columns, dtype=complex)
        x[self.support] = self.amplitudes
        return x

    def positions_rl(self, grid=None):
        grid = grid or self.grid
        if grid is None:
            raise ValueError("positions_rl() needs a grid")
        return grid.position_rl(self.support)

    def dynamic_range(self):
        mags = np.abs(self.amplitudes)
        return float(mags.max() / mags.min())


@dataclass
class OffGridScene:
    """Point objects at continuous frequencies (RL units), off the grid."""

    frequencies_rl: np.ndarray
    amplitudes: np.ndarray

    def __post_init__(self):
        self.frequencies_rl = np.asarray(self.frequencies_rl, dtype=float)
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.frequencies_rl.shape != self.amplitudes.shape:
            raise ValueError("frequencies and amplitudes must have equal length")

    @property
    def sparsity(self):
        return int(self.frequencies_rl.size)

    def nearest_signal(self, grid):
        """Snap each object to its nearest grid point.

        Raises ValueError if two objects share a nearest grid point, which
        would break the sparsity model.
        """
        idx = np.array([grid.nearest_index(w) for w in self.frequencies_rl])
        if len(np.unique(idx)) != len(idx):
            raise ValueError("two scene frequencies snap to the same grid point")
        order = np.argsort(idx)
        return SparseSignal(idx[order], self.amplitudes[order], grid)


@dataclass
class SensingMatrix:
    """Complex N x M measurement matrix plus the grid metadata behind it."""

    matrix: np.ndarray
    grid: GridSpec
    times: np.ndarray | None = None
    kind: str = "spectral"
    seed: int | None = None

    @property
    def shape(self):
        return self.matrix.shape


@dataclass
class FrameModel:
    """Gaussian measurements of signals synthesized from a redundant DFT frame."""

    phi: np.ndarray
    psi: np.ndarray
    sensing: SensingMatrix

    @property
    def matrix(self):
        return self.sensing.matrix

    def dictionary(self):
        """The frame itself as a sensing-matrix view.

        Band structure for frame experiments is built from the dictionary:
        the coherence pattern of Phi Psi is Psi's plus zero-mean measurement
        fluctuations, and those strays are not proximity structure.
        """
        return SensingMatrix(self.psi, self.sensing.grid, kind="dft_frame")


def _as_rng(rng):
    if isinstance(rng, (int, np.integer)):
        return np.random.default_rng(int(rng)), int(rng)
    # any Generator-like object (tests use degenerate stand-ins)
    return rng, None


def spectral_matrix(n_samples, grid, rng):
    """Random-time spectral-estimation ensemble.

    Entries ``exp(-2i pi t_k p_j) / sqrt(N)`` with sample times t_k i.i.d.
    uniform in (0, 1); every column has unit norm by construction.  Pairwise
    column inner products depend only on the index separation, which the
    coherence module exploits.
    """
    if n_samples < 1:
        raise ValueError("need at least one sample")
    gen, seed = _as_rng(rng)
    times = gen.uniform(0.0, 1.0, n_samples)
    a = np.exp(-2j * np.pi * np.outer(times, grid.points_rl())) / np.sqrt(n_samples)
    return SensingMatrix(a, grid, times=times, kind="spectral", seed=seed)


def frame_model(n_samples, span_rl, refinement, sigma, rng):
    """Gaussian-measurement model: A = Phi Psi with Psi an oversampled DFT frame.

    Psi has R rows and R*F columns, entries
    ``exp(-2i pi (k-1)(j-1) / (R F)) / sqrt(R)``; Phi is N x R with i.i.d.
    real Gaussian entries of standard deviation ``sigma``.
    """
    gen, seed = _as_rng(rng)
    grid = GridSpec(refinement, span_rl)
    r = int(round(span_rl))
    if abs(span_rl - r) > 1e-9 or r < 1:
        raise ValueError("frame model needs an integer Rayleigh span")
    m = grid.n_columns
    k = np.arange(r)[:, None]
    j = np.arange(m)[None, :]
    psi = np.exp(-2j * np.pi * k * j / m) / np.sqrt(r)
    phi = gen.normal(0.0, sigma, (n_samples, r))
    a = phi @ psi
    sensing = SensingMatrix(a, grid, times=None, kind="frame", seed=seed)
    return FrameModel(phi, psi, sensing)


def _draw_amplitudes(s, dynamic_range, rng):
    if dynamic_range < 1:
        raise ValueError("dynamic range must be >= 1")
    if s == 1:
        if dynamic_range != 1:
            raise ValueError("a single object cannot realize dynamic range != 1")
        mags = np.ones(1)
    else:
        # One magnitude pinned at 1 and one at the target range so the
        # realized dynamic range is exact; the rest log-uniform in between.
        mags = np.empty(s)
        mags[0] = 1.0
        mags[1] = dynamic_range
        if s > 2:
            if dynamic_range == 1:
                mags[2:] = 1.0
            else:
                mags[2:] = np.exp(rng.uniform(0.0, np.log(dynamic_range), s - 2))
        mags = mags[rng.permutation(s)]
    phases = rng.uniform(0.0, 2 * np.pi, s)
    return mags * np.exp(1j * phases)


def make_objects(s, dynamic_range, min_sep_rl, grid, rng, circular=False):
    """Randomly phased on-grid objects with pairwise separation >= min_sep_rl.

    Magnitudes: one pinned to 1, one to ``dynamic_range``, the rest i.i.d.
    log-uniform in between, so the realized dynamic range is exact.
    Placement is uniform over the grid subject to the separation floor, by
    bounded rejection sampling.  ``circular`` also enforces the floor across
    the window seam, for dictionaries whose columns are periodic in the
    index (the oversampled DFT frame).
    """
    if s < 1:
        raise ValueError("sparsity must be positive")
    gen, _ = _as_rng(rng)
    min_steps = min_sep_rl * grid.refinement
    m = grid.n_columns
    if (s - 1) * min_steps >= m or (circular and s * min_steps >= m):
        raise PlacementError(
            f"{s} objects with separation {min_sep_rl} RL do not fit in "
            f"{grid.span_rl} RL"
        )
    for _ in range(MAX_PLACEMENT_ATTEMPTS):
        support = np.sort(gen.choice(m, size=s, replace=False))
        if s == 1:
            break
        if np.all(np.diff(support) >= min_steps):
            if not circular or m - (support[-1] - support[0]) >= min_steps:
                break
    else:
        raise PlacementError("placement rejection sampling exhausted its attempts")
    return SparseSignal(support, _draw_amplitudes(s, dynamic_range, gen), grid)


def make_consecutive_objects(s, spacing_rl, dynamic_range, grid, rng):
    """Equally spaced objects at pitch ``spacing_rl``, randomly shifted.

    Used by the resolution study; spacing below one grid step is not
    representable and raises ValueError.
    """
    gen, _ = _as_rng(rng)
    step = spacing_rl * grid.refinement
    if step < 1 - 1e-9:
        raise ValueError("object spacing falls below the grid spacing")
    extent = (s - 1) * spacing_rl
    margin = 0.5
    lo, hi = margin, grid.span_rl - margin - extent
    if hi <= lo:
        raise PlacementError("consecutive objects do not fit in the window")
    shift = gen.uniform(lo, hi)
    support = np.array(
        [grid.nearest_index(shift + i * spacing_rl) for i in range(s)]
    )
    if len(np.unique(support)) != s:
        raise ValueError("object spacing falls below the grid spacing")
    return SparseSignal(support, _draw_amplitudes(s, dynamic_range, gen), grid)


def make_offgrid_scene(s, dynamic_range, min_sep_rl, span_rl, rng, edge_margin_rl=0.5):
    """Continuous-frequency scene in [margin, span - margin) with a separation floor."""
    if s < 1:
        raise ValueError("sparsity must be positive")
    gen, _ = _as_rng(rng)
    lo, hi = edge_margin_rl, span_rl - edge_margin_rl
    if hi - lo <= (s - 1) * min_sep_rl:
        raise PlacementError(
            f"{s} objects with separation {min_sep_rl} RL do not fit in "
            f"{span_rl} RL"
        )
    for _ in range(MAX_PLACEMENT_ATTEMPTS):
        freqs = np.sort(gen.uniform(lo, hi, s))
        if s == 1 or np.all(np.diff(freqs) >= min_sep_rl):
            break
    else:
        raise PlacementError("placement rejection sampling exhausted its attempts")
    return OffGridScene(freqs, _draw_amplitudes(s, dynamic_range, gen))


def add_relative_noise(clean, noise_level, rng):
    """Circular complex Gaussian noise rescaled to an exact relative L2 level.

    Returns ``(noisy, noise)`` with ``norm(noise) == noise_level * norm(clean)``.
    """
    if noise_level < 0:
        raise ValueError("noise level must be nonnegative")
    clean = np.asarray(clean, dtype=complex)
    gen, _ = _as_rng(rng)
    if noise_level == 0:
        return clean.copy(), np.zeros_like(clean)
    raw = gen.standard_normal(clean.shape) + 1j * gen.standard_normal(clean.shape)
    noise = raw * (noise_level * np.linalg.norm(clean) / np.linalg.norm(raw))
    return clean + noise, noise


def synthesize_data(scene, sensing, noise_level, rng):
    """Measure an off-grid scene through a spectral sensing matrix.

    Returns ``(b, x_nearest, d, e)``: the data vector, the nearest-grid
    coefficient vector, the gridding error ``d = b - n - A x_nearest`` and
    the total model error ``e = b - A x_nearest = d + n``.  The noise n is
    rescaled so ``norm(n) = noise_level * norm(b - n)`` exactly.
    """
    if sensing.times is None:
        raise ValueError("synthesize_data needs a sensing matrix with sample times")
    n_samples = sensing.matrix.shape[0]
    clean = (
        np.exp(-2j * np.pi * np.outer(sensing.times, scene.frequencies_rl))
        @ scene.amplitudes
    ) / np.sqrt(n_samples)
    x_nearest = scene.nearest_signal(sensing.grid)
    b, noise = add_relative_noise(clean, noise_level, rng)
    d = clean - sensing.matrix @ x_nearest.dense()
    return b, x_nearest, d, d + noise


# ---------------------------------------------------------------------------
# JSON serialization (trial reproducibility)
#
# Complex amplitudes are stored as [re, im] pairs; grids as
# {"refinement": F, "span_rl": R}; matrices by generator seed when available,
# otherwise by their exact sample times.


def _complex_out(values):
    return [[float(v.real), float(v.imag)] for v in np.asarray(values, dtype=complex)]


def _complex_in(pairs):
    return np.array([complex(re, im) for re, im in pairs])


def grid_to_dict(grid):
    return {"refinement": grid.refinement, "span_rl": grid.span_rl}


def grid_from_dict(d):
    return GridSpec(int(d["refinement"]), float(d["span_rl"]))


def signal_to_dict(signal):
    out = {
        "support": [int(j) for j in signal.support],
        "amplitudes": _complex_out(signal.amplitudes),
    }
    if signal.grid is not None:
        out["grid"] = grid_to_dict(signal.grid)
    return out


def signal_from_dict(d):
    grid = grid_from_dict(d["grid"]) if "grid" in d else None
    return SparseSignal(np.array(d["support"]), _complex_in(d["amplitudes"]), grid)


def scene_to_dict(scene):
    return {
        "frequencies_rl": [float(w) for w in scene.frequencies_rl],
        "amplitudes": _complex_out(scene.amplitudes),
    }


def scene_from_dict(d):
    return OffGridScene(np.array(d["frequencies_rl"]), _complex_in(d["amplitudes"]))


def sensing_to_dict(sensing):
    out = {
        "kind": sensing.kind,
        "n_samples": int(sensing.matrix.shape[0]),
        "grid": grid_to_dict(sensing.grid),
    }
    if sensing.seed is not None:
        out["seed"] = int(sensing.seed)
    elif sensing.times is not None:
        out["times"] = [float(t) for t in sensing.times]
    else:
        raise ValueError("sensing matrix has neither seed nor sample times")
    return out


def sensing_from_dict(d):
    if d["kind"] != "spectral":
        raise ValueError(f"cannot rebuild sensing matrix of kind {d['kind']!r}")
    grid = grid_from_dict(d["grid"])
    if "seed" in d:
        return spectral_matrix(int(d["n_samples"]), grid, int(d["seed"]))
    times = np.array(d["times"])
    a = np.exp(-2j * np.pi * np.outer(times, grid.points_rl())) / np.sqrt(len(times))
    return SensingMatrix(a, grid, times=times, kind="spectral")


def to_json(obj):
    """Serialize a GridSpec, SparseSignal, OffGridScene or SensingMatrix."""
    for cls, tag, enc in (
        (GridSpec, "grid", grid_to_dict),
        (SparseSignal, "signal", signal_to_dict),
        (OffGridScene, "scene", scene_to_dict),
        (SensingMatrix, "sensing", sensing_to_dict),
    ):
        if isinstance(obj, cls):
            return json.dumps({"type": tag, **enc(obj)})
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def from_json(text):
    d = json.loads(text)
    dec = {
        "grid": grid_from_dict,
        "signal": signal_from_dict,
        "scene": scene_from_dict,
        "sensing": sensing_from_dict,
    }
    return dec[d.pop("type")](d)
