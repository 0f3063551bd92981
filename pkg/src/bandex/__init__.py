"""Sparse recovery on unresolved grids via band exclusion and local optimization.

The sensing matrices produced by discretizing a continuum estimation problem
below the Rayleigh threshold are highly coherent: every column is nearly
parallel to its grid neighbours.  The solvers in this package restrict greedy
and thresholding selections to stay outside the coherence band of what has
already been selected (band exclusion), and re-place each selected index
within its band by residual-minimizing least squares (local optimization).
A config-driven Monte-Carlo harness benchmarks the algorithm family.
"""

__version__ = "0.1.0"

from . import bench, coherence, greedy, l1, metrics, models, numlin, thresh

__all__ = [
    "bench",
    "coherence",
    "greedy",
    "l1",
    "metrics",
    "models",
    "numlin",
    "thresh",
    "__version__",
]
