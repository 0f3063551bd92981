"""Band-excluded thresholding family.

Matched thresholding (BMT) picks support all at once from data correlations;
BLOT prunes a dense vector to s indices and locally optimizes them.  Both are
embedded in subspace-pursuit / CoSaMP / hard-thresholding skeletons (BLOSP,
BLOCoSaMP, BLOIHT) and their exclusion-only counterparts (BSP, BCoSaMP,
BNIHT).  Plain SP/CoSaMP come out of the same skeletons with the identity
band index.
"""

import numpy as np

from .greedy import (
    EXCLUSION_EXHAUSTED,
    RESIDUAL_BELOW_EPS,
    RESIDUAL_NONIMPROVING,
    SPARSITY_REACHED,
    RecoveryResult,
    _finish,
    local_optimization,
)
from .models import SparseSignal
from .numlin import adjoint_apply, support_solve

MAX_PURSUIT_ITERATIONS = 200


def _excluded_top(values, k, bands):
    """Up to k indices by descending value with double-band exclusion.

    Zero (or excluded-to-nothing) values stop the selection early, so an
    all-zero input yields an empty pick list.
    """
    vals = np.asarray(values, dtype=float).copy()
    mask = np.zeros(vals.size, dtype=bool)
    picks = []
    for _ in range(k):
        vals[mask] = -1.0
        pick = int(np.argmax(vals))
        if vals[pick] <= 0.0:
            break
        picks.append(pick)
        mask[bands.exclusion_band(pick)] = True
        mask[pick] = True
    return np.asarray(sorted(picks), dtype=np.intp)


def _default_eps(b, eps):
    # Algorithms 6-7 leave the residual tolerance open; default to a small
    # multiple of the data norm.
    return float(eps) if eps is not None else 1e-6 * float(np.linalg.norm(b))


def bmt(a, b, s, bands):
    """Band-excluded matched thresholding: s correlation picks against the
    fixed data vector, then one least-squares fit on the selected support."""
    if s < 1:
        raise ValueError("sparsity must be positive")
    corr = np.abs(adjoint_apply(a, b))
    support = _excluded_top(corr, s, bands)
    term = SPARSITY_REACHED if support.size == s else EXCLUSION_EXHAUSTED
    _, residual = support_solve(a, b, support)
    history = [float(np.linalg.norm(b)), float(np.linalg.norm(residual))]
    return _finish(a, b, support, history, 1, term)


def blot_support(x_dense, s, bands, a=None, b=None, lo=True):
    """Support stage of BLOT: s largest magnitudes with band exclusion,
    optionally followed by a local-optimization sweep."""
    picks = _excluded_top(np.abs(x_dense), s, bands)
    if lo and picks.size:
        picks = local_optimization(a, b, picks, bands)
    return picks


def blot(x_dense, a, b, s, bands):
    """Band-excluded, locally optimized thresholding of a dense estimate.

    Selects s indices by descending magnitude while excluding double bands,
    locally optimizes the selection, and refits amplitudes by least squares.
    An all-zero input yields an empty-support signal.
    """
    x_dense = np.asarray(x_dense)
    if x_dense.shape != (a.shape[1],):
        raise ValueError("dense input length must match the column count")
    support = blot_support(x_dense, s, bands, a=a, b=b, lo=True)
    if support.size == 0:
        return SparseSignal(support, np.zeros(0, dtype=complex))
    coeffs, _ = support_solve(a, b, support)
    return SparseSignal(support, coeffs)


def _iterate_pursuit(a, b, s, bands, eps, step):
    """Shared stopping logic of the iterative thresholding pursuits.

    ``step`` maps the previous (support, residual) to a proposed support;
    iteration quits on a residual below eps or the first non-improvement,
    returning the previous iterate in either case.
    """
    b = np.asarray(b, dtype=complex)
    eps = _default_eps(b, eps)
    b_norm = float(np.linalg.norm(b))
    history = [b_norm]
    support = np.empty(0, dtype=np.intp)
    residual = b
    termination = RESIDUAL_NONIMPROVING
    iterations = 0
    for _ in range(MAX_PURSUIT_ITERATIONS):
        if float(np.linalg.norm(residual)) <= eps:
            termination = RESIDUAL_BELOW_EPS
            break
        new_support = step(support, residual)
        _, new_residual = support_solve(a, b, new_support)
        if float(np.linalg.norm(new_residual)) >= float(np.linalg.norm(residual)):
            break
        iterations += 1
        support, residual = new_support, new_residual
        history.append(float(np.linalg.norm(residual)))
    return _finish(a, b, support, history, iterations, termination)


def blosp(a, b, s, bands, eps=None, lo=True):
    """Band-excluded, locally optimized subspace pursuit.

    Each iteration unions the current support with s band-excluded matched-
    thresholding picks on the residual, least-squares fits the union, prunes
    back to s by BLOT, and keeps going while the residual improves.
    """

    def step(support, residual):
        ident = _excluded_top(np.abs(adjoint_apply(a, residual)), s, bands)
        union = np.union1d(support, ident).astype(np.intp)
        x_union, _ = support_solve(a, b, union)
        dense = np.zeros(a.shape[1], dtype=complex)
        dense[union] = x_union
        return blot_support(dense, s, bands, a=a, b=b, lo=lo)

    return _iterate_pursuit(a, b, s, bands, eps, step)


def blocosamp(a, b, s, bands, eps=None, lo=True):
    """CoSaMP skeleton with band-excluded identification (2s picks) and
    BLOT pruning."""

    def step(support, residual):
        ident = _excluded_top(np.abs(adjoint_apply(a, residual)), 2 * s, bands)
        union = np.union1d(support, ident).astype(np.intp)
        x_union, _ = support_solve(a, b, union)
        dense = np.zeros(a.shape[1], dtype=complex)
        dense[union] = x_union
        return blot_support(dense, s, bands, a=a, b=b, lo=lo)

    return _iterate_pursuit(a, b, s, bands, eps, step)


def bloiht(a, b, s, bands, eps=None):
    """Band-excluded, locally optimized iterative hard thresholding.

    Gradient step with unit size (the dictionary columns are unit norm),
    then BLOT; quits on the first non-improving residual, returning the
    preceding iterate.
    """
    b = np.asarray(b, dtype=complex)
    eps = _default_eps(b, eps)
    m = a.shape[1]
    b_norm = float(np.linalg.norm(b))
    history = [b_norm]
    support = np.empty(0, dtype=np.intp)
    x_dense = np.zeros(m, dtype=complex)
    residual = b
    termination = RESIDUAL_NONIMPROVING
    iterations = 0
    for _ in range(MAX_PURSUIT_ITERATIONS):
        if float(np.linalg.norm(residual)) <= eps:
            termination = RESIDUAL_BELOW_EPS
            break
        grad_point = x_dense + adjoint_apply(a, residual)
        new_support = blot_support(grad_point, s, bands, a=a, b=b, lo=True)
        coeffs, new_residual = support_solve(a, b, new_support)
        if float(np.linalg.norm(new_residual)) >= float(np.linalg.norm(residual)):
            break
        iterations += 1
        support, residual = new_support, new_residual
        x_dense = np.zeros(m, dtype=complex)
        x_dense[support] = coeffs
        history.append(float(np.linalg.norm(residual)))
    return _finish(a, b, support, history, iterations, termination)


def _bniht(a, b, s, bands, eps):
    """Band-excluded normalized IHT: adaptive step size, band-excluded hard
    thresholding, no least-squares refit and no local optimization."""
    b = np.asarray(b, dtype=complex)
    eps = _default_eps(b, eps)
    m = a.shape[1]
    b_norm = float(np.linalg.norm(b))
    history = [b_norm]
    support = np.empty(0, dtype=np.intp)
    amplitudes = np.zeros(0, dtype=complex)
    x_dense = np.zeros(m, dtype=complex)
    residual = b
    termination = RESIDUAL_NONIMPROVING
    iterations = 0
    for _ in range(MAX_PURSUIT_ITERATIONS):
        if float(np.linalg.norm(residual)) <= eps:
            termination = RESIDUAL_BELOW_EPS
            break
        grad = adjoint_apply(a, residual)
        # Normalized step: restrict the gradient to the working support.
        ref = support if support.size else _excluded_top(np.abs(grad), s, bands)
        g_restricted = np.zeros(m, dtype=complex)
        g_restricted[ref] = grad[ref]
        denom = float(np.linalg.norm(a @ g_restricted) ** 2)
        mu = float(np.linalg.norm(g_restricted) ** 2) / denom if denom > 0 else 1.0
        proposal = x_dense + mu * grad
        new_support = _excluded_top(np.abs(proposal), s, bands)
        new_dense = np.zeros(m, dtype=complex)
        new_dense[new_support] = proposal[new_support]
        new_residual = b - a @ new_dense
        if float(np.linalg.norm(new_residual)) >= float(np.linalg.norm(residual)):
            break
        iterations += 1
        support, residual, x_dense = new_support, new_residual, new_dense
        amplitudes = proposal[new_support]
        history.append(float(np.linalg.norm(residual)))
    return RecoveryResult(
        estimate=SparseSignal(support, amplitudes),
        residual_norm_history=history,
        iterations=iterations,
        termination=termination,
    )


def be_only_variants(a, b, s, bands, eps=None, kind="bsp"):
    """Exclusion-only pursuits (no local optimization): BSP, BCoSaMP, BNIHT."""
    kind = kind.lower()
    if kind == "bsp":
        return blosp(a, b, s, bands, eps=eps, lo=False)
    if kind == "bcosamp":
        return blocosamp(a, b, s, bands, eps=eps, lo=False)
    if kind == "bniht":
        return _bniht(a, b, s, bands, eps)
    raise ValueError(f"unknown exclusion-only variant {kind!r}")
