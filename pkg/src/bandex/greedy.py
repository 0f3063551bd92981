"""Greedy pursuit family: OMP, band-excluded OMP, local optimization,
and the locally optimized variants (LOOMP, BLOOMP).

All solvers are pure functions of (matrix, data, band index); ties in the
matching step break toward the lowest index so runs are reproducible.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .models import SparseSignal
from .numlin import support_solve

SPARSITY_REACHED = "sparsity_reached"
RESIDUAL_BELOW_EPS = "residual_below_eps"
RESIDUAL_NONIMPROVING = "residual_nonimproving"
EXCLUSION_EXHAUSTED = "exclusion_exhausted"

# Relative residual level treated as an exact fit, stopping further picks.
EXACT_FIT_RTOL = 1e-12


@dataclass
class RecoveryResult:
    """Sparse estimate plus the per-iteration residual-norm trace.

    ``selection_trace`` records, for matching-pursuit style solvers, each
    picked index together with the support it was matched against.
    """

    estimate: SparseSignal
    residual_norm_history: list
    iterations: int
    termination: str
    selection_trace: list = field(default_factory=list)

    @property
    def residual_norm(self):
        return self.residual_norm_history[-1]

    @property
    def relative_residual(self):
        first = self.residual_norm_history[0]
        return self.residual_norm / first if first > 0 else 0.0

    def to_json(self):
        return json.dumps(
            {
                "type": "recovery_result",
                "support": [int(j) for j in self.estimate.support],
                "amplitudes": [
                    [float(v.real), float(v.imag)] for v in self.estimate.amplitudes
                ],
                "residual_norm_history": [float(r) for r in self.residual_norm_history],
                "iterations": self.iterations,
                "termination": self.termination,
            }
        )


def _finish(a, b, support, history, iterations, termination, trace=None):
    support = np.asarray(sorted(support), dtype=np.intp)
    if support.size:
        coeffs, _ = support_solve(a, b, support)
    else:
        coeffs = np.zeros(0, dtype=complex)
    return RecoveryResult(
        estimate=SparseSignal(support, coeffs),
        residual_norm_history=history,
        iterations=iterations,
        termination=termination,
        selection_trace=trace or [],
    )


def local_optimization(a, b, support, bands):
    """One residual-reduction sweep over ``support``, in ascending order.

    Each index is re-placed anywhere in its band (the index itself included,
    so the step can never increase the residual): every candidate swap is
    scored by the restricted least-squares residual with the other indices
    held fixed, and the best swap is kept.  Candidates colliding with other
    current indices are skipped to preserve the support size.

    Returns the optimized support as a sorted array.
    """
    original = np.asarray(sorted(support), dtype=np.intp)
    if original.size == 0:
        return original
    if original.size > a.shape[0]:
        raise ValueError("support larger than the number of rows")
    current = list(original)
    for n in range(len(current)):
        i = current[n]
        others = np.array(current[:n] + current[n + 1 :], dtype=np.intp)
        cand = bands.band(int(i))
        if others.size:
            cand = cand[~np.isin(cand, others)]
        if cand.size == 0:
            continue
        # Restricted-LS residual of (others u {j}) for every candidate j at
        # once: project b and the candidate columns off span(A_others), then
        # ||r(j)||^2 = ||Pb||^2 - |<Pa_j, Pb>|^2 / ||Pa_j||^2.
        if others.size:
            q, _ = np.linalg.qr(a[:, others])
            pb = b - q @ (q.conj().T @ b)
            pc = a[:, cand] - q @ (q.conj().T @ a[:, cand])
        else:
            pb = b
            pc = a[:, cand]
        sq_norms = np.einsum("ij,ij->j", pc.conj(), pc).real
        gains = np.abs(pc.conj().T @ pb) ** 2
        tol = (max(a.shape[0], others.size + 1) * np.finfo(float).eps) ** 2
        scores = np.where(sq_norms > tol, gains / np.maximum(sq_norms, tol), 0.0)
        current[n] = int(cand[np.argmax(scores)])
    optimized = np.asarray(sorted(current), dtype=np.intp)
    # The swap scores are least-squares identities, but guard the monotone
    # contract exactly: fall back to the input if rounding lost it.
    _, r_new = support_solve(a, b, optimized)
    _, r_old = support_solve(a, b, original)
    if np.linalg.norm(r_new) > np.linalg.norm(r_old):
        return original
    return optimized


def _pursuit(a, b, s, bands=None, band_exclude=False, lo=False):
    a = np.asarray(a)
    b = np.asarray(b, dtype=complex)
    n, m = a.shape
    if s > n:
        raise ValueError(f"sparsity {s} exceeds the number of rows {n}")
    if (band_exclude or lo) and bands is None:
        raise ValueError("band-excluded / locally optimized pursuit needs bands")
    b_norm = float(np.linalg.norm(b))
    history = [b_norm]
    support = []
    residual = b
    termination = SPARSITY_REACHED
    iterations = 0
    if b_norm == 0.0:
        return _finish(a, b, support, history, 0, RESIDUAL_BELOW_EPS)
    mask = np.zeros(m, dtype=bool)
    trace = []
    for _ in range(s):
        corr = np.abs(a.conj().T @ residual)
        if band_exclude:
            bands.exclusion_mask(support, out=mask)
        else:
            mask[:] = False
            mask[support] = True
        corr[mask] = -1.0
        pick = int(np.argmax(corr))
        if corr[pick] < 0:
            termination = EXCLUSION_EXHAUSTED
            break
        trace.append((pick, tuple(support)))
        iterations += 1
        support = sorted(support + [pick])
        if lo:
            support = list(local_optimization(a, b, support, bands))
        _, residual = support_solve(a, b, np.asarray(support, dtype=np.intp))
        history.append(float(np.linalg.norm(residual)))
        if history[-1] <= EXACT_FIT_RTOL * b_norm:
            termination = RESIDUAL_BELOW_EPS
            break
    return _finish(a, b, support, history, iterations, termination, trace)


def omp(a, b, s):
    """Orthogonal matching pursuit: correlation pick, refit, residual update."""
    return _pursuit(a, b, s)


def bomp(a, b, s, bands):
    """Band-excluded OMP: the matching step never enters the double band
    of anything already selected."""
    return _pursuit(a, b, s, bands=bands, band_exclude=True)


def loomp(a, b, s, bands):
    """Locally optimized OMP: like BLOOMP but excluding only the selected
    indices themselves."""
    return _pursuit(a, b, s, bands=bands, band_exclude=False, lo=True)


def bloomp(a, b, s, bands):
    """Band-excluded, locally optimized OMP: band exclusion in the matching
    step and a local-optimization sweep of the augmented support each
    iteration."""
    return _pursuit(a, b, s, bands=bands, band_exclude=True, lo=True)
