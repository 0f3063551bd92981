"""Complex-valued L1 solvers: Lasso, basis pursuit (equality and denoising),
the frame-adapted analysis variant, and BLOT post-processing of dense
estimates.

Matrix-free proximal schemes throughout: a monotone FISTA for the Lasso and
operator-splitting (ADMM) for the constrained programs, with the small
Cholesky factors the splittings need cached per call.
"""

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .greedy import SPARSITY_REACHED, RecoveryResult
from .numlin import adjoint_apply, matvec
from .thresh import blot

LAMBDA_RULES = ("half_sqrt_logM", "sqrt_2logM", "explicit")


@dataclass
class L1Config:
    """Lasso configuration: regularization rule, noise scale, iteration budget.

    ``lambda_rule`` resolves against the column count M using the natural
    logarithm: ``0.5*sqrt(log M)``, ``sqrt(2 log M)``, or an explicit value.
    """

    lambda_rule: str = "half_sqrt_logM"
    lambda_value: float | None = None
    sigma: float = 0.0
    max_iters: int = 20000
    tol: float = 1e-10

    def __post_init__(self):
        if self.lambda_rule not in LAMBDA_RULES:
            raise ValueError(f"unknown lambda rule {self.lambda_rule!r}")
        if self.lambda_rule == "explicit":
            if self.lambda_value is None or self.lambda_value < 0:
                raise ValueError("explicit rule needs a nonnegative lambda_value")
        if self.sigma < 0:
            raise ValueError("sigma must be nonnegative")

    def resolve_lambda(self, m):
        if self.lambda_rule == "half_sqrt_logM":
            return 0.5 * math.sqrt(math.log(m))
        if self.lambda_rule == "sqrt_2logM":
            return math.sqrt(2.0 * math.log(m))
        return float(self.lambda_value)


@dataclass
class L1Result:
    """Dense coefficient estimate plus solver diagnostics."""

    coeffs: np.ndarray
    converged: bool
    iterations: int
    objective: float = float("nan")


def soft_threshold(v, tau):
    """Complex soft threshold: phase kept, magnitude shrunk by tau (floored at 0)."""
    v = np.asarray(v, dtype=complex)
    mags = np.abs(v)
    scale = np.maximum(1.0 - tau / np.maximum(mags, np.finfo(float).tiny), 0.0)
    return v * scale


def lasso(a, b, cfg, objective_trace=None):
    """Minimize ``0.5 ||b - A z||^2 + lambda sigma ||z||_1`` (monotone FISTA).

    Accelerated proximal gradient with backtracking: the step size adapts to
    the local curvature (the global Lipschitz constant of a coherent Gram is
    pessimistic by orders of magnitude), a failed majorization shrinks it,
    and a step that would raise the objective restarts the momentum instead,
    so the sequence of accepted objectives never increases.  Stops on
    relative objective change below ``cfg.tol``; if the budget runs out
    first the result carries ``converged=False``.
    """
    a = np.asarray(a)
    b = np.asarray(b, dtype=complex)
    m = a.shape[1]
    weight = cfg.resolve_lambda(m) * cfg.sigma

    def objective(z, rz):
        return 0.5 * float(np.linalg.norm(rz) ** 2) + weight * float(
            np.abs(z).sum()
        )

    # Unit-norm columns make an O(1) step a good opening guess.
    step = 1.0
    x = np.zeros(m, dtype=complex)
    ax = np.zeros_like(b)
    y, ay = x, ax
    t = 1.0
    obj = objective(x, b)
    if objective_trace is not None:
        objective_trace.append(obj)
    converged = False
    iterations = 0
    for iterations in range(1, cfg.max_iters + 1):
        r_y = b - ay
        f_y = 0.5 * float(np.linalg.norm(r_y) ** 2)
        grad = -adjoint_apply(a, r_y)
        u = soft_threshold(y - step * grad, step * weight)
        au = a @ u
        f_u = 0.5 * float(np.linalg.norm(b - au) ** 2)
        diff = u - y
        quad = (
            f_y
            + float(np.real(np.vdot(grad, diff)))
            + 0.5 / step * float(np.linalg.norm(diff) ** 2)
        )
        if f_u > quad * (1.0 + 1e-12) + 1e-15:
            step *= 0.5  # majorization failed: local curvature exceeds 1/step
            continue
        obj_u = f_u + weight * float(np.abs(u).sum())
        if obj_u <= obj:
            t_new = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * t * t))
            y = u + ((t - 1.0) / t_new) * (u - x)
            ay = au + ((t - 1.0) / t_new) * (au - ax)
            x, ax, t = u, au, t_new
            change = obj - obj_u
            obj = obj_u
            if objective_trace is not None:
                objective_trace.append(obj)
            step = min(step * 1.02, 16.0)
            if change <= cfg.tol * max(1.0, abs(obj)):
                converged = True
                break
        elif t > 1.0:
            # Momentum overshot: restart from the last accepted iterate.
            y, ay, t = x, ax, 1.0
        else:
            step *= 0.5
    return L1Result(coeffs=x, converged=converged, iterations=iterations,
                    objective=obj)


def _ball_project(v, center, radius):
    gap = v - center
    dist = float(np.linalg.norm(gap))
    if dist <= radius:
        return v
    return center + gap * (radius / dist)


def _check_feasible(a, b, eps_data):
    # Only an overdetermined system can place b outside the reachable set.
    if a.shape[0] <= a.shape[1]:
        return
    _, res = np.linalg.lstsq(a, b, rcond=None)[:2]
    dist = math.sqrt(float(res[0])) if res.size else 0.0
    if dist > eps_data + 1e-8 * float(np.linalg.norm(b)):
        raise ValueError(
            f"constraint infeasible: distance from data to the range is {dist:.3e}"
        )


def basis_pursuit(a, b, eps_data=0.0, tol=1e-8, max_iters=20000, rho=None):
    """L1 minimization under the data constraint (ADMM).

    ``eps_data == 0`` solves equality-constrained basis pursuit with exactly
    feasible iterates (projection onto the affine set each step);
    ``eps_data > 0`` solves the denoising variant ``||A z - b|| <= eps_data``.
    """
    a = np.asarray(a)
    b = np.asarray(b, dtype=complex)
    if eps_data < 0:
        raise ValueError("eps_data must be nonnegative")
    n, m = a.shape
    b_norm = float(np.linalg.norm(b))
    if b_norm == 0.0 or eps_data >= b_norm:
        return L1Result(np.zeros(m, dtype=complex), True, 0, 0.0)
    _check_feasible(a, b, eps_data)
    if n > m and eps_data == 0.0:
        # Full-column-rank equality constraints pin the solution.
        z = np.linalg.lstsq(a, b, rcond=None)[0]
        return L1Result(z, True, 0, float(np.abs(z).sum()))
    scale = b_norm / math.sqrt(n)
    rho = rho if rho is not None else 1.0 / scale
    if eps_data == 0.0:
        return _bp_equality(a, b, tol, max_iters, rho)
    return _bp_ball(a, b, eps_data, tol, max_iters, rho)


_RELAX = 1.7  # ADMM over-relaxation


def _bp_equality(a, b, tol, max_iters, rho):
    n, m = a.shape
    gram = a @ a.conj().T
    gram[np.diag_indices(n)] += 1e-12 * np.trace(gram).real / n
    factor = scipy.linalg.cho_factor(gram, check_finite=False)

    def project(v):
        return v - adjoint_apply(
            a, scipy.linalg.cho_solve(factor, a @ v - b, check_finite=False)
        )

    w = np.zeros(m, dtype=complex)
    u = np.zeros(m, dtype=complex)
    z = project(w)
    converged = False
    iterations = 0
    for iterations in range(1, max_iters + 1):
        z = project(w - u)
        z_rel = _RELAX * z + (1.0 - _RELAX) * w
        w_old = w
        w = soft_threshold(z_rel + u, 1.0 / rho)
        u = u + z_rel - w
        primal = float(np.linalg.norm(z - w))
        dual = rho * float(np.linalg.norm(w - w_old))
        ref = max(float(np.linalg.norm(z)), float(np.linalg.norm(w)), 1e-30)
        if primal <= tol * ref and dual <= tol * ref * rho:
            converged = True
            break
        if iterations % 10 == 0:
            # Residual balancing keeps the splitting well scaled.
            if primal > 10 * dual / rho:
                rho *= 2.0
                u /= 2.0
            elif dual / rho > 10 * primal:
                rho /= 2.0
                u *= 2.0
    # z is exactly feasible; report it.
    return L1Result(z, converged, iterations, float(np.abs(z).sum()))


def _bp_ball(a, b, eps_data, tol, max_iters, rho):
    n, m = a.shape
    gram = a @ a.conj().T
    gram[np.diag_indices(n)] += 1.0
    factor = scipy.linalg.cho_factor(gram, check_finite=False)

    def solve_z(rhs):
        # (I + A*A)^{-1} rhs via the Woodbury identity on the small Gram.
        return rhs - adjoint_apply(
            a, scipy.linalg.cho_solve(factor, a @ rhs, check_finite=False)
        )

    w = np.zeros(m, dtype=complex)
    v = b.copy()
    u1 = np.zeros(m, dtype=complex)
    u2 = np.zeros(n, dtype=complex)
    z = np.zeros(m, dtype=complex)
    converged = False
    iterations = 0
    for iterations in range(1, max_iters + 1):
        z = solve_z((w - u1) + adjoint_apply(a, v - u2))
        az = a @ z
        z_rel = _RELAX * z + (1.0 - _RELAX) * w
        az_rel = _RELAX * az + (1.0 - _RELAX) * v
        w_old, v_old = w, v
        w = soft_threshold(z_rel + u1, 1.0 / rho)
        v = _ball_project(az_rel + u2, b, eps_data)
        u1 = u1 + z_rel - w
        u2 = u2 + az_rel - v
        primal = math.hypot(
            float(np.linalg.norm(z - w)), float(np.linalg.norm(az - v))
        )
        dual = rho * math.hypot(
            float(np.linalg.norm(w - w_old)), float(np.linalg.norm(v - v_old))
        )
        ref = max(float(np.linalg.norm(z)), float(np.linalg.norm(w)), 1e-30)
        if primal <= tol * ref and dual <= tol * ref * rho:
            converged = True
            break
        if iterations % 10 == 0:
            if primal > 10 * dual / rho:
                rho *= 2.0
                u1 /= 2.0
                u2 /= 2.0
            elif dual / rho > 10 * primal:
                rho /= 2.0
                u1 *= 2.0
                u2 *= 2.0
    return L1Result(w, converged, iterations, float(np.abs(w).sum()))


def analysis_bp(phi, psi, b, eps_data=0.0, tol=1e-8, max_iters=20000, rho=None):
    """Analysis-form basis pursuit: minimize ``||Psi* z||_1`` subject to
    ``||Phi z - b|| <= eps_data``, over signal-space z.

    Exploits the tight-frame identity Psi Psi* = F I (oversampled DFT frame),
    so the inner solve is a fixed R x R Cholesky.
    """
    phi = np.asarray(phi, dtype=complex)
    psi = np.asarray(psi)
    b = np.asarray(b, dtype=complex)
    if eps_data < 0:
        raise ValueError("eps_data must be nonnegative")
    n, r = phi.shape
    m = psi.shape[1]
    b_norm = float(np.linalg.norm(b))
    if b_norm == 0.0 or eps_data >= b_norm:
        return L1Result(np.zeros(r, dtype=complex), True, 0, 0.0)
    _check_feasible(phi, b, eps_data)
    frame_bound = m / r  # Psi Psi* = (M/R) I for the oversampled DFT frame
    system = frame_bound * np.eye(r, dtype=complex) + phi.conj().T @ phi
    factor = scipy.linalg.cho_factor(system, check_finite=False)
    rho = rho if rho is not None else math.sqrt(n) / b_norm

    w = np.zeros(m, dtype=complex)
    v = b.copy()
    u1 = np.zeros(m, dtype=complex)
    u2 = np.zeros(n, dtype=complex)
    z = np.zeros(r, dtype=complex)
    converged = False
    iterations = 0
    for iterations in range(1, max_iters + 1):
        rhs = psi @ (w - u1) + phi.conj().T @ (v - u2)
        z = scipy.linalg.cho_solve(factor, rhs, check_finite=False)
        psi_z = psi.conj().T @ z
        phi_z = phi @ z
        psi_rel = _RELAX * psi_z + (1.0 - _RELAX) * w
        phi_rel = _RELAX * phi_z + (1.0 - _RELAX) * v
        w_old, v_old = w, v
        w = soft_threshold(psi_rel + u1, 1.0 / rho)
        v = _ball_project(phi_rel + u2, b, eps_data) if eps_data > 0 else b
        u1 = u1 + psi_rel - w
        u2 = u2 + phi_rel - v
        primal = math.hypot(
            float(np.linalg.norm(psi_z - w)), float(np.linalg.norm(phi_z - v))
        )
        dual = rho * math.hypot(
            float(np.linalg.norm(w - w_old)), float(np.linalg.norm(v - v_old))
        )
        ref = max(float(np.linalg.norm(psi_z)), float(np.linalg.norm(w)), 1e-30)
        if primal <= tol * ref and dual <= tol * ref * rho:
            converged = True
            break
        if iterations % 10 == 0:
            if primal > 10 * dual / rho:
                rho *= 2.0
                u1 /= 2.0
                u2 /= 2.0
            elif dual / rho > 10 * primal:
                rho /= 2.0
                u1 *= 2.0
                u2 *= 2.0
    return L1Result(z, converged, iterations, float(np.abs(psi.conj().T @ z).sum()))


def blot_postprocess(z_dense, a, b, s, bands):
    """Prune a dense L1 estimate to an s-sparse reconstruction via BLOT."""
    estimate = blot(z_dense, a, b, s, bands)
    residual = b - matvec(a, estimate.dense(a.shape[1]))
    history = [float(np.linalg.norm(b)), float(np.linalg.norm(residual))]
    return RecoveryResult(
        estimate=estimate,
        residual_norm_history=history,
        iterations=1,
        termination=SPARSITY_REACHED,
    )
