"""Dense complex linear algebra shared by every solver.

Conventions, fixed once and used everywhere:

* inner product ``<u, v> = sum(conj(u) * v)`` (``np.vdot``), conjugate-linear
  in the first argument;
* matrices are 2-d complex ndarrays in C (row-major) order;
* supports are arrays of 0-based column indices.
"""

import numpy as np
import scipy.linalg

_EPS = np.finfo(float).eps


def matvec(a, x):
    """Exact matrix-vector product ``a @ x`` with a dimension check."""
    a = np.asarray(a)
    x = np.asarray(x)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {a.shape}")
    if x.shape != (a.shape[1],):
        raise ValueError(f"dimension mismatch: matrix {a.shape} vs vector {x.shape}")
    return a @ x


def adjoint_apply(a, r):
    """Matched filter ``a* r``: conjugate transpose applied to ``r``.

    Component j equals ``<a_j, r>`` under the package inner-product
    convention (conjugate-linear in the column).
    """
    a = np.asarray(a)
    r = np.asarray(r)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {a.shape}")
    if r.shape != (a.shape[0],):
        raise ValueError(f"dimension mismatch: matrix {a.shape} vs vector {r.shape}")
    return a.conj().T @ r


def rank_tolerance(a):
    """Relative cutoff for treating column submatrices as rank deficient."""
    return max(a.shape) * _EPS


def restricted_least_squares(a, b, support):
    """Minimize ``||a z - b||_2`` over z supported on ``support``.

    Solved on the column submatrix by QR with column pivoting (LAPACK
    ``gelsy``); a numerically rank-deficient submatrix yields the
    minimum-norm minimizer instead of an error.

    Args:
        a: sensing matrix, shape (n, m).
        b: data vector, shape (n,).
        support: column indices; an empty support returns the zero vector.

    Returns:
        ``(x, residual)`` where ``x`` is the dense length-m minimizer with
        ``supp(x) <= support`` and ``residual = b - a @ x``.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    support = np.asarray(support, dtype=np.intp)
    m = a.shape[1]
    if support.size == 0:
        return np.zeros(m, dtype=complex), b.astype(complex, copy=True)
    if support.size > a.shape[0]:
        raise ValueError(
            f"support of size {support.size} exceeds row count {a.shape[0]}"
        )
    coeffs, residual = support_solve(a, b, support)
    x = np.zeros(m, dtype=complex)
    x[support] = coeffs
    return x, residual


def support_solve(a, b, support):
    """Least-squares coefficients on ``support`` plus the residual vector."""
    support = np.asarray(support, dtype=np.intp)
    if support.size == 0:
        return np.zeros(0, dtype=complex), np.asarray(b, dtype=complex).copy()
    sub = a[:, support]
    coeffs = scipy.linalg.lstsq(
        sub,
        b,
        cond=rank_tolerance(sub),
        lapack_driver="gelsy",
        check_finite=False,
    )[0]
    return coeffs, b - sub @ coeffs
