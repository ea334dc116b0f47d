"""Direct solution of small upper Hessenberg systems.

The restarted solvers project each shifted system onto a Krylov subspace
and solve an m x m upper Hessenberg system per shift and cycle.  These
systems are solved here by a QR factorization built from m-1 Givens
rotations followed by back substitution, which costs O(m^2) per system
instead of the O(m^3) of a general factorization.

Entries of ``H`` strictly below the first subdiagonal are never read, so
callers may pass storage whose lower triangle holds garbage.
"""

import numpy as np

from .errors import DimensionMismatch, SingularReducedSystem

__all__ = [
    "solve_hessenberg",
    "solve_shifted_hessenberg",
    "collinearity_scalar",
]

# Unit roundoff of IEEE double precision; diagonal entries of R at or
# below u * ||H||_F are treated as zero.
_UNIT_ROUNDOFF = float(np.finfo(np.float64).eps) / 2.0


def _hessenberg_part(H, dtype):
    """Writable copy of the upper Hessenberg part of ``H``.

    Uses a selection mask, so values below the first subdiagonal are
    replaced by zero without entering any arithmetic.
    """
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {H.shape}")
    return np.triu(H.astype(dtype, copy=False), k=-1).copy()


def _givens(a, b):
    """Rotation (c, s) with c real such that it maps (a, b) to (r, 0)."""
    if b == 0:
        return 1.0, b * 0.0
    na = abs(a)
    nrm = np.hypot(na, abs(b))
    if na == 0.0:
        return 0.0, np.conj(b) / abs(b)
    alpha = a / na
    return na / nrm, alpha * np.conj(b) / nrm


def _qr_solve(R, g):
    """Solve ``R0 y = g`` in place, where ``R0`` is the Hessenberg matrix
    stored in ``R`` on entry.  ``R`` and ``g`` are destroyed."""
    m = R.shape[0]
    # Rotations preserve the Frobenius norm, so the singularity threshold
    # can be fixed from the matrix as given.
    fro = np.linalg.norm(R)
    for k in range(m - 1):
        c, s = _givens(R[k, k], R[k + 1, k])
        if s != 0:
            t1 = R[k, k:].copy()
            t2 = R[k + 1, k:]
            R[k, k:] = c * t1 + s * t2
            R[k + 1, k:] = -np.conj(s) * t1 + c * t2
            gk = g[k]
            g[k] = c * gk + s * g[k + 1]
            g[k + 1] = -np.conj(s) * gk + c * g[k + 1]
    diag = np.abs(np.diagonal(R))
    if np.any(diag <= _UNIT_ROUNDOFF * fro):
        i = int(np.argmin(diag))
        raise SingularReducedSystem(
            f"triangular factor has negligible diagonal entry {diag[i]:.3e} "
            f"at position {i} (matrix norm {fro:.3e})"
        )
    y = np.empty(m, dtype=R.dtype)
    for i in range(m - 1, -1, -1):
        y[i] = (g[i] - R[i, i + 1 :] @ y[i + 1 :]) / R[i, i]
    return y


def solve_hessenberg(H, rhs):
    """Solve ``H y = rhs`` for an m x m upper Hessenberg ``H``.

    Parameters
    ----------
    H : (m, m) array_like
        Upper Hessenberg matrix; entries below the first subdiagonal are
        ignored.  Real or complex.
    rhs : (m,) array_like
        Right-hand side.

    Returns
    -------
    (m,) ndarray
        The solution.  Real inputs give a real result.

    Raises
    ------
    SingularReducedSystem
        If a diagonal entry of the triangular factor is at or below
        unit roundoff times the Frobenius norm of ``H``.
    DimensionMismatch
        If ``H`` is not square or ``rhs`` has the wrong length.
    """
    rhs = np.asarray(rhs)
    H = np.asarray(H)
    dtype = np.result_type(H.dtype, rhs.dtype, np.float64)
    R = _hessenberg_part(H, dtype)
    if rhs.ndim != 1 or rhs.shape[0] != R.shape[0]:
        raise DimensionMismatch(
            f"right-hand side of shape {rhs.shape} does not match order {R.shape[0]}"
        )
    return _qr_solve(R, rhs.astype(dtype, copy=True))


def solve_shifted_hessenberg(H, sigma, beta):
    """Solve ``(H - sigma I) y = beta e1`` without modifying ``H``.

    The shift is applied to a copy of the diagonal, so one stored ``H``
    serves every shift of a family.

    Parameters
    ----------
    H : (m, m) array_like
        Upper Hessenberg matrix; entries below the first subdiagonal are
        ignored.
    sigma : scalar
        Shift, real or complex.
    beta : scalar
        Scale of the right-hand side ``beta * e1``.

    Returns
    -------
    (m,) ndarray

    Raises
    ------
    SingularReducedSystem
        If ``H - sigma I`` is numerically singular.
    """
    H = np.asarray(H)
    dtype = np.result_type(H.dtype, type(sigma), type(beta), np.float64)
    R = _hessenberg_part(H, dtype)
    m = R.shape[0]
    idx = np.arange(m)
    R[idx, idx] -= sigma
    g = np.zeros(m, dtype=dtype)
    g[0] = beta
    return _qr_solve(R, g)


def collinearity_scalar(h_next, y):
    """Coefficient of the next basis vector in the Galerkin residual.

    After a reduced solve ``H_m y = beta e1`` the full-space residual is
    ``-h_next * y[-1]`` times the (m+1)-th basis vector, where ``h_next``
    is the subdiagonal entry ``H[m, m-1]`` of the extended Hessenberg
    matrix.  Returns that scalar.
    """
    y = np.asarray(y)
    if y.ndim != 1 or y.size == 0:
        raise DimensionMismatch("y must be a nonempty vector")
    return -h_next * y[-1]
