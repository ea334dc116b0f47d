"""Matrix-function actions via rational approximation.

A quadrature rule discretizing a contour integral representation turns
``f(A) u0`` into a short sum of resolvents,

    f(A) u0  ~=  sum_j  w_j * (z_j I + A)^{-1} u0,

whose poles ``-z_j`` are exactly one family of shifted systems.  The
whole action is then computed by :func:`~shiftkrylov.solvers.solve_shifted_hessen`
at the basis cost of a single system.

Supported integrands are the exponential ``exp(-t A) u0`` and the
Mittag-Leffler function ``E_gamma(-t^gamma A) u0`` that propagates
fractional-in-time diffusion; a rule file makes no reference to ``t``
because time enters by scaling the operator.  Reference values for
validation come from a dense eigendecomposition oracle with scalar
functions evaluated in arbitrary precision.
"""

import csv
from dataclasses import dataclass
from pathlib import Path

import mpmath
import numpy as np
from scipy.special import rgamma

from .errors import (
    DimensionMismatch,
    DuplicateNodes,
    IllConditionedEigenbasis,
    NotConverged,
    ParseError,
)
from .solvers import SolverConfig, solve_shifted_hessen

__all__ = [
    "QuadratureRule",
    "load_quadrature",
    "packaged_rule_path",
    "eval_rational_action",
    "dense_matfunc_oracle",
    "mittag_leffler",
]

_HEADER = ["re_z", "im_z", "re_w", "im_w"]

# Scalar Mittag-Leffler: the power series is summed for |z| up to this
# radius (in arbitrary precision, because the terms grow hugely before
# they decay), the asymptotic expansion beyond it.
_ML_SERIES_RADIUS = 30.0


@dataclass
class QuadratureRule:
    """Nodes and weights of a rational approximation.

    Attributes
    ----------
    nodes : (nu,) complex ndarray
        Pole parameters ``z_j``; the shifted systems use ``sigma = -z_j``.
    weights : (nu,) complex ndarray
    kind : str
        ``"exp"`` or ``"ml"``.
    gamma : float
        Fractional order for ``kind="ml"``; 1.0 for the exponential.
    """

    nodes: np.ndarray
    weights: np.ndarray
    kind: str = "exp"
    gamma: float = 1.0

    @property
    def nu(self):
        return self.nodes.shape[0]

    def evaluate(self, a):
        """Scalar rational approximation ``sum_j w_j / (z_j + a)``.

        With ``a`` an eigenvalue of A this is the approximation's value
        for that eigenvalue; broadcastable over arrays of ``a``.
        """
        a = np.asarray(a)
        vals = self.weights / (self.nodes + a[..., None])
        out = vals.sum(axis=-1)
        if self.is_conjugate_symmetric() and np.isrealobj(a):
            out = out.real
        return out

    def is_conjugate_symmetric(self):
        """True when nodes and weights come in conjugate pairs, so the
        rule maps real data to real values."""
        z, w = self.nodes, self.weights
        scale_z = np.abs(z).max(initial=1.0)
        scale_w = np.abs(w).max(initial=1.0)
        matched = np.zeros(self.nu, dtype=bool)
        for j in range(self.nu):
            if matched[j]:
                continue
            dz = np.abs(z - z[j].conjugate())
            dw = np.abs(w - w[j].conjugate())
            ok = (~matched) & (dz <= 1e-10 * scale_z) & (dw <= 1e-10 * scale_w)
            cand = np.flatnonzero(ok)
            if cand.size == 0:
                return False
            matched[j] = True
            matched[cand[0]] = True
        return True

    def __repr__(self):
        g = f", gamma={self.gamma}" if self.kind == "ml" else ""
        return f"<QuadratureRule {self.kind}{g}, nu={self.nu}>"


def load_quadrature(path, kind="exp", gamma=1.0):
    """Read a rule from CSV with header ``re_z,im_z,re_w,im_w``.

    Lines starting with ``#`` are comments.  The file stores one node
    per row as four floats.

    Raises
    ------
    ParseError
        Missing or wrong header, malformed row, non-finite value.
    DuplicateNodes
        Two rows carry the same node; the shifted systems of the family
        would coincide.
    """
    if kind not in ("exp", "ml"):
        raise ValueError(f"unknown rule kind {kind!r}, expected 'exp' or 'ml'")
    nodes, weights = [], []
    with open(path, "rt", newline="", encoding="ascii") as fh:
        reader = csv.reader(fh)
        header_seen = False
        for lineno, row in enumerate(reader, start=1):
            if not row or (row[0].lstrip().startswith("#")):
                continue
            cells = [c.strip() for c in row]
            if not header_seen:
                if cells != _HEADER:
                    raise ParseError(
                        f"expected header {','.join(_HEADER)!r}, got {','.join(cells)!r}",
                        lineno=lineno,
                    )
                header_seen = True
                continue
            if len(cells) != 4:
                raise ParseError(f"expected 4 columns, got {len(cells)}", lineno=lineno)
            try:
                rz, iz, rw, iw = (float(c) for c in cells)
            except ValueError:
                raise ParseError(f"bad numeric value in {row!r}", lineno=lineno) from None
            if not all(np.isfinite(x) for x in (rz, iz, rw, iw)):
                raise ParseError("non-finite value", lineno=lineno)
            nodes.append(complex(rz, iz))
            weights.append(complex(rw, iw))
    if not header_seen:
        raise ParseError("missing header line", lineno=1)
    if not nodes:
        raise ParseError("rule has no nodes", lineno=1)
    nodes = np.asarray(nodes, dtype=np.complex128)
    weights = np.asarray(weights, dtype=np.complex128)
    scale = np.abs(nodes).max(initial=1.0)
    for j in range(len(nodes)):
        close = np.abs(nodes[j + 1 :] - nodes[j]) <= 1e-12 * scale
        if np.any(close):
            k = j + 1 + int(np.flatnonzero(close)[0])
            raise DuplicateNodes(f"nodes {j} and {k} coincide at {nodes[j]}")
    if kind == "exp":
        gamma = 1.0
    elif not 0.0 < gamma <= 1.0:
        raise ValueError(f"fractional order gamma={gamma!r} outside (0, 1]")
    return QuadratureRule(nodes=nodes, weights=weights, kind=kind, gamma=float(gamma))


def packaged_rule_path(kind, gamma=None):
    """Path of a rule file shipped with the package.

    ``kind="exp"`` has one 16-node rule; ``kind="ml"`` ships 16-node
    rules for ``gamma`` in {0.6, 0.8, 0.9}.
    """
    base = Path(__file__).parent / "data" / "quadrature"
    if kind == "exp":
        return base / "exp16.csv"
    if kind == "ml":
        table = {0.6: "ml16_g060.csv", 0.8: "ml16_g080.csv", 0.9: "ml16_g090.csv"}
        for g, name in table.items():
            if gamma is not None and abs(gamma - g) < 1e-12:
                return base / name
        raise ValueError(
            f"no packaged ml rule for gamma={gamma!r}; available: {sorted(table)}"
        )
    raise ValueError(f"unknown rule kind {kind!r}")


def eval_rational_action(A, u0, rule, cfg=None, return_report=False):
    """Apply the rational approximation of ``f(A)`` to a vector.

    Solves the family ``(A - (-z_j) I) x_j = u0`` with the restarted
    pivoted Hessenberg solver and combines ``sum_j w_j x_j``.  When the
    rule is conjugate-symmetric and the data real, the exact imaginary
    part is zero and a real vector is returned.

    Parameters
    ----------
    A : operator
    u0 : (n,) array_like
    rule : QuadratureRule
    cfg : SolverConfig, optional
        Defaults to a tight tolerance (1e-10) so the solver error stays
        below the quadrature error.
    return_report : bool
        Also return the family :class:`~shiftkrylov.solvers.SolveReport`.

    Raises
    ------
    NotConverged
        If any shifted system missed the tolerance; ``.shifts`` lists
        the failing shifts.
    """
    if cfg is None:
        cfg = SolverConfig(tol=1e-10)
    shifts = [-z for z in rule.nodes]
    xs, report = solve_shifted_hessen(A, u0, shifts, cfg)
    bad = [h.shift for h in report.shifts if not h.converged]
    if bad:
        raise NotConverged(
            f"{len(bad)} of {rule.nu} pole systems missed tolerance {cfg.tol}",
            shifts=bad,
        )
    acc = np.zeros(xs[0].shape[0], dtype=np.complex128)
    for w, x in zip(rule.weights, xs):
        acc += w * x
    if (
        rule.is_conjugate_symmetric()
        and not np.iscomplexobj(np.asarray(u0))
        and not np.issubdtype(getattr(A, "dtype", np.dtype(np.float64)), np.complexfloating)
    ):
        acc = acc.real
    if return_report:
        return acc, report
    return acc


def _as_dense(A):
    toarray = getattr(A, "toarray", None)
    if callable(toarray):
        return np.asarray(toarray())
    return np.asarray(A)


def dense_matfunc_oracle(A, u0, func):
    """Reference value of ``f(A) u0`` through a dense eigendecomposition.

    For (numerically) Hermitian ``A`` an orthogonal eigenbasis is used;
    otherwise a general eigendecomposition, rejected when its basis has
    condition number above 1e8.  Intended for small matrices in tests
    and validation, not for production runs.

    Parameters
    ----------
    A : dense or sparse square matrix
    u0 : (n,) array_like
    func : callable
        Scalar function applied to each eigenvalue.

    Raises
    ------
    IllConditionedEigenbasis
    """
    Ad = _as_dense(A)
    if Ad.ndim != 2 or Ad.shape[0] != Ad.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {Ad.shape}")
    u0 = np.asarray(u0)
    if u0.shape != (Ad.shape[0],):
        raise DimensionMismatch(
            f"vector of shape {u0.shape} does not match order {Ad.shape[0]}"
        )
    hermitian = np.allclose(Ad, Ad.conj().T, rtol=1e-12, atol=1e-12)
    if hermitian:
        lam, V = np.linalg.eigh(Ad)
        coeffs = V.conj().T @ u0
    else:
        lam, V = np.linalg.eig(Ad)
        cond = np.linalg.cond(V)
        if cond > 1e8:
            raise IllConditionedEigenbasis(
                f"eigenvector basis has condition number {cond:.3e} > 1e8"
            )
        coeffs = np.linalg.solve(V, u0)
    flam = np.array([func(l) for l in lam])
    out = V @ (flam * coeffs)
    if np.isrealobj(Ad) and np.isrealobj(u0) and np.iscomplexobj(out):
        if np.abs(out.imag).max(initial=0.0) <= 1e-12 * max(
            1.0, np.abs(out.real).max(initial=0.0)
        ):
            out = out.real
    return out


def _ml_series(z, gamma):
    """Power series sum in arbitrary precision.

    For strongly negative arguments the terms peak at magnitudes far
    beyond the final value, so the working precision is raised with
    ``|z|**(1/gamma)`` to absorb the cancellation.
    """
    az = abs(z)
    peak_digits = 0.4343 * az ** (1.0 / gamma) / gamma
    dps = 25 + int(peak_digits + 0.5)
    # Terms grow until roughly k ~ |z|^(1/gamma)/gamma before decaying,
    # so the smallness test must not fire earlier.
    k_min = int(az ** (1.0 / gamma) / gamma) + 8
    with mpmath.workdps(dps):
        zz = mpmath.mpmathify(complex(z))
        # The gamma argument must be formed in working precision: in
        # double precision its rounding error, amplified by terms that
        # peak ~10^peak_digits above the result, destroys the final
        # cancellation.
        g = mpmath.mpf(gamma)
        zk = mpmath.mpf(1)
        s = mpmath.mpf(0)
        term_scale = mpmath.mpf(10) ** (-dps)
        k = 0
        while True:
            term = zk / mpmath.gamma(g * k + 1)
            s += term
            k += 1
            zk *= zz
            if k > k_min and abs(term) < term_scale * (1 + abs(s)):
                break
            if k > 100000:
                raise RuntimeError("Mittag-Leffler series did not terminate")
        return complex(s)


def _ml_asymptotic(z, gamma, kmax=170):
    """Expansion for large ``|z|`` away from the positive real axis:
    ``E_gamma(z) ~ -sum_{k>=1} z^-k / Gamma(1 - gamma k)``.

    The expansion is divergent; the sum is truncated at its globally
    smallest term, whose size bounds the error.  A simple
    first-increase rule would stop too early: ``1/Gamma(1 - gamma k)``
    passes near poles of Gamma where terms dip almost to zero and grow
    again.
    """
    terms = []
    zk = 1.0 + 0.0j
    for k in range(1, kmax + 1):
        zk /= z
        terms.append(complex(rgamma(1.0 - gamma * k)) * zk)
    mags = np.array([abs(t) for t in terms])
    nonzero = np.flatnonzero(mags > 0.0)
    if nonzero.size == 0:
        # gamma = 1: every coefficient vanishes and E_1(z) = e^z is
        # below roundoff in this regime.
        return 0.0 + 0.0j
    kstar = int(nonzero[np.argmin(mags[nonzero])])
    return -sum(terms[: kstar + 1])


def mittag_leffler(z, gamma):
    """Scalar one-parameter Mittag-Leffler function ``E_gamma(z)``.

    ``E_1`` is the exponential.  Accepts real or complex scalars; for
    ``|z|`` beyond the series radius an asymptotic expansion is used,
    which assumes ``z`` bounded away from the positive real axis (the
    regime of spectra ``-t^gamma * lambda`` with ``Re(lambda) > 0``).
    """
    if not 0.0 < gamma <= 1.0:
        raise ValueError(f"gamma={gamma!r} outside (0, 1]")
    z = complex(z)
    if gamma == 1.0:
        # exactly the exponential; the asymptotic branch below would
        # return the (identically zero) algebraic part instead
        out = np.exp(z)
    elif abs(z) <= _ML_SERIES_RADIUS:
        out = _ml_series(z, gamma)
    else:
        out = _ml_asymptotic(z, gamma)
    if z.imag == 0.0:
        return out.real
    return out
