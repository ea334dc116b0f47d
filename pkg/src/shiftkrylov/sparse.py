"""Sparse matrices in compressed sparse row form with counted products.

The solvers in this package charge their work in matrix-vector products
(MVPs).  :class:`CsrMatrix` therefore owns an :class:`MvpCounter` that is
incremented by every product, so a caller can meter the cost of any
sequence of operations:

>>> A = CsrMatrix.from_triplets([0, 1], [0, 1], [2.0, 3.0], (2, 2))
>>> _ = A @ [1.0, 1.0]
>>> A.counter.count
1

Storage and the product kernel are delegated to ``scipy.sparse``; this
module fixes the interface (explicit CSR views, strict shape checks,
duplicate summing) and the accounting.
"""

import numpy as np
import scipy.sparse as _sp

from .errors import (
    DimensionMismatch,
    IndexOutOfRange,
    InvalidDimensions,
)

__all__ = ["MvpCounter", "CsrMatrix", "matvec", "identity"]


class MvpCounter:
    """Counts matrix-vector products.

    >>> c = MvpCounter()
    >>> c.add()
    >>> c.count
    1
    >>> c.reset()
    >>> c.count
    0
    """

    def __init__(self):
        self.count = 0

    def add(self, n=1):
        self.count += n

    def reset(self):
        self.count = 0

    def __repr__(self):
        return f"MvpCounter(count={self.count})"


class CsrMatrix:
    """Square or rectangular sparse matrix in CSR form.

    Parameters
    ----------
    csr : scipy.sparse.csr_matrix
        Canonical CSR storage (sorted column indices, duplicates summed).
        Use :meth:`from_triplets` or :func:`shiftkrylov.mmio.load_matrix_market`
        rather than building the scipy object by hand.

    Attributes
    ----------
    counter : MvpCounter
        Incremented once per matrix-vector product applied through this
        object.  Shared by all products of this matrix; solvers that need
        isolated accounting wrap the matrix with their own counter.
    """

    def __init__(self, csr):
        if not _sp.isspmatrix_csr(csr):
            csr = _sp.csr_matrix(csr)
        csr.sum_duplicates()
        csr.sort_indices()
        self._csr = csr
        self.counter = MvpCounter()

    # -- construction -----------------------------------------------------

    @classmethod
    def from_triplets(cls, rows, cols, vals, shape):
        """Build a matrix from coordinate triplets, summing duplicates.

        Parameters
        ----------
        rows, cols : array_like of int
            0-based coordinates, equal length.
        vals : array_like
            Entry values, real or complex.
        shape : tuple of int
            ``(nrows, ncols)``, both positive.

        Raises
        ------
        InvalidDimensions
            If a dimension is not a positive integer.
        IndexOutOfRange
            If any coordinate falls outside ``shape``.
        DimensionMismatch
            If the triplet arrays differ in length.
        """
        nrows, ncols = shape
        if int(nrows) != nrows or int(ncols) != ncols or nrows <= 0 or ncols <= 0:
            raise InvalidDimensions(f"shape must be positive integers, got {shape!r}")
        nrows, ncols = int(nrows), int(ncols)
        rows = np.asarray(rows, dtype=np.int64).ravel()
        cols = np.asarray(cols, dtype=np.int64).ravel()
        vals = np.asarray(vals).ravel()
        if not np.issubdtype(vals.dtype, np.complexfloating):
            vals = vals.astype(np.float64)
        if rows.size != cols.size or rows.size != vals.size:
            raise DimensionMismatch(
                f"triplet arrays have lengths {rows.size}, {cols.size}, {vals.size}"
            )
        if rows.size:
            if rows.min() < 0 or rows.max() >= nrows:
                bad = rows[(rows < 0) | (rows >= nrows)][0]
                raise IndexOutOfRange(f"row index {bad} outside [0, {nrows})")
            if cols.min() < 0 or cols.max() >= ncols:
                bad = cols[(cols < 0) | (cols >= ncols)][0]
                raise IndexOutOfRange(f"column index {bad} outside [0, {ncols})")
        coo = _sp.coo_matrix((vals, (rows, cols)), shape=(nrows, ncols))
        return cls(coo.tocsr())

    # -- CSR views --------------------------------------------------------

    @property
    def row_ptr(self):
        """Row pointer array, length ``nrows + 1``."""
        return self._csr.indptr

    @property
    def col_idx(self):
        """Column indices, length ``nnz``, sorted within each row."""
        return self._csr.indices

    @property
    def values(self):
        """Stored entry values, aligned with :attr:`col_idx`."""
        return self._csr.data

    @property
    def shape(self):
        return self._csr.shape

    @property
    def nnz(self):
        return self._csr.nnz

    @property
    def dtype(self):
        return self._csr.dtype

    # -- products ---------------------------------------------------------

    def _apply(self, x):
        """Product without touching the counter (internal diagnostics)."""
        x = np.asarray(x)
        if x.ndim != 1 or x.shape[0] != self.shape[1]:
            raise DimensionMismatch(
                f"matrix of shape {self.shape} cannot multiply vector of shape {x.shape}"
            )
        return self._csr @ x

    def __matmul__(self, x):
        y = self._apply(x)
        self.counter.add()
        return y

    # -- derived matrices and scalars -------------------------------------

    def shifted(self, sigma):
        """Return ``A - sigma*I`` as a new matrix with a fresh counter."""
        n, m = self.shape
        if n != m:
            raise DimensionMismatch("only square matrices can be shifted")
        eye = _sp.identity(n, dtype=self.dtype, format="csr")
        return CsrMatrix((self._csr - sigma * eye).tocsr())

    def toarray(self):
        """Dense copy, for small reference computations only."""
        return self._csr.toarray()

    def norm_inf(self):
        """Maximum absolute row sum."""
        return float(abs(self._csr).sum(axis=1).max()) if self.nnz else 0.0

    def conjugate_transpose(self):
        return CsrMatrix(self._csr.conj().T.tocsr())

    def __repr__(self):
        return (
            f"<CsrMatrix {self.shape[0]}x{self.shape[1]}, nnz={self.nnz}, "
            f"dtype={self.dtype}>"
        )


def matvec(A, x):
    """Counted product ``A @ x``.

    Equivalent to ``A @ x`` for a :class:`CsrMatrix`; provided as a named
    entry point so meter-sensitive call sites read explicitly.
    """
    return A @ x


def identity(n, dtype=np.float64):
    """Identity matrix of order ``n`` in CSR form."""
    if int(n) != n or n <= 0:
        raise InvalidDimensions(f"order must be a positive integer, got {n!r}")
    n = int(n)
    idx = np.arange(n)
    return CsrMatrix.from_triplets(idx, idx, np.ones(n, dtype=dtype), (n, n))
