"""CSR sparse matrices and the exact entry-level operations the experiments need.

The storage contract is plain CSR (``indptr``, ``indices``, ``values``) with
strictly increasing column indices inside each row and finite nonzero values.
scipy.sparse supplies the mechanical part (products, format conversion); the
operations here are the ones with domain meaning: ranked extreme entries,
operator norms, truncation splits, and nonzero-count scans.

Symmetric matrices store both triangles so that products are ordinary CSR
products, but ranked entries and the CSV format use only ``i <= j``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix, csr_matrix


@dataclass(frozen=True)
class RankedEntry:
    """The ``rank``-th largest entry by magnitude; ``theta`` is 0 for a
    positive value and pi for a negative one."""

    rank: int
    i: int
    j: int
    magnitude: float
    theta: float


@dataclass
class SparseMatrix:
    """Immutable-by-convention CSR matrix of shape ``rows x cols``."""

    rows: int
    cols: int
    indptr: np.ndarray
    indices: np.ndarray
    values: np.ndarray
    symmetric: bool = False
    _csr: csr_matrix = field(init=False, repr=False, compare=False)
    _csr_t: csr_matrix | None = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ValueError(f"matrix dimensions must be positive: {self.rows} x {self.cols}")
        self.indptr = np.asarray(self.indptr, dtype=np.int64)
        self.indices = np.asarray(self.indices, dtype=np.int64)
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.indptr.shape != (self.rows + 1,):
            raise ValueError("indptr must have length rows + 1")
        if self.indptr[0] != 0 or self.indptr[-1] != self.indices.size:
            raise ValueError("indptr must start at 0 and end at nnz")
        if np.any(np.diff(self.indptr) < 0):
            raise ValueError("indptr offsets must be nondecreasing")
        if self.indices.shape != self.values.shape:
            raise ValueError("indices and values must have equal length")
        if self.indices.size:
            if self.indices.min() < 0 or self.indices.max() >= self.cols:
                raise ValueError("column index out of range")
            row_start = np.zeros(self.indices.size, dtype=bool)
            row_start[self.indptr[:-1][np.diff(self.indptr) > 0]] = True
            if not np.all((np.diff(self.indices) > 0) | row_start[1:]):
                raise ValueError("column indices must be strictly increasing within each row")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("stored values must be finite")
        if np.any(self.values == 0.0):
            raise ValueError("stored values must be nonzero")
        self._csr = csr_matrix(
            (self.values, self.indices, self.indptr), shape=(self.rows, self.cols)
        )
        if self.symmetric:
            if self.rows != self.cols:
                raise ValueError("symmetric matrices must be square")
            diff = self._csr - self._csr.T
            if diff.nnz and np.max(np.abs(diff.data)) != 0.0:
                raise ValueError("symmetric flag set but stored entries are not symmetric")

    @classmethod
    def from_scipy(cls, mat, symmetric: bool = False) -> "SparseMatrix":
        csr = mat.tocsr().copy()
        csr.sum_duplicates()
        csr.sort_indices()
        csr.eliminate_zeros()
        return cls(
            rows=csr.shape[0],
            cols=csr.shape[1],
            indptr=csr.indptr.astype(np.int64),
            indices=csr.indices.astype(np.int64),
            values=csr.data.astype(np.float64),
            symmetric=symmetric,
        )

    @classmethod
    def from_dense(cls, array, symmetric: bool = False) -> "SparseMatrix":
        return cls.from_scipy(csr_matrix(np.asarray(array, dtype=np.float64)), symmetric)

    @property
    def nnz(self) -> int:
        return int(self.indices.size)

    def to_scipy(self) -> csr_matrix:
        return self._csr

    def to_dense(self) -> np.ndarray:
        return np.asarray(self._csr.todense())

    def row_index_of_entries(self) -> np.ndarray:
        """Row index of each stored entry, aligned with ``indices``/``values``."""
        return np.repeat(np.arange(self.rows, dtype=np.int64), np.diff(self.indptr))


def matvec(m: SparseMatrix, v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (m.cols,):
        raise ValueError(f"vector length {v.shape} incompatible with {m.rows} x {m.cols}")
    return m.to_scipy() @ v


def gram_matvec(m: SparseMatrix, v: np.ndarray) -> np.ndarray:
    """Apply the Gram matrix ``M M^T`` without forming it."""
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (m.rows,):
        raise ValueError(f"vector length {v.shape} incompatible with Gram of {m.rows} x {m.cols}")
    if m._csr_t is None:
        m._csr_t = m.to_scipy().T.tocsr()
    return m.to_scipy() @ (m._csr_t @ v)


def norms(m: SparseMatrix) -> tuple[float, float]:
    """Return ``(inf_norm, one_norm)``: max absolute row sum, max column sum."""
    if m.nnz == 0:
        return 0.0, 0.0
    absvals = np.abs(m.values)
    row_sums = np.add.reduceat(absvals, m.indptr[:-1][np.diff(m.indptr) > 0])
    col_sums = np.bincount(m.indices, weights=absvals, minlength=m.cols)
    return float(row_sums.max()), float(col_sums.max())


def top_entries(m: SparseMatrix, k: int) -> tuple[list[RankedEntry], bool]:
    """Rank stored entries by decreasing magnitude, ties by (i, j).

    Symmetric matrices rank only the upper triangle ``i <= j``.  Returns the
    list and a flag that is True when fewer than ``k`` entries exist.
    """
    if k < 1:
        raise ValueError(f"k must be positive: {k}")
    rows = m.row_index_of_entries()
    cols = m.indices
    vals = m.values
    if m.symmetric:
        keep = rows <= cols
        rows, cols, vals = rows[keep], cols[keep], vals[keep]
    mags = np.abs(vals)
    order = np.lexsort((cols, rows, -mags))
    take = order[: min(k, order.size)]
    entries = [
        RankedEntry(
            rank=r + 1,
            i=int(rows[idx]),
            j=int(cols[idx]),
            magnitude=float(mags[idx]),
            theta=0.0 if vals[idx] > 0 else math.pi,
        )
        for r, idx in enumerate(take)
    ]
    return entries, take.size < k


def truncate_split(
    m: SparseMatrix, level: float, recenter: bool = False
) -> tuple[SparseMatrix, SparseMatrix]:
    """Split into ``(m_hat, m_prime)``: entries with ``|value| <= level`` and the rest.

    Both parts keep the parent shape; their supports are disjoint and their sum
    restores ``m`` exactly.  ``recenter`` subtracts the law's truncated first
    moment from the kept part; the symmetric laws sampled here have truncated
    mean zero, so the subtraction is a no-op and the flag only documents intent.
    """
    if not (math.isfinite(level) and level > 0):
        raise ValueError(f"truncation level must be finite and positive: {level!r}")
    rows = m.row_index_of_entries()
    small = np.abs(m.values) <= level
    parts = []
    for keep in (small, ~small):
        coo = coo_matrix(
            (m.values[keep], (rows[keep], m.indices[keep])), shape=(m.rows, m.cols)
        )
        parts.append(SparseMatrix.from_scipy(coo.tocsr(), symmetric=m.symmetric))
    if recenter:
        pass  # truncated mean of a symmetric law is identically zero
    return parts[0], parts[1]


def filtered_row_sums(
    m: SparseMatrix, lo: float, hi: float, axis: str = "rows"
) -> np.ndarray:
    """Per-row (or per-column) sums of ``|value|`` restricted to ``lo < |value| <= hi``."""
    if not (0.0 <= lo < hi):
        raise ValueError(f"need 0 <= lo < hi, got lo={lo!r}, hi={hi!r}")
    if axis not in ("rows", "cols"):
        raise ValueError(f"axis must be 'rows' or 'cols': {axis!r}")
    absvals = np.abs(m.values)
    band = (absvals > lo) & (absvals <= hi)
    weights = np.where(band, absvals, 0.0)
    if axis == "cols":
        return np.bincount(m.indices, weights=weights, minlength=m.cols)
    return np.bincount(m.row_index_of_entries(), weights=weights, minlength=m.rows)


def row_nonzero_counts(m: SparseMatrix) -> tuple[int, int]:
    """Return ``(L, L_col)``: the max nonzero count over rows and over columns."""
    if m.nnz == 0:
        return 0, 0
    row_max = int(np.diff(m.indptr).max())
    col_max = int(np.bincount(m.indices, minlength=m.cols).max())
    return row_max, col_max


def save_matrix_csv(m: SparseMatrix, path) -> None:
    """Write ``i,j,value`` rows (0-based, row-major); symmetric matrices store
    only ``i <= j``."""
    rows = m.row_index_of_entries()
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("i,j,value\n")
        for i, j, v in zip(rows, m.indices, m.values):
            if m.symmetric and i > j:
                continue
            fh.write(f"{i},{j},{float(v)!r}\n")


def load_matrix_csv(path, rows: int | None = None, cols: int | None = None,
                    symmetric: bool = False) -> SparseMatrix:
    """Read the ``i,j,value`` format; symmetric files are mirrored below the
    diagonal.  Dimensions default to the largest index seen plus one."""
    ii: list[int] = []
    jj: list[int] = []
    vv: list[float] = []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != "i,j,value":
            raise ValueError(f"unexpected matrix CSV header: {header!r}")
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            fields = line.split(",")
            if len(fields) != 3:
                raise ValueError(f"line {lineno}: expected 3 fields, got {len(fields)}")
            i, j, v = int(fields[0]), int(fields[1]), float(fields[2])
            if i < 0 or j < 0:
                raise ValueError(f"line {lineno}: negative index")
            if symmetric and i > j:
                raise ValueError(f"line {lineno}: symmetric files store only i <= j")
            ii.append(i)
            jj.append(j)
            vv.append(v)
            if symmetric and i != j:
                ii.append(j)
                jj.append(i)
                vv.append(v)
    nrows = rows if rows is not None else (max(ii) + 1 if ii else 1)
    ncols = cols if cols is not None else (max(jj) + 1 if jj else 1)
    if symmetric:
        nrows = ncols = max(nrows, ncols)
    coo = coo_matrix((vv, (ii, jj)), shape=(nrows, ncols))
    return SparseMatrix.from_scipy(coo.tocsr(), symmetric=symmetric)
