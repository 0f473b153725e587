"""Sparse binary matrices and GF(2) linear algebra.

Storage is sparse (row and column supports) because decoding walks the
Tanner graph. Rank, kernel and rowspace membership go through a dense
bit-packed elimination, which is plenty for codes of a few thousand bits.
"""

from __future__ import annotations

import os
from collections.abc import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

__all__ = [
    "SparseBinaryMatrix",
    "RowSpace",
    "circulant",
    "identity",
    "gf2_rank",
    "gf2_kernel",
    "mat_vec",
    "in_rowspace",
    "read_alist",
    "write_alist",
]


class SparseBinaryMatrix:
    """Immutable binary matrix stored as row supports and column supports.

    Both views are kept as CSR-style ``(indptr, indices)`` pairs with sorted,
    duplicate-free supports.
    """

    __slots__ = ("n_rows", "n_cols", "_row_ptr", "_row_idx", "_col_ptr", "_col_idx")

    def __init__(self, n_rows: int, n_cols: int, row_supports: Iterable[Iterable[int]]):
        self.n_rows = int(n_rows)
        self.n_cols = int(n_cols)
        rows = [sorted(set(int(j) for j in r)) for r in row_supports]
        if len(rows) != self.n_rows:
            raise ValueError(f"expected {self.n_rows} row supports, got {len(rows)}")
        for r in rows:
            if r and (r[0] < 0 or r[-1] >= self.n_cols):
                raise ValueError("column index out of range")
        lengths = np.fromiter((len(r) for r in rows), dtype=np.int64, count=self.n_rows)
        self._row_ptr = np.zeros(self.n_rows + 1, dtype=np.int64)
        np.cumsum(lengths, out=self._row_ptr[1:])
        self._row_idx = np.fromiter(
            (j for r in rows for j in r), dtype=np.int64, count=int(self._row_ptr[-1])
        )
        # column view: a stable sort by column keeps row indices ascending
        row_of = np.repeat(np.arange(self.n_rows, dtype=np.int64), lengths)
        order = np.argsort(self._row_idx, kind="stable")
        self._col_idx = row_of[order]
        counts = np.bincount(self._row_idx, minlength=self.n_cols)
        self._col_ptr = np.zeros(self.n_cols + 1, dtype=np.int64)
        np.cumsum(counts, out=self._col_ptr[1:])
        for arr in (self._row_ptr, self._row_idx, self._col_ptr, self._col_idx):
            arr.flags.writeable = False

    # construction helpers

    @classmethod
    def from_dense(cls, dense) -> SparseBinaryMatrix:
        arr = np.asarray(dense) % 2
        if arr.ndim != 2:
            raise ValueError("expected a 2-d array")
        return cls(arr.shape[0], arr.shape[1], (np.flatnonzero(row) for row in arr))

    @classmethod
    def from_scipy(cls, mat) -> SparseBinaryMatrix:
        csr = sp.csr_matrix(mat)
        csr.data = csr.data % 2
        csr.eliminate_zeros()
        csr.sort_indices()
        ptr, idx = csr.indptr, csr.indices
        return cls(
            csr.shape[0], csr.shape[1], (idx[ptr[i] : ptr[i + 1]] for i in range(csr.shape[0]))
        )

    # views

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_rows, self.n_cols)

    @property
    def nnz(self) -> int:
        return int(self._row_ptr[-1])

    @property
    def row_supports(self) -> list[np.ndarray]:
        return [self.row(i) for i in range(self.n_rows)]

    @property
    def col_supports(self) -> list[np.ndarray]:
        return [self.col(j) for j in range(self.n_cols)]

    def row(self, i: int) -> np.ndarray:
        return self._row_idx[self._row_ptr[i] : self._row_ptr[i + 1]]

    def col(self, j: int) -> np.ndarray:
        return self._col_idx[self._col_ptr[j] : self._col_ptr[j + 1]]

    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """Row pointer and column index arrays (read-only)."""
        return self._row_ptr, self._row_idx

    def csc(self) -> tuple[np.ndarray, np.ndarray]:
        """Column pointer and row index arrays (read-only)."""
        return self._col_ptr, self._col_idx

    def row_weights(self) -> np.ndarray:
        return np.diff(self._row_ptr)

    def col_weights(self) -> np.ndarray:
        return np.diff(self._col_ptr)

    @property
    def T(self) -> SparseBinaryMatrix:
        return SparseBinaryMatrix(self.n_cols, self.n_rows, self.col_supports)

    def transpose(self) -> SparseBinaryMatrix:
        return self.T

    def to_dense(self, dtype=np.uint8) -> np.ndarray:
        out = np.zeros(self.shape, dtype=dtype)
        out[np.repeat(np.arange(self.n_rows), self.row_weights()), self._row_idx] = 1
        return out

    def to_scipy(self) -> sp.csr_matrix:
        data = np.ones(self.nnz, dtype=np.int64)
        return sp.csr_matrix((data, self._row_idx, self._row_ptr), shape=self.shape)

    def submatrix(self, rows: Sequence[int]) -> SparseBinaryMatrix:
        """Matrix made of the given rows, in the given order."""
        return SparseBinaryMatrix(len(rows), self.n_cols, (self.row(i) for i in rows))

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseBinaryMatrix):
            return NotImplemented
        return (
            self.shape == other.shape
            and np.array_equal(self._row_ptr, other._row_ptr)
            and np.array_equal(self._row_idx, other._row_idx)
        )

    def __hash__(self):
        return hash((self.shape, self._row_idx.tobytes(), self._row_ptr.tobytes()))

    def __repr__(self) -> str:
        return f"SparseBinaryMatrix({self.n_rows}x{self.n_cols}, nnz={self.nnz})"


def circulant(support: Iterable[int], l: int) -> SparseBinaryMatrix:
    """l x l circulant whose row r has ones at (e + r) mod l for e in support.

    >>> circulant({0, 2, 5}, 31).row(30).tolist()
    [1, 4, 30]
    """
    exps = sorted(set(int(e) for e in support))
    if not exps:
        raise ValueError("circulant support must be nonempty")
    if l <= 0 or exps[0] < 0 or exps[-1] >= l:
        raise ValueError(f"exponents must lie in [0, {l})")
    return SparseBinaryMatrix(l, l, ([(e + r) % l for e in exps] for r in range(l)))


def identity(n: int) -> SparseBinaryMatrix:
    return SparseBinaryMatrix(n, n, ([i] for i in range(n)))


def _as_bits(v, n: int) -> np.ndarray:
    arr = np.asarray(v).astype(np.uint8).ravel() & 1
    if arr.shape[0] != n:
        raise ValueError(f"vector length {arr.shape[0]} does not match {n} columns")
    return arr


def mat_vec(M: SparseBinaryMatrix, v) -> np.ndarray:
    """GF(2) product M v as a uint8 vector."""
    bits = _as_bits(v, M.n_cols)
    ptr, idx = M.csr()
    if M.nnz == 0:
        return np.zeros(M.n_rows, dtype=np.uint8)
    gathered = bits[idx].astype(np.int64)
    sums = np.add.reduceat(gathered, np.minimum(ptr[:-1], M.nnz - 1))
    sums[np.diff(ptr) == 0] = 0
    return (sums & 1).astype(np.uint8)


# dense elimination


def _pack(dense: np.ndarray) -> np.ndarray:
    return np.packbits(np.asarray(dense, dtype=np.uint8) & 1, axis=1)


def _rref_packed(packed: np.ndarray, n_cols: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of a bit-packed matrix, in place.

    Returns the matrix (rows past the rank are zero) and the pivot columns.
    """
    m = packed.shape[0]
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        if r == m:
            break
        byte, shift = c >> 3, 7 - (c & 7)
        colbits = (packed[r:, byte] >> shift) & 1
        nz = np.flatnonzero(colbits)
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            packed[[r, p]] = packed[[p, r]]
        hits = np.flatnonzero((packed[:, byte] >> shift) & 1)
        hits = hits[hits != r]
        if hits.size:
            packed[hits] ^= packed[r]
        pivots.append(c)
        r += 1
    return packed, pivots


def _dense(M) -> np.ndarray:
    if isinstance(M, SparseBinaryMatrix):
        return M.to_dense()
    return np.asarray(M, dtype=np.uint8) & 1


def gf2_rank(M) -> int:
    """Rank over GF(2) of a SparseBinaryMatrix or 0/1 array."""
    dense = _dense(M)
    if dense.size == 0:
        return 0
    _, pivots = _rref_packed(_pack(dense), dense.shape[1])
    return len(pivots)


def gf2_kernel(M) -> np.ndarray:
    """Basis of {x : M x = 0} as rows of a uint8 array."""
    dense = _dense(M)
    m, n = dense.shape
    if m == 0:
        return np.eye(n, dtype=np.uint8)
    packed, pivots = _rref_packed(_pack(dense), n)
    rref = np.unpackbits(packed[: len(pivots)], axis=1, count=n)
    free = np.setdiff1d(np.arange(n), pivots)
    basis = np.zeros((free.size, n), dtype=np.uint8)
    basis[np.arange(free.size), free] = 1
    if pivots:
        # pivot variable p_i = sum of rref[i, f] over free f set in the basis vector
        basis[:, pivots] = rref[:, free].T
    return basis


def in_rowspace(M, v) -> bool:
    """True iff v is a GF(2) combination of the rows of M (rank test)."""
    dense = _dense(M)
    bits = _as_bits(v, dense.shape[1])
    if not bits.any():
        return True
    return gf2_rank(np.vstack([dense, bits])) == gf2_rank(dense)


class RowSpace:
    """Repeated rowspace-membership queries against a fixed matrix.

    Membership is tested through the kernel: v lies in the rowspace of M iff
    v is orthogonal to every vector of ker M. Queries cost O(|v| * dim ker).
    """

    def __init__(self, M):
        dense = _dense(M)
        self.n_cols = dense.shape[1]
        # column-major so that support gathers are contiguous
        self._kernel_cols = np.ascontiguousarray(gf2_kernel(dense).T).astype(np.uint8)

    def __contains__(self, v) -> bool:
        bits = _as_bits(v, self.n_cols)
        support = np.flatnonzero(bits)
        if support.size == 0:
            return True
        parity = np.bitwise_xor.reduce(self._kernel_cols[support], axis=0)
        return not parity.any()


# alist I/O


def read_alist(path: str | os.PathLike) -> SparseBinaryMatrix:
    """Read a matrix in alist format.

    Zero padding in the support lists is optional. The column section is
    cross-checked against the row section.
    """
    with open(path) as fh:
        lines = [ln.split() for ln in fh if ln.strip()]
    try:
        n_cols, n_rows = int(lines[0][0]), int(lines[0][1])
        col_deg = [int(x) for x in lines[2]]
        row_deg = [int(x) for x in lines[3]]
        if len(col_deg) != n_cols or len(row_deg) != n_rows:
            raise ValueError("degree list lengths do not match the header")
        body = lines[4:]
        col_lines, row_lines = body[:n_cols], body[n_cols : n_cols + n_rows]
        if len(row_lines) != n_rows:
            raise ValueError("truncated alist file")
        rows = []
        for i, toks in enumerate(row_lines):
            support = [int(x) - 1 for x in toks if int(x) != 0]
            if len(support) != row_deg[i]:
                raise ValueError(f"row {i}: degree {row_deg[i]} but {len(support)} entries")
            rows.append(support)
        cols = []
        for j, toks in enumerate(col_lines):
            support = [int(x) - 1 for x in toks if int(x) != 0]
            if len(support) != col_deg[j]:
                raise ValueError(f"column {j}: degree {col_deg[j]} but {len(support)} entries")
            cols.append(support)
    except (IndexError, ValueError) as exc:
        raise ValueError(f"malformed alist file {path}: {exc}") from exc
    M = SparseBinaryMatrix(n_rows, n_cols, rows)
    if [sorted(c) for c in cols] != [c.tolist() for c in M.col_supports]:
        raise ValueError(f"malformed alist file {path}: column and row sections disagree")
    return M


def write_alist(M: SparseBinaryMatrix, path: str | os.PathLike) -> None:
    """Write M in padded alist format."""
    cw, rw = M.col_weights(), M.row_weights()
    max_c = int(cw.max()) if M.n_cols else 0
    max_r = int(rw.max()) if M.n_rows else 0

    def fmt(support, width):
        vals = [str(int(x) + 1) for x in support] + ["0"] * (width - len(support))
        return " ".join(vals)

    out = [
        f"{M.n_cols} {M.n_rows}",
        f"{max_c} {max_r}",
        " ".join(str(int(x)) for x in cw),
        " ".join(str(int(x)) for x in rw),
    ]
    out += [fmt(M.col(j), max_c) for j in range(M.n_cols)]
    out += [fmt(M.row(i), max_r) for i in range(M.n_rows)]
    with open(path, "w") as fh:
        fh.write("\n".join(out) + "\n")
