"""Regenerate src/layered_qldpc/data/b1_*.alist.

B1 is the generalized hypergraph product over F2[x]/(x^63 - 1) with
b(x) = 1 + x + x^6 and the 7x7 matrix A below (Panteleev & Kalachev,
"Degenerate quantum LDPC codes with good finite length performance",
appendix). H_X = [A, b I], H_Z = [b^T I, A^T] as binary matrices.
"""

from pathlib import Path

import numpy as np

from layered_qldpc import SparseBinaryMatrix, circulant, write_alist

L = 63
B_POLY = (0, 1, 6)
# row i: 1 at column i-2, x^54 at column i-1, x^27 at column i (cyclically)
A_ENTRIES = {(i, (i + d) % 7): e for i in range(7) for d, e in ((-2, 0), (-1, 54), (0, 27))}


def block(exps):
    return circulant(exps, L).to_dense() if exps else np.zeros((L, L), np.uint8)


def main():
    a = np.block([[block([A_ENTRIES[i, j]] if (i, j) in A_ENTRIES else []) for j in range(7)] for i in range(7)])
    bi = np.kron(np.eye(7, dtype=np.uint8), block(B_POLY))
    hx = np.hstack([a, bi])
    hz = np.hstack([bi.T, a.T])
    out = Path(__file__).resolve().parents[1] / "src" / "layered_qldpc" / "data"
    write_alist(SparseBinaryMatrix.from_dense(hx), out / "b1_hx.alist")
    write_alist(SparseBinaryMatrix.from_dense(hz), out / "b1_hz.alist")


if __name__ == "__main__":
    main()
