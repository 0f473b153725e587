"""Layers, layer decompositions and t-covers of parity-check matrices.

A layer is a set of checks with pairwise disjoint supports. A (t, k, gamma)
cover is a family of k layers hitting every check exactly t times, with
layer sizes within a factor gamma of each other; t = 1 is an ordinary layer
decomposition.
"""

from __future__ import annotations

import os
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .gf2 import SparseBinaryMatrix

__all__ = [
    "LayerCover",
    "CoverReport",
    "is_layer",
    "validate_cover",
    "density_bound",
    "fractional_density_bound",
    "tightest_balance",
    "greedy_decompose",
    "C2_COMPONENT_LAYERS",
    "c2_component_layers",
    "c2_layers",
    "hgp_layers",
    "b1_cover",
    "restrict_to_a_row",
    "read_cover",
    "write_cover",
]


@dataclass(frozen=True)
class LayerCover:
    t: int
    layers: tuple[tuple[int, ...], ...]
    m: int

    def __init__(self, layers: Iterable[Iterable[int]], m: int, t: int = 1):
        object.__setattr__(self, "layers", tuple(tuple(int(c) for c in L) for L in layers))
        object.__setattr__(self, "m", int(m))
        object.__setattr__(self, "t", int(t))

    @property
    def k(self) -> int:
        return len(self.layers)

    @property
    def fractional(self) -> Fraction:
        return Fraction(self.k, self.t)

    def sizes(self) -> list[int]:
        return [len(L) for L in self.layers]

    def conflicts(self) -> np.ndarray:
        """k x k boolean matrix, True where two distinct layers share a check."""
        k = self.k
        member = np.zeros((k, self.m), dtype=bool)
        for i, L in enumerate(self.layers):
            member[i, list(L)] = True
        shared = member.astype(np.int64) @ member.T.astype(np.int64)
        out = shared > 0
        np.fill_diagonal(out, False)
        return out

    def __repr__(self) -> str:
        return f"LayerCover(t={self.t}, k={self.k}, m={self.m}, sizes={self.sizes()})"


@dataclass(frozen=True)
class CoverReport:
    t: int
    k: int
    gamma: float
    fractional: Fraction
    valid: bool
    lower_bound: int
    problems: tuple[str, ...] = ()

    def __str__(self) -> str:
        status = "valid" if self.valid else "INVALID"
        return (
            f"({self.t},{self.k},{self.gamma:.4g})-cover {status}; "
            f"fractional layer number {float(self.fractional):g}, density bound {self.lower_bound}"
        )


def is_layer(H: SparseBinaryMatrix, checks: Iterable[int]) -> bool:
    """True iff the given rows of H have pairwise disjoint supports."""
    seen = np.zeros(H.n_cols, dtype=bool)
    for c in checks:
        support = H.row(c)
        if seen[support].any():
            return False
        seen[support] = True
    return True


def tightest_balance(sizes: Sequence[int]) -> float:
    """max |L_i| / |L_j| over nonempty layers (1.0 when fewer than two are nonempty)."""
    nonempty = [s for s in sizes if s > 0]
    if not nonempty:
        return 1.0
    return max(nonempty) / min(nonempty)


def density_bound(H: SparseBinaryMatrix) -> int:
    """Lower bound on the number of layers of any decomposition of H.

    A layer touches each column at most once, so k is at least the maximum
    column weight and at least ceil(nnz / n_cols).
    """
    if H.n_cols == 0 or H.nnz == 0:
        return 0
    return max(-(-H.nnz // H.n_cols), int(H.col_weights().max()))


def fractional_density_bound(H: SparseBinaryMatrix) -> Fraction:
    """Same bound for the fractional layer number k/t of a t-cover, without rounding."""
    if H.n_cols == 0 or H.nnz == 0:
        return Fraction(0)
    return max(Fraction(H.nnz, H.n_cols), Fraction(int(H.col_weights().max())))


def validate_cover(H: SparseBinaryMatrix, cover: LayerCover) -> CoverReport:
    problems = []
    if cover.m != H.n_rows:
        problems.append(f"cover is over {cover.m} checks but H has {H.n_rows} rows")
    if cover.t < 1:
        problems.append("t must be positive")
    counts = np.zeros(max(cover.m, H.n_rows), dtype=np.int64)
    for i, L in enumerate(cover.layers):
        if len(set(L)) != len(L):
            problems.append(f"layer {i} repeats a check")
        if any(c < 0 or c >= H.n_rows for c in L):
            problems.append(f"layer {i} has an out-of-range check")
            continue
        if not is_layer(H, L):
            problems.append(f"layer {i} has overlapping checks")
        np.add.at(counts, list(L), 1)
    bad = np.flatnonzero(counts[: H.n_rows] != cover.t)
    if bad.size:
        problems.append(f"{bad.size} checks not covered exactly {cover.t} times (first: {bad[0]})")
    return CoverReport(
        t=cover.t,
        k=cover.k,
        gamma=tightest_balance(cover.sizes()),
        fractional=cover.fractional,
        valid=not problems,
        lower_bound=density_bound(H),
        problems=tuple(problems),
    )


def greedy_decompose(H: SparseBinaryMatrix) -> LayerCover:
    """Greedy coloring of the check conflict graph, largest degree first.

    Ties in degree keep row order; each check takes the smallest layer
    index not used by an already placed neighbour.
    """
    m = H.n_rows
    h = H.to_scipy()
    adj = (h @ h.T).tocsr()
    adj.setdiag(0)
    adj.eliminate_zeros()
    degree = np.diff(adj.indptr)
    order = np.argsort(-degree, kind="stable")
    color = np.full(m, -1, dtype=np.int64)
    for c in order:
        nbrs = adj.indices[adj.indptr[c] : adj.indptr[c + 1]]
        used = set(color[nbrs][color[nbrs] >= 0].tolist())
        col = 0
        while col in used:
            col += 1
        color[c] = col
    k = int(color.max()) + 1 if m else 0
    return LayerCover([np.flatnonzero(color == i).tolist() for i in range(k)], m)


# Layers of the 31 x 31 circulant of 1 + x^2 + x^5 (valid for it and its transpose).
C2_COMPONENT_LAYERS = (
    (0, 1, 7, 8, 14, 15, 21, 22),
    (2, 3, 9, 10, 16, 17, 23, 24),
    (4, 11, 18, 25, 29),
    (5, 12, 19, 26, 30),
    (6, 13, 20, 27, 28),
)


def c2_component_layers() -> LayerCover:
    return LayerCover(C2_COMPONENT_LAYERS, 31)


def hgp_layers(
    decomp_a: LayerCover,
    decomp_bt: LayerCover,
    sigma: Sequence[int] | None = None,
    A: SparseBinaryMatrix | None = None,
    Bt: SparseBinaryMatrix | None = None,
) -> LayerCover:
    """Layer decomposition of a hypergraph-product H_X from decompositions of A and B^t.

    Check a*m_Bt + b goes to layer i iff a is in A_sigma(j) and b is in
    B^t_(j+i mod k) for some j, with k = max(k_A, k_Bt) and the smaller
    decomposition padded by empty layers. If A and Bt are passed, the input
    decompositions are validated against them first.
    """
    for name, dec, mat in (("A", decomp_a, A), ("B^t", decomp_bt, Bt)):
        if dec.t != 1:
            raise ValueError(f"decomposition of {name} must have t = 1")
        if mat is not None:
            rep = validate_cover(mat, dec)
        else:
            rep = validate_cover(SparseBinaryMatrix(dec.m, 0, [[]] * dec.m), dec)
        if not rep.valid:
            raise ValueError(f"invalid decomposition of {name}: {'; '.join(rep.problems)}")
    k = max(decomp_a.k, decomp_bt.k)
    a_layers = list(decomp_a.layers) + [()] * (k - decomp_a.k)
    b_layers = list(decomp_bt.layers) + [()] * (k - decomp_bt.k)
    if sigma is None:
        sigma = range(k)
    sigma = [int(s) for s in sigma]
    if sorted(sigma) != list(range(k)):
        raise ValueError(f"sigma must be a permutation of range({k})")
    m_bt = decomp_bt.m
    layers = []
    for i in range(k):
        rows = []
        for j in range(k):
            bs = np.asarray(b_layers[(j + i) % k], dtype=np.int64)
            for a in a_layers[sigma[j]]:
                rows.extend((a * m_bt + bs).tolist())
        layers.append(sorted(rows))
    return LayerCover(layers, decomp_a.m * m_bt)


def c2_layers(sigma: Sequence[int] | None = None) -> LayerCover:
    """The 5-layer decomposition of H_X of C2 built from the component table."""
    comp = c2_component_layers()
    return hgp_layers(comp, comp, sigma)


def restrict_to_a_row(cover: LayerCover, a_row: int, m_bt: int) -> LayerCover:
    """Decomposition of B^t induced by the rows {a_row (x) b : all b} of H_X."""
    lo, hi = a_row * m_bt, (a_row + 1) * m_bt
    layers = [[c - lo for c in L if lo <= c < hi] for L in cover.layers]
    return LayerCover([L for L in layers if L], m_bt)


def b1_cover(m: int = 441) -> LayerCover:
    """The 2-cover in 7 layers: L_i holds the checks congruent to i or i+3 mod 7."""
    if m <= 0 or m % 7:
        raise ValueError(f"check count {m} is not a positive multiple of 7")
    checks = np.arange(m)
    layers = [checks[np.isin(checks % 7, (i, (i + 3) % 7))].tolist() for i in range(7)]
    return LayerCover(layers, m, t=2)


# Cover files: "t k m" on the first line, then one line of check indices per layer.


def write_cover(cover: LayerCover, path: str | os.PathLike) -> None:
    lines = [f"{cover.t} {cover.k} {cover.m}"]
    lines += [" ".join(str(c) for c in L) for L in cover.layers]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_cover(path: str | os.PathLike) -> LayerCover:
    with open(path) as fh:
        lines = fh.read().splitlines()
    try:
        t, k, m = (int(x) for x in lines[0].split())
        layers = [[int(x) for x in ln.split()] for ln in lines[1 : 1 + k]]
    except (IndexError, ValueError) as exc:
        raise ValueError(f"malformed cover file {path}: {exc}") from exc
    if len(layers) != k:
        raise ValueError(f"malformed cover file {path}: expected {k} layers, got {len(layers)}")
    return LayerCover(layers, m, t=t)
