"""CSS codes: hypergraph products, validity and dimension, named codes."""

from __future__ import annotations

import os
from dataclasses import dataclass
from importlib import resources
from typing import NamedTuple

import numpy as np
import scipy.sparse as sp

from .gf2 import SparseBinaryMatrix, circulant, gf2_rank, read_alist

__all__ = [
    "CssCode",
    "HgpRowLabel",
    "hypergraph_product",
    "css_validate",
    "css_dimension",
    "build_c2",
    "load_css",
    "load_b1",
    "get_code",
    "C2_POLYNOMIAL",
    "C2_LENGTH",
]

C2_POLYNOMIAL = (0, 2, 5)  # 1 + x^2 + x^5
C2_LENGTH = 31


@dataclass(frozen=True, eq=False)
class CssCode:
    h_x: SparseBinaryMatrix
    h_z: SparseBinaryMatrix
    name: str = ""

    def __post_init__(self):
        if self.h_x.n_cols != self.h_z.n_cols:
            raise ValueError(
                f"H_X has {self.h_x.n_cols} columns but H_Z has {self.h_z.n_cols}"
            )

    @property
    def n(self) -> int:
        return self.h_x.n_cols

    @property
    def m_x(self) -> int:
        return self.h_x.n_rows

    @property
    def m_z(self) -> int:
        return self.h_z.n_rows

    def __eq__(self, other) -> bool:
        if not isinstance(other, CssCode):
            return NotImplemented
        return self.h_x == other.h_x and self.h_z == other.h_z


class HgpRowLabel(NamedTuple):
    """Row ``a_row * m_Bt + b_row`` of a hypergraph-product H_X."""

    a_row: int
    b_row: int

    def index(self, m_bt: int) -> int:
        return self.a_row * m_bt + self.b_row

    @classmethod
    def from_index(cls, index: int, m_bt: int) -> HgpRowLabel:
        return cls(*divmod(index, m_bt))


def hypergraph_product(A: SparseBinaryMatrix, B: SparseBinaryMatrix, name: str = "") -> CssCode:
    """H_X = [A (x) I, I (x) B^t],  H_Z = [I (x) B, A^t (x) I].

    With A of shape (m_A, n_A) and B of shape (m_B, n_B), H_X has m_A * n_B
    rows; row a * n_B + b is the label (a, b) with b a row of B^t.
    """
    a, b = A.to_scipy(), B.to_scipy()
    (m_a, n_a), (m_b, n_b) = A.shape, B.shape
    hx = sp.hstack([sp.kron(a, sp.identity(n_b)), sp.kron(sp.identity(m_a), b.T)])
    hz = sp.hstack([sp.kron(sp.identity(n_a), b), sp.kron(a.T, sp.identity(m_b))])
    return CssCode(SparseBinaryMatrix.from_scipy(hx), SparseBinaryMatrix.from_scipy(hz), name)


def css_validate(code: CssCode) -> bool:
    """True iff every row of H_X has even overlap with every row of H_Z."""
    if code.h_x.n_cols != code.h_z.n_cols:
        return False
    prod = code.h_x.to_scipy() @ code.h_z.to_scipy().T
    return not np.any(prod.data % 2)


def css_dimension(code: CssCode) -> int:
    return code.n - gf2_rank(code.h_x) - gf2_rank(code.h_z)


def build_c2() -> CssCode:
    """Hypergraph product of the length-31 circulant of 1 + x^2 + x^5 with itself."""
    A = circulant(C2_POLYNOMIAL, C2_LENGTH)
    return hypergraph_product(A, A, name="c2")


def load_css(path_x: str | os.PathLike, path_z: str | os.PathLike, name: str = "") -> CssCode:
    h_x, h_z = read_alist(path_x), read_alist(path_z)
    if h_x.n_cols != h_z.n_cols:
        raise ValueError(
            f"{path_x} has {h_x.n_cols} columns but {path_z} has {h_z.n_cols}"
        )
    code = CssCode(h_x, h_z, name)
    if not css_validate(code):
        raise ValueError(f"{path_x} and {path_z} do not commute (H_X H_Z^t != 0)")
    return code


def load_b1() -> CssCode:
    """The [[882, 24]] generalized hypergraph product code shipped as alist data."""
    data = resources.files("layered_qldpc") / "data"
    with resources.as_file(data / "b1_hx.alist") as px, resources.as_file(
        data / "b1_hz.alist"
    ) as pz:
        return load_css(px, pz, name="b1")


_REGISTRY = {"c2": build_c2, "b1": load_b1}


def get_code(name: str) -> CssCode:
    try:
        return _REGISTRY[name.lower()]()
    except KeyError:
        raise ValueError(f"unknown code {name!r}; known: {sorted(_REGISTRY)}") from None
