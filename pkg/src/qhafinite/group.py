"""Finite abelian groups Z_{n1} x ... x Z_{nk}, their duals and Fourier transforms.

Elements of G and of the dual group are both residue tuples; the dual element
``nu`` acts on ``x`` through ``exp(2 pi i sum_j nu_j x_j / n_j)``.  All vectors
are indexed by the lexicographic enumeration of residues (last axis fastest).

Haar weights are fixed as ``w_G = 1`` (counting measure) and
``w_dual = 1 / |G|`` so that the phase space ``G x dual`` carries
``w_Xi = 1 / |G|``.
"""
from __future__ import annotations

from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "FiniteAbelianGroup",
    "make_group",
    "group_op",
    "group_inv",
    "character_eval",
    "fourier",
    "fourier_dual",
    "inverse_fourier",
]


class FiniteAbelianGroup:
    """The group ``Z_{n1} x ... x Z_{nk}``.

    Parameters
    ----------
    orders : sequence of int
        Cyclic factor orders, each at least 1.
    auto_reduce : bool
        If true, element tuples passed to :meth:`element` are reduced modulo
        the orders instead of being rejected when out of range.
    """

    def __init__(self, orders: Sequence[int], auto_reduce: bool = False):
        orders = tuple(int(n) for n in orders)
        if not orders:
            raise ValueError("a group needs at least one cyclic factor")
        if any(n < 1 for n in orders):
            raise ValueError(f"cyclic orders must be positive, got {orders}")
        self.orders = orders
        self.auto_reduce = auto_reduce
        self.size = int(np.prod(orders))

    def __repr__(self):
        return f"FiniteAbelianGroup({list(self.orders)})"

    def __eq__(self, other):
        return isinstance(other, FiniteAbelianGroup) and self.orders == other.orders

    def __hash__(self):
        return hash(self.orders)

    def __len__(self):
        return self.size

    @property
    def rank(self) -> int:
        return len(self.orders)

    @property
    def identity(self) -> tuple:
        return (0,) * self.rank

    # Haar weights
    @property
    def w_group(self) -> float:
        return 1.0

    @property
    def w_dual(self) -> float:
        return 1.0 / self.size

    @property
    def w_phase(self) -> float:
        return self.w_group * self.w_dual

    @cached_property
    def elements(self) -> np.ndarray:
        """Residue array of shape ``(|G|, k)`` in lexicographic order."""
        grids = np.indices(self.orders).reshape(self.rank, -1)
        return np.ascontiguousarray(grids.T)

    @cached_property
    def _strides(self) -> np.ndarray:
        strides = np.ones(self.rank, dtype=np.int64)
        for j in range(self.rank - 2, -1, -1):
            strides[j] = strides[j + 1] * self.orders[j + 1]
        return strides

    def element(self, residues) -> tuple:
        """Validate (or reduce) a residue tuple."""
        if np.isscalar(residues):
            residues = (residues,)
        residues = tuple(int(r) for r in residues)
        if len(residues) != self.rank:
            raise ValueError(f"element {residues} does not match orders {self.orders}")
        if self.auto_reduce:
            return tuple(r % n for r, n in zip(residues, self.orders))
        for r, n in zip(residues, self.orders):
            if not 0 <= r < n:
                raise ValueError(f"element {residues} is not reduced modulo {self.orders}")
        return residues

    def index(self, residues) -> int:
        return int(np.dot(self.element(residues), self._strides))

    def index_array(self, residues: np.ndarray) -> np.ndarray:
        """Vectorized index of an ``(..., k)`` residue array (reduced on the fly)."""
        residues = np.mod(residues, self.orders)
        return residues @ self._strides

    def element_at(self, i: int) -> tuple:
        return tuple(int(r) for r in self.elements[i])

    @cached_property
    def add_table(self) -> np.ndarray:
        """``add_table[i, j]`` is the index of ``x_i x_j``."""
        e = self.elements
        return self.index_array(e[:, None, :] + e[None, :, :])

    @cached_property
    def neg(self) -> np.ndarray:
        """``neg[i]`` is the index of ``x_i^{-1}``."""
        return self.index_array(-self.elements)

    @cached_property
    def sub_table(self) -> np.ndarray:
        """``sub_table[i, j]`` is the index of ``x_i^{-1} x_j``."""
        e = self.elements
        return self.index_array(e[None, :, :] - e[:, None, :])

    @cached_property
    def characters(self) -> np.ndarray:
        """``characters[nu, x] = nu(x)`` as a ``(|G|, |G|)`` complex matrix."""
        e = self.elements
        frac = (e[:, None, :] * e[None, :, :] / np.asarray(self.orders)).sum(axis=-1)
        return np.exp(2j * np.pi * np.mod(frac, 1.0))

    def iter_elements(self) -> Iterable[tuple]:
        for i in range(self.size):
            yield self.element_at(i)

    def to_json(self) -> dict:
        return {"orders": list(self.orders)}

    @classmethod
    def from_json(cls, data: dict) -> "FiniteAbelianGroup":
        return cls(data["orders"])


def make_group(orders: Sequence[int], auto_reduce: bool = False) -> FiniteAbelianGroup:
    return FiniteAbelianGroup(orders, auto_reduce=auto_reduce)


def group_op(g: FiniteAbelianGroup, a, b) -> tuple:
    a, b = g.element(a), g.element(b)
    return tuple((x + y) % n for x, y, n in zip(a, b, g.orders))


def group_inv(g: FiniteAbelianGroup, a) -> tuple:
    a = g.element(a)
    return tuple((-x) % n for x, n in zip(a, g.orders))


def character_eval(g: FiniteAbelianGroup, nu, x) -> complex:
    nu, x = g.element(nu), g.element(x)
    frac = sum(a * b / n for a, b, n in zip(nu, x, g.orders)) % 1.0
    return complex(np.exp(2j * np.pi * frac))


def _check_length(g, f):
    f = np.asarray(f, dtype=complex)
    if f.shape != (g.size,):
        raise ValueError(f"expected a vector of length {g.size}, got shape {f.shape}")
    return f


def fourier(g: FiniteAbelianGroup, f) -> np.ndarray:
    """``(Ff)(nu) = sum_x f(x) conj(nu(x)) w_G``."""
    f = _check_length(g, f)
    return g.characters.conj() @ f * g.w_group


def fourier_dual(g: FiniteAbelianGroup, h) -> np.ndarray:
    """Transform of a function on the dual: ``h^(t) = sum_nu h(nu) conj(nu(t)) w_dual``."""
    h = _check_length(g, h)
    return g.characters.conj().T @ h * g.w_dual


def inverse_fourier(g: FiniteAbelianGroup, h) -> np.ndarray:
    """Inverse of :func:`fourier`: ``f(x) = sum_nu h(nu) nu(x) w_dual``."""
    h = _check_length(g, h)
    return g.characters.T @ h * g.w_dual
