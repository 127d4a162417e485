"""Phase space ``Xi = G x dual``, the Heisenberg cocycle and its representations.

A phase point ``(x, nu)`` is stored either as a :class:`PhasePoint` or as its
flat index ``index(x) * |G| + index(nu)``.  The cocycle is built from a phase
table ``a`` on ``Xi``::

    m((x, nu), (y, mu)) = a(x, nu) a(y, mu) / a(xy, nu mu) * conj(mu(x))

and the standard representation on ``L^2(G)`` is
``(U_(x, nu) f)(y) = a(x, nu) nu(y) f(x^{-1} y)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Optional

import numpy as np

from .group import FiniteAbelianGroup

__all__ = [
    "PhasePoint",
    "Cocycle",
    "phase_index",
    "phase_point",
    "phase_inv",
    "phase_op",
    "cocycle_m",
    "rep_U",
    "rep_U_matrix",
    "rep_V",
    "rep_V_matrix",
    "SigmaReport",
    "sigma_iso_check",
    "parity",
    "parity_matrix",
    "parity_intertwine_check",
]


class PhasePoint(NamedTuple):
    x: tuple
    nu: tuple

    def to_json(self) -> dict:
        return {"x": list(self.x), "nu": list(self.nu)}

    @classmethod
    def from_json(cls, data: dict) -> "PhasePoint":
        return cls(tuple(data["x"]), tuple(data["nu"]))


def phase_index(g: FiniteAbelianGroup, p) -> int:
    if isinstance(p, (int, np.integer)):
        if not 0 <= p < g.size**2:
            raise ValueError(f"phase index {p} out of range")
        return int(p)
    x, nu = p
    return g.index(x) * g.size + g.index(nu)


def phase_point(g: FiniteAbelianGroup, i: int) -> PhasePoint:
    ix, inu = divmod(int(i), g.size)
    return PhasePoint(g.element_at(ix), g.element_at(inu))


def _split(g, i):
    return np.divmod(i, g.size)


def phase_op(g: FiniteAbelianGroup, p, q) -> int:
    (ix, inu), (iy, imu) = _split(g, phase_index(g, p)), _split(g, phase_index(g, q))
    return int(g.add_table[ix, iy] * g.size + g.add_table[inu, imu])


def phase_inv(g: FiniteAbelianGroup, p) -> int:
    ix, inu = _split(g, phase_index(g, p))
    return int(g.neg[ix] * g.size + g.neg[inu])


class Cocycle:
    """Standard Heisenberg multiplier on ``G x dual`` with phase table ``a``.

    Parameters
    ----------
    group : FiniteAbelianGroup
    a_table : array_like, optional
        Unit-modulus values ``a(x, nu)`` in phase order.  Defaults to ``a = 1``.
        Must satisfy ``a(e, 1) = 1`` and ``a(x^{-1}, nu^{-1}) = a(x, nu)``.
    """

    def __init__(self, group: FiniteAbelianGroup, a_table=None, atol: float = 1e-12):
        self.group = group
        n = group.size
        if a_table is None:
            a = np.ones(n * n, dtype=complex)
        else:
            a = np.asarray(a_table, dtype=complex).ravel()
            if a.shape != (n * n,):
                raise ValueError(f"a-table must have {n * n} entries, got {a.size}")
            if np.max(np.abs(np.abs(a) - 1.0)) > atol:
                raise ValueError("a-table entries must have modulus 1")
            if abs(a[0] - 1.0) > atol:
                raise ValueError("a-table must satisfy a(e, 1) = 1")
            if np.max(np.abs(a[self.neg] - a)) > atol:
                raise ValueError("a-table must satisfy a(x^-1, nu^-1) = a(x, nu)")
        self.a = a
        self.a.setflags(write=False)

    @property
    def size(self) -> int:
        """Number of phase points."""
        return self.group.size ** 2

    @cached_property
    def neg(self) -> np.ndarray:
        g = self.group
        return (g.neg[:, None] * g.size + g.neg[None, :]).ravel()

    @cached_property
    def add(self) -> np.ndarray:
        """``add[p, q]`` is the index of the phase point ``p q``."""
        g = self.group
        n = g.size
        t = g.add_table
        return (t[:, None, :, None] * n + t[None, :, None, :]).reshape(n * n, n * n)

    @cached_property
    def sub(self) -> np.ndarray:
        """``sub[p, q]`` is the index of ``p^{-1} q``."""
        return self.add[self.neg, :]

    @cached_property
    def table(self) -> np.ndarray:
        """``table[p, q] = m(p, q)`` for all pairs of phase points."""
        g = self.group
        n = g.size
        x = np.repeat(np.arange(n), n)
        mu = np.tile(np.arange(n), n)
        # conj(mu(x)) with p = (x, .) and q = (., mu)
        phase = g.characters[mu[None, :], x[:, None]].conj()
        return self.a[:, None] * self.a[None, :] / self.a[self.add] * phase

    @cached_property
    def twist(self) -> np.ndarray:
        """``twist[y, x] = m(y, y^{-1} x)``, the twisted-convolution phase."""
        return np.take_along_axis(self.table, self.sub, axis=1)

    def m(self, p, q) -> complex:
        g = self.group
        return complex(self.table[phase_index(g, p), phase_index(g, q)])

    def a_to_json(self) -> list:
        return [[float(z.real), float(z.imag)] for z in self.a]


def cocycle_m(c: Cocycle, xi, eta) -> complex:
    return c.m(xi, eta)


def rep_U_matrix(c: Cocycle, xi) -> np.ndarray:
    """Matrix of ``U_xi`` acting on coefficient vectors (row = output point)."""
    g = c.group
    p = phase_index(g, xi)
    ix, inu = divmod(p, g.size)
    n = g.size
    mat = np.zeros((n, n), dtype=complex)
    rows = np.arange(n)
    cols = g.sub_table[ix, rows]  # x^{-1} y
    mat[rows, cols] = c.a[p] * g.characters[inu, rows]
    return mat


def rep_U(c: Cocycle, xi, f) -> np.ndarray:
    f = np.asarray(f, dtype=complex)
    if f.shape != (c.group.size,):
        raise ValueError(f"signal must have length {c.group.size}")
    return rep_U_matrix(c, xi) @ f


def rep_V_matrix(c: Cocycle, xi) -> np.ndarray:
    """Matrix of ``(V_x F)(y) = m(x, x^{-1}) / m(x^{-1}, y) F(x^{-1} y)``."""
    p = phase_index(c.group, xi)
    pinv = c.neg[p]
    n = c.size
    rows = np.arange(n)
    mat = np.zeros((n, n), dtype=complex)
    mat[rows, c.sub[p, rows]] = c.table[p, pinv] / c.table[pinv, rows]
    return mat


def rep_V(c: Cocycle, xi, F) -> np.ndarray:
    F = np.asarray(F, dtype=complex)
    if F.shape != (c.size,):
        raise ValueError(f"phase function must have length {c.size}")
    return rep_V_matrix(c, xi) @ F


@dataclass
class SigmaReport:
    passed: bool
    failure: Optional[str] = None
    witness: Optional[tuple] = None


def _phase_generators(c: Cocycle) -> list:
    g = c.group
    gens = []
    for j in range(g.rank):
        unit = [0] * g.rank
        unit[j] = 1 % g.orders[j]
        u = g.index(unit)
        gens.append(u * g.size)  # (u, 1)
        gens.append(u)  # (e, u)
    return gens


def sigma_iso_check(c: Cocycle, atol: float = 1e-10, max_points: int = 4096) -> SigmaReport:
    """Check that ``xi -> m(xi, .) / m(., xi)`` is an isomorphism onto the dual of Xi.

    Multiplicativity is checked against a generating set in each slot, which
    together with ``sigma(e, .) = 1`` covers every pair; injectivity is checked
    as triviality of the kernel over all phase points.
    """
    if c.size > max_points:
        raise ValueError(f"|Xi| = {c.size} exceeds the exhaustive limit {max_points}")
    s = c.table / c.table.T
    if np.max(np.abs(s[0] - 1)) > atol or np.max(np.abs(s[:, 0] - 1)) > atol:
        return SigmaReport(False, "sigma(e, .) is not trivial", (0, 0))
    for h in _phase_generators(c):
        # sigma(xi, eta h) = sigma(xi, eta) sigma(xi, h)
        err = np.abs(s[:, c.add[:, h]] - s * s[:, [h]])
        if err.max() > atol:
            xi, eta = np.unravel_index(err.argmax(), err.shape)
            return SigmaReport(False, "sigma(xi, .) is not a character", (int(xi), int(eta), h))
        err = np.abs(s[c.add[:, h], :] - s * s[[h], :])
        if err.max() > atol:
            xi, eta = np.unravel_index(err.argmax(), err.shape)
            return SigmaReport(False, "xi -> sigma(xi, .) is not a homomorphism", (int(xi), h, int(eta)))
    trivial = np.all(np.abs(s - 1) <= atol, axis=1)
    trivial[0] = False
    if trivial.any():
        return SigmaReport(False, "kernel of xi -> sigma(xi, .) is nontrivial", (int(np.argmax(trivial)),))
    return SigmaReport(True)


def parity(g: FiniteAbelianGroup, f) -> np.ndarray:
    """``(Rf)(y) = f(y^{-1})``; other admissible choices differ by a phase."""
    f = np.asarray(f, dtype=complex)
    if f.shape != (g.size,):
        raise ValueError(f"signal must have length {g.size}")
    return f[g.neg]


def parity_matrix(g: FiniteAbelianGroup) -> np.ndarray:
    return np.eye(g.size, dtype=complex)[g.neg]


def parity_intertwine_check(c: Cocycle, xi, atol: float = 1e-12) -> tuple[bool, float]:
    """Residual of ``R U_xi = U_{xi^{-1}} R`` in Frobenius norm."""
    g = c.group
    R = parity_matrix(g)
    lhs = R @ rep_U_matrix(c, xi)
    rhs = rep_U_matrix(c, phase_inv(g, xi)) @ R
    res = float(np.linalg.norm(lhs - rhs))
    return res < atol, res
