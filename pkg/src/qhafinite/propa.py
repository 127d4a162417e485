"""Følner boxes in ``Z^d`` and the almost-invariant partition of unity built from them.

For a box ``K = [0, N)^d`` the functions ``rho_j = |K|^{-1} 1_{j + K}`` sum to
one, are supported in translates of ``K`` and satisfy
``sum_j |rho_j(g) - rho_j(g - h)| = |(K + h) ^ K| / |K|`` (symmetric
difference), so choosing ``K`` as a Følner set for ``(eps, H)`` gives
property A'.  Everything here is evaluated exactly by counting lattice points;
rational values are kept as :class:`fractions.Fraction`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

__all__ = [
    "FolnerSet",
    "PartitionOfUnity",
    "PartitionReport",
    "folner_ratio",
    "folner_for",
    "build_partition",
    "verify_partition",
    "unit_cross",
]


def _as_points(H, d: Optional[int] = None) -> np.ndarray:
    pts = np.asarray([np.atleast_1d(h) for h in H], dtype=np.int64)
    if pts.ndim != 2:
        raise ValueError("probe set must be a list of lattice points")
    if d is not None and pts.shape[1] != d:
        raise ValueError(f"probe points must have dimension {d}")
    return pts


def unit_cross(d: int) -> list:
    """``{0, +-e_1, ..., +-e_d}``."""
    pts = [(0,) * d]
    for ax in range(d):
        for s in (1, -1):
            e = [0] * d
            e[ax] = s
            pts.append(tuple(e))
    return pts


@dataclass(frozen=True)
class FolnerSet:
    """The box ``[0, N_1) x ... x [0, N_d)``."""

    sides: tuple

    def __post_init__(self):
        if not self.sides or min(self.sides) < 1:
            raise ValueError("box sides must be positive")

    @classmethod
    def cube(cls, N: int, d: int = 1) -> "FolnerSet":
        return cls((int(N),) * d)

    @property
    def d(self) -> int:
        return len(self.sides)

    @property
    def size(self) -> int:
        return int(np.prod(self.sides))

    def points(self) -> np.ndarray:
        grids = np.indices(self.sides).reshape(self.d, -1)
        return grids.T

    def point_set(self) -> set:
        return {tuple(int(v) for v in p) for p in self.points()}


def folner_ratio(K: FolnerSet, h) -> Fraction:
    """``|(K + h) ^ K| / |K|`` by explicit enumeration."""
    pts = K.point_set()
    h = tuple(int(v) for v in np.atleast_1d(h))
    moved = {tuple(a + b for a, b in zip(p, h)) for p in pts}
    return Fraction(len(pts ^ moved), len(pts))


def folner_for(eps: float, H: Iterable, d: Optional[int] = None, max_side: int = 100000) -> FolnerSet:
    """Smallest cube ``[0, N)^d`` with ``max_h |(K + h) ^ K| / |K| < eps``."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    pts = _as_points(list(H), d)
    d = pts.shape[1]
    eps = Fraction(eps).limit_denominator(10**12) if isinstance(eps, float) else Fraction(eps)
    for N in range(1, max_side + 1):
        K = FolnerSet.cube(N, d)
        if all(folner_ratio(K, h) < eps for h in pts):
            return K
    raise RuntimeError(f"no Følner cube with side <= {max_side}")


@dataclass
class PartitionOfUnity:
    """``rho_j = |K|^{-1} 1_{j + K}`` for ``j`` in the index box, on ``[-W, W]^d``.

    ``indicator[a, b]`` is 1 when window point ``b`` lies in ``index[a] + K``.
    """

    K: FolnerSet
    radius: int
    index: np.ndarray
    window: np.ndarray
    indicator: np.ndarray = field(repr=False)

    @property
    def d(self) -> int:
        return self.K.d

    def rho(self, a: int) -> np.ndarray:
        """Values of ``rho_{index[a]}`` on the window as exact fractions."""
        return np.array([Fraction(int(v), self.K.size) for v in self.indicator[a]], dtype=object)

    def window_index(self, points: np.ndarray) -> np.ndarray:
        """Flat window index of lattice points (``-1`` outside the window)."""
        W = self.radius
        pts = np.atleast_2d(points)
        inside = np.all(np.abs(pts) <= W, axis=1)
        width = 2 * W + 1
        strides = width ** np.arange(self.d - 1, -1, -1)
        out = (pts + W) @ strides
        return np.where(inside, out, -1)

    def interior(self, H) -> np.ndarray:
        """Window points ``g`` with ``g - K`` and ``g - h - K`` inside the index box for all ``h``."""
        lo = self.index.min(axis=0)
        hi = self.index.max(axis=0)
        sides = np.asarray(self.K.sides)
        H = _as_points(list(H), self.d)
        ok = np.ones(len(self.window), dtype=bool)
        for h in np.vstack([np.zeros((1, self.d), dtype=np.int64), H]):
            g = self.window - h
            ok &= np.all(g - sides + 1 >= lo, axis=1) & np.all(g <= hi, axis=1)
        return ok


def _box(lo, hi) -> np.ndarray:
    axes = [np.arange(a, b + 1) for a, b in zip(lo, hi)]
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(lo))


def build_partition(K: FolnerSet, radius: int, H: Sequence = ()) -> PartitionOfUnity:
    """Partition of unity on the window ``[-radius, radius]^d``.

    The index set is every ``j`` with ``j + K`` inside the window.  Raises if
    the window leaves no interior point for the probe set ``H``.
    """
    d = K.d
    sides = np.asarray(K.sides)
    Hp = _as_points(list(H), d) if len(H) else np.zeros((1, d), dtype=np.int64)
    span = Hp.max(axis=0) - Hp.min(axis=0)
    need = int(np.max(sides - 1 + (span + 1) // 2))
    if radius < need:
        raise ValueError(f"window radius {radius} too small for box {K.sides}; need at least {need}")
    lo = np.full(d, -radius)
    hi = radius - sides + 1
    index = _box(lo, hi)
    window = _box(np.full(d, -radius), np.full(d, radius))
    rel = window[None, :, :] - index[:, None, :]
    indicator = np.all((rel >= 0) & (rel < sides), axis=2).astype(np.int64)
    return PartitionOfUnity(K, radius, index, window, indicator)


@dataclass
class PartitionReport:
    N: tuple
    ratio: Fraction
    checks: dict
    interior_points: int

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks.values())

    def to_json(self) -> dict:
        def enc(v):
            if isinstance(v, Fraction):
                return {"exact": str(v), "value": float(v)}
            if isinstance(v, dict):
                return {k: enc(x) for k, x in v.items()}
            if isinstance(v, (list, tuple)):
                return [enc(x) for x in v]
            if isinstance(v, np.integer):
                return int(v)
            return v
        return {
            "N": list(self.N),
            "ratio": enc(self.ratio),
            "interior_points": self.interior_points,
            "checks": enc(self.checks),
        }


def verify_partition(P: PartitionOfUnity, H: Sequence, eps: float,
                     probe: Optional[Sequence] = None) -> PartitionReport:
    """Evaluate conditions (i)-(iv) of property A' exactly on the window interior.

    (i) ``sum_j rho_j(g) = 1``; (ii) ``supp rho_j subset j + K``;
    (iii) ``sum_j |rho_j(g) - rho_j(g - h)| < eps`` (its exact value for each
    ``h`` is reported); (iv) the number of ``j`` whose support meets ``probe``
    equals ``|probe - K|``.
    """
    d = P.d
    Hp = _as_points(list(H), d)
    size = P.K.size
    interior = P.interior(Hp)
    if not interior.any():
        raise ValueError("window has no interior points for this probe set")
    g_idx = np.flatnonzero(interior)
    checks = {}

    sums = P.indicator[:, g_idx].sum(axis=0)
    bad = np.flatnonzero(sums != size)
    checks["i"] = {
        "passed": bad.size == 0,
        "value": Fraction(int(sums.min()), size) if bad.size else Fraction(1),
        "witness": None if bad.size == 0 else P.window[g_idx[bad[0]]].tolist(),
    }

    rel = P.window[None, :, :] - P.index[:, None, :]
    in_box = np.all((rel >= 0) & (rel < np.asarray(P.K.sides)), axis=2)
    leak = (P.indicator > 0) & ~in_box
    checks["ii"] = {
        "passed": not leak.any(),
        "value": list(P.K.sides),
        "witness": None if not leak.any() else np.argwhere(leak)[0].tolist(),
    }

    per_h = {}
    worst = Fraction(0)
    passed = True
    witness = None
    for h in Hp:
        shifted = P.window_index(P.window[g_idx] - h)
        diff = np.abs(P.indicator[:, g_idx] - P.indicator[:, shifted]).sum(axis=0)
        values = {Fraction(int(v), size) for v in np.unique(diff)}
        top = max(values)
        per_h[str([int(v) for v in h])] = top if len(values) == 1 else {"max": top, "min": min(values)}
        if top > worst:
            worst = top
        if not top < Fraction(eps).limit_denominator(10**12):
            passed = False
            witness = witness or {"h": h.tolist(), "g": P.window[g_idx[np.argmax(diff)]].tolist()}
    checks["iii"] = {"passed": passed, "value": worst, "per_h": per_h, "witness": witness}

    if probe is None:
        probe = [tuple(p) for p in Hp]
    probe_pts = _as_points(list(probe), d)
    meets = np.zeros(len(P.index), dtype=bool)
    for p in probe_pts:
        rel_p = p - P.index
        meets |= np.all((rel_p >= 0) & (rel_p < np.asarray(P.K.sides)), axis=1)
    count = int(meets.sum())
    expected = len({tuple(int(v) for v in p - k) for p in probe_pts for k in P.K.points()})
    checks["iv"] = {"passed": count == expected, "value": count, "expected": expected, "witness": None}

    ratio = max((Fraction(0),) + tuple(folner_ratio(P.K, h) for h in Hp))
    return PartitionReport(tuple(P.K.sides), ratio, checks, int(g_idx.size))
