"""Band operators on a window ``[-N, N]^d`` of ``Z^d`` and their limit operators.

A :class:`BandedZOperator` stores each diagonal ``k`` as the sequence
``b_k(j) = B[j, j + k]`` on the window, together with a declared tail class
that says how the sequence continues outside it:

* ``c0`` -- tends to zero;
* ``convergent`` -- tends to a constant along each coordinate direction;
* ``periodic`` -- is periodic with a given period per axis;
* ``unstructured`` -- no information; limit operators are refused.

Indexing is additive; the multiplicative ``j m`` of the group notation is
``j + m`` here.  ``shift(B, m)`` is ``alpha_(m,1)(B)`` with entries
``B[j - m, k - m]``, and a limit operator along ``m_n -> infinity`` collects
the entries ``B[j + m_n, k + m_n]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .group import FiniteAbelianGroup
from .opalg import KernelOperator

__all__ = [
    "Tail",
    "Diagonal",
    "BandedZOperator",
    "LimitOperatorSpec",
    "UnstructuredTailError",
    "WindowExhaustedError",
    "TailConsistencyError",
    "CompactnessReport",
    "GalleryItem",
    "shift",
    "limit_operator",
    "limit_operators",
    "compactness_diagnostic",
    "tail_norms",
    "periodize",
    "example_gallery",
]

TAIL_CLASSES = ("c0", "convergent", "periodic", "unstructured")


class UnstructuredTailError(ValueError):
    """Limit operators are undefined for a diagonal without a structured tail."""


class WindowExhaustedError(ValueError):
    """The requested shift moves beyond the stored window."""


class TailConsistencyError(ValueError):
    """Stored window values contradict the declared tail class."""


@dataclass(frozen=True)
class Tail:
    """Declared behaviour of a diagonal outside the window.

    ``limits`` maps ``(axis, sign)`` to the limit value (convergent class);
    ``period`` gives one period per axis (periodic class); ``tol`` is the
    tolerance used when checking the window edge against the declaration.
    """

    kind: str = "c0"
    limits: tuple = ()
    period: tuple = ()
    tol: float = 1e-2

    def __post_init__(self):
        if self.kind not in TAIL_CLASSES:
            raise ValueError(f"unknown tail class {self.kind!r}")

    @classmethod
    def c0(cls, tol=1e-2):
        return cls("c0", tol=tol)

    @classmethod
    def convergent(cls, limits: dict, tol=1e-2):
        return cls("convergent", limits=tuple(sorted((tuple(k), complex(v)) for k, v in limits.items())), tol=tol)

    @classmethod
    def constant(cls, value, d=1, tol=1e-12):
        return cls.convergent({(ax, s): value for ax in range(d) for s in (1, -1)}, tol=tol)

    @classmethod
    def periodic(cls, period, tol=1e-12):
        if np.isscalar(period):
            period = (int(period),)
        return cls("periodic", period=tuple(int(p) for p in period), tol=tol)

    def limit(self, axis: int, sign: int) -> complex:
        for key, value in self.limits:
            if key == (axis, sign):
                return value
        raise KeyError(f"no limit declared along axis {axis}, sign {sign:+d}")

    def to_json(self) -> dict:
        out = {"class": self.kind}
        if self.kind == "convergent":
            out["limits"] = [{"axis": a, "sign": s, "value": [v.real, v.imag]} for (a, s), v in self.limits]
        if self.kind == "periodic":
            out["period"] = list(self.period)
        out["tol"] = self.tol
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Tail":
        kind = data.get("class", "c0")
        tol = float(data.get("tol", 1e-2 if kind in ("c0", "convergent") else 1e-12))
        if kind == "convergent":
            limits = {}
            for item in data["limits"]:
                v = item["value"]
                limits[(int(item["axis"]), int(item["sign"]))] = complex(*v) if isinstance(v, list) else complex(v)
            return cls.convergent(limits, tol=tol)
        if kind == "periodic":
            return cls.periodic(data["period"], tol=tol)
        return cls(kind, tol=tol)


@dataclass
class Diagonal:
    offset: tuple
    values: np.ndarray
    tail: Tail = field(default_factory=Tail)


def _window_points(d: int, N: int) -> np.ndarray:
    axis = np.arange(-N, N + 1)
    return np.stack(np.meshgrid(*([axis] * d), indexing="ij"), axis=-1).reshape(-1, d)


class BandedZOperator:
    """Band operator on ``l^2`` of the window ``[-N, N]^d``.

    Parameters
    ----------
    d, N : int
        Dimension and window radius.
    diagonals : iterable of Diagonal
        ``values`` has shape ``(2N+1,)*d`` (or the flattened equivalent), indexed
        by ``j + N``.
    """

    def __init__(self, d: int, N: int, diagonals: Sequence[Diagonal] = ()):
        if d < 1 or N < 0:
            raise ValueError("need d >= 1 and N >= 0")
        self.d = int(d)
        self.N = int(N)
        shape = (2 * N + 1,) * d
        self.diagonals: dict = {}
        for diag in diagonals:
            off = tuple(int(o) for o in np.atleast_1d(diag.offset))
            if len(off) != d:
                raise ValueError(f"offset {off} does not have dimension {d}")
            vals = np.asarray(diag.values, dtype=complex).reshape(shape)
            if not np.all(np.isfinite(vals)):
                raise ValueError(f"diagonal {off} has non-finite values")
            if off in self.diagonals:
                raise ValueError(f"duplicate diagonal {off}")
            self._check_tail(off, vals, diag.tail)
            self.diagonals[off] = Diagonal(off, vals, diag.tail)

    def __repr__(self):
        return f"BandedZOperator(d={self.d}, N={self.N}, offsets={sorted(self.diagonals)})"

    @property
    def shape(self) -> tuple:
        return (2 * self.N + 1,) * self.d

    @property
    def band_width(self) -> int:
        return max((max(abs(o) for o in off) for off in self.diagonals), default=0)

    def _check_tail(self, off, vals, tail: Tail):
        N, d = self.N, self.d
        if tail.kind == "c0":
            edge = np.zeros(vals.shape, dtype=bool)
            for ax in range(d):
                idx = [slice(None)] * d
                idx[ax] = [0, 2 * N]
                edge[tuple(idx)] = True
            worst = np.abs(vals[edge]).max(initial=0.0)
            if worst > tail.tol:
                raise TailConsistencyError(
                    f"diagonal {off}: c0 tail but edge value {worst:.3e} exceeds tol {tail.tol:g}; enlarge N")
        elif tail.kind == "convergent":
            for ax in range(d):
                for sign in (1, -1):
                    try:
                        lim = tail.limit(ax, sign)
                    except KeyError:
                        raise TailConsistencyError(f"diagonal {off}: missing limit for axis {ax} sign {sign:+d}")
                    idx = [slice(None)] * d
                    idx[ax] = 2 * N if sign > 0 else 0
                    worst = np.abs(vals[tuple(idx)] - lim).max(initial=0.0)
                    if worst > tail.tol:
                        raise TailConsistencyError(
                            f"diagonal {off}: edge differs from declared limit by {worst:.3e}")
        elif tail.kind == "periodic":
            if len(tail.period) != d or min(tail.period) < 1:
                raise TailConsistencyError(f"diagonal {off}: need one positive period per axis")
            for ax, p in enumerate(tail.period):
                if p > 2 * N:
                    raise TailConsistencyError(f"diagonal {off}: period {p} does not fit the window")
                a = np.take(vals, np.arange(p, 2 * N + 1), axis=ax)
                b = np.take(vals, np.arange(0, 2 * N + 1 - p), axis=ax)
                if np.abs(a - b).max(initial=0.0) > tail.tol:
                    raise TailConsistencyError(f"diagonal {off}: values are not {p}-periodic along axis {ax}")

    def value_at(self, off, points: np.ndarray) -> np.ndarray:
        """Diagonal ``off`` at arbitrary lattice points, extended by its tail."""
        diag = self.diagonals[tuple(off)]
        pts = np.atleast_2d(np.asarray(points, dtype=np.int64))
        N = self.N
        out = np.zeros(len(pts), dtype=complex)
        inside = np.all(np.abs(pts) <= N, axis=1)
        if inside.any():
            out[inside] = diag.values[tuple((pts[inside] + N).T)]
        outside = ~inside
        if not outside.any():
            return out
        tail = diag.tail
        if tail.kind == "c0":
            pass
        elif tail.kind == "periodic":
            per = np.asarray(tail.period)
            # fold into [-N, -N + p) along each axis
            folded = (pts[outside] + N) % per - N
            out[outside] = diag.values[tuple((folded + N).T)]
        elif tail.kind == "convergent":
            over = np.abs(pts[outside]) - N
            axes = np.argmax(over, axis=1)
            signs = np.sign(pts[outside][np.arange(len(axes)), axes])
            out[outside] = [tail.limit(int(a), int(s)) for a, s in zip(axes, signs)]
        else:
            raise UnstructuredTailError(f"diagonal {tuple(off)} has no declared tail; cannot extend")
        return out

    def to_dense(self) -> np.ndarray:
        """Matrix on the window, row ``j`` and column ``j + k`` (both flattened)."""
        N, d = self.N, self.d
        pts = _window_points(d, N)
        M = len(pts)
        mat = np.zeros((M, M), dtype=complex)
        width = 2 * N + 1
        strides = width ** np.arange(d - 1, -1, -1)
        rows = np.arange(M)
        for off, diag in self.diagonals.items():
            cols_pts = pts + np.asarray(off)
            ok = np.all(np.abs(cols_pts) <= N, axis=1)
            cols = (cols_pts[ok] + N) @ strides
            mat[rows[ok], cols] = diag.values.reshape(-1)[ok]
        return mat

    def is_zero(self, atol: float = 0.0) -> bool:
        return all(np.abs(diag.values).max(initial=0.0) <= atol for diag in self.diagonals.values())

    def __eq__(self, other):
        return self.allclose(other, atol=0.0)

    def allclose(self, other: "BandedZOperator", atol: float = 1e-12) -> bool:
        if (self.d, self.N) != (other.d, other.N):
            return False
        for off in set(self.diagonals) | set(other.diagonals):
            a = self.diagonals[off].values if off in self.diagonals else 0.0
            b = other.diagonals[off].values if off in other.diagonals else 0.0
            if np.abs(np.asarray(a) - np.asarray(b)).max(initial=0.0) > atol:
                return False
        return True

    def to_json(self) -> dict:
        diags = []
        for off in sorted(self.diagonals):
            diag = self.diagonals[off]
            vals = diag.values.reshape(-1)
            diags.append({
                "offset": list(off),
                "values": [[float(v.real), float(v.imag)] for v in vals],
                "tail": diag.tail.to_json(),
            })
        return {"d": self.d, "N": self.N, "diagonals": diags}

    @classmethod
    def from_json(cls, data: dict) -> "BandedZOperator":
        d, N = int(data["d"]), int(data["N"])
        diags = []
        for item in data["diagonals"]:
            raw = item["values"]
            arr = np.asarray(raw, dtype=float)
            if arr.ndim == 2 and arr.shape[-1] == 2:
                vals = arr[:, 0] + 1j * arr[:, 1]
            elif arr.ndim == 1:
                vals = arr.astype(complex)
            else:
                raise ValueError("diagonal values must be numbers or [re, im] pairs")
            if vals.size != (2 * N + 1) ** d:
                raise ValueError(f"diagonal {item['offset']} needs {(2 * N + 1) ** d} values, got {vals.size}")
            diags.append(Diagonal(tuple(item["offset"]), vals, Tail.from_json(item.get("tail", {}))))
        return cls(d, N, diags)


def shift(B: BandedZOperator, m) -> BandedZOperator:
    """``alpha_(m,1)(B)``: every diagonal re-indexed as ``b'(j) = b(j - m)``.

    Points that leave the window are filled from the declared tail.
    """
    m = np.asarray(np.atleast_1d(m), dtype=np.int64)
    if m.shape != (B.d,):
        raise ValueError(f"shift must have dimension {B.d}")
    if np.abs(m).max(initial=0) > B.N:
        raise WindowExhaustedError(
            f"shift {tuple(m)} exceeds window radius {B.N}; enlarge N to at least {int(np.abs(m).max())}")
    pts = _window_points(B.d, B.N)
    out = []
    for off, diag in B.diagonals.items():
        vals = B.value_at(off, pts - m)
        out.append(Diagonal(off, vals, diag.tail))
    return BandedZOperator(B.d, B.N, out)


@dataclass(frozen=True)
class LimitOperatorSpec:
    """Escaping sequence ``m_n = residue + n * P * sign * e_axis``.

    ``P`` is the common period along ``axis`` of the periodic diagonals; the
    residue only matters for periodic tails.
    """

    axis: int = 0
    sign: int = 1
    residue: Optional[tuple] = None

    def label(self) -> str:
        base = f"{'+' if self.sign > 0 else '-'}e{self.axis}"
        return base if self.residue is None else f"{base} r={list(self.residue)}"


def _axis_period(B: BandedZOperator, axis: int) -> int:
    periods = [diag.tail.period[axis] for diag in B.diagonals.values() if diag.tail.kind == "periodic"]
    return math.lcm(*periods) if periods else 1


def limit_operator(B: BandedZOperator, spec: LimitOperatorSpec) -> BandedZOperator:
    """Limit of ``B[j + m_n, k + m_n]`` along the sequence described by ``spec``."""
    if not 0 <= spec.axis < B.d or spec.sign not in (1, -1):
        raise ValueError(f"invalid direction {spec}")
    residue = np.zeros(B.d, dtype=np.int64) if spec.residue is None else np.asarray(spec.residue)
    pts = _window_points(B.d, B.N)
    out = []
    for off, diag in B.diagonals.items():
        tail = diag.tail
        if tail.kind == "unstructured":
            raise UnstructuredTailError(f"limit undefined for diagonal {off}: unstructured tail")
        if tail.kind == "c0":
            vals = np.zeros(len(pts), dtype=complex)
        elif tail.kind == "convergent":
            vals = np.full(len(pts), tail.limit(spec.axis, spec.sign), dtype=complex)
        else:
            vals = _periodic_eval(B, off, pts + residue)
        out.append(Diagonal(off, vals, _limit_tail(tail, B.d)))
    return BandedZOperator(B.d, B.N, out)


def _periodic_eval(B, off, points):
    diag = B.diagonals[off]
    per = np.asarray(diag.tail.period)
    folded = (points + B.N) % per - B.N
    return diag.values[tuple((folded + B.N).T)]


def _limit_tail(tail: Tail, d: int) -> Tail:
    if tail.kind == "c0":
        return Tail.constant(0.0, d)
    if tail.kind == "convergent":
        return tail
    return Tail.periodic(tail.period)


def limit_operators(B: BandedZOperator, axis: int = 0, sign: int = 1) -> list:
    """One limit operator per residue class modulo the periods along ``axis``."""
    P = _axis_period(B, axis)
    specs = []
    for r in range(P):
        residue = [0] * B.d
        residue[axis] = r
        specs.append(LimitOperatorSpec(axis, sign, tuple(residue)))
    return [(spec, limit_operator(B, spec)) for spec in specs]


def tail_norms(B: BandedZOperator, ns: Sequence[int]) -> list:
    """``||Q_n B Q_n||`` where ``Q_n`` keeps window points outside ``[-n, n]^d``."""
    dense = B.to_dense()
    pts = _window_points(B.d, B.N)
    radius = np.abs(pts).max(axis=1)
    out = []
    for n in ns:
        keep = radius > n
        if not keep.any():
            out.append((int(n), 0.0))
            continue
        block = dense[np.ix_(keep, keep)]
        out.append((int(n), float(np.linalg.norm(block, 2))))
    return out


@dataclass
class CompactnessReport:
    verdict: str
    all_limits_zero: bool
    limit_labels: list
    tail: list
    n_star: Optional[int]
    monotone: bool

    @property
    def compact(self) -> bool:
        return self.verdict == "COMPACT"

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "all_limits_zero": self.all_limits_zero,
            "limits": self.limit_labels,
            "tail": [{"n": n, "sigma_max": s} for n, s in self.tail],
            "n_star": self.n_star,
            "monotone": self.monotone,
        }


def compactness_diagnostic(B: BandedZOperator, ns: Optional[Sequence[int]] = None,
                           threshold: float = 1e-6) -> CompactnessReport:
    """Compactness verdict from limit operators, with tail-norm evidence.

    The verdict is COMPACT exactly when every limit operator in every axis
    direction vanishes, which for the structured tail classes means every
    diagonal is ``c0``.  The evidence is the decay of ``||Q_n B Q_n||``.
    """
    labels = []
    zero = True
    for axis in range(B.d):
        for sign in (1, -1):
            for spec, L in limit_operators(B, axis, sign):
                is_zero = L.is_zero()
                zero &= is_zero
                labels.append({"direction": spec.label(), "zero": bool(is_zero)})
    if ns is None:
        step = max(1, B.N // 50)
        ns = list(range(0, B.N, step))
    tail = tail_norms(B, ns)
    sig = [s for _, s in tail]
    monotone = all(b <= a + 1e-15 for a, b in zip(sig, sig[1:]))
    n_star = next((n for n, s in tail if s < threshold), None)
    verdict = "COMPACT" if zero else "NOT COMPACT"
    return CompactnessReport(verdict, bool(zero), labels, tail, n_star, monotone)


def periodize(B: BandedZOperator) -> KernelOperator:
    """Embed the window into ``Z_{2N+1}^d``; entries are kept where ``j + k`` stays inside."""
    M = 2 * B.N + 1
    g = FiniteAbelianGroup([M] * B.d)
    pts = _window_points(B.d, B.N)
    dense = B.to_dense()
    idx = g.index_array(pts)
    kernel = np.zeros((g.size, g.size), dtype=complex)
    kernel[np.ix_(idx, idx)] = dense / g.w_group
    return KernelOperator(g, kernel)


@dataclass
class GalleryItem:
    kind: str
    operator: BandedZOperator
    expected: str
    truncation_error: float = 0.0
    description: str = ""


def _summable(psi: Callable[[int], complex], cutoff: int) -> bool:
    """Dyadic-shell test: shell sums of ``|psi|`` must shrink for a summable tail."""
    shells = []
    lo = 1
    while lo < cutoff:
        hi = min(2 * lo, cutoff)
        shells.append(sum(abs(psi(k)) + abs(psi(-k)) for k in range(lo + 1, hi + 1)))
        lo = hi
    last = shells[-3:]
    if len(last) < 3 or max(last) == 0:
        return True
    return last[-1] < last[0] * 0.75


def _psi_table(psi, width, cutoff):
    if callable(psi):
        if not _summable(psi, cutoff):
            raise ValueError("psi does not look summable; a convolution kernel must be in l^1")
        vals = {k: complex(psi(k)) for k in range(-width, width + 1)}
        err = sum(abs(psi(k)) + abs(psi(-k)) for k in range(width + 1, cutoff + 1))
        return vals, float(err)
    if isinstance(psi, dict):
        vals = {int(k): complex(v) for k, v in psi.items()}
    else:
        arr = np.asarray(psi, dtype=complex)
        half = len(arr) // 2
        if len(arr) != 2 * half + 1:
            raise ValueError("array psi must have odd length, centred at 0")
        vals = {k - half: complex(v) for k, v in enumerate(arr)}
    if not all(np.isfinite(v) for v in vals.values()):
        raise ValueError("psi has non-finite values")
    err = sum(abs(v) for k, v in vals.items() if abs(k) > width)
    vals = {k: v for k, v in vals.items() if abs(k) <= width}
    return vals, float(err)


def example_gallery(kind: str, N: int = 120, f: Optional[Callable] = None, psi=None,
                    width: Optional[int] = None, cutoff: int = 4096) -> GalleryItem:
    """Operators with a known compactness verdict, in banded form on ``[-N, N]``.

    kinds: ``diag_decay`` (``1/(1+|j|)``), ``identity``, ``laurent_shift``,
    ``periodic_sign`` (``(-1)^j``), ``mult_c0`` (``M_f``, default
    ``f_j = 2^{-|j|}``), ``conv_L1`` (``C_psi``), ``product`` (``M_f C_psi``).
    Convolutions are truncated to ``|k| <= width`` and the dropped l^1 mass is
    returned as ``truncation_error``.
    """
    j = np.arange(-N, N + 1)
    if kind == "diag_decay":
        op = BandedZOperator(1, N, [Diagonal((0,), 1.0 / (1.0 + np.abs(j)), Tail.c0())])
        return GalleryItem(kind, op, "COMPACT", description="diag(1/(1+|j|))")
    if kind == "identity":
        op = BandedZOperator(1, N, [Diagonal((0,), np.ones(j.size), Tail.constant(1.0))])
        return GalleryItem(kind, op, "NOT COMPACT", description="identity")
    if kind == "laurent_shift":
        op = BandedZOperator(1, N, [Diagonal((1,), np.ones(j.size), Tail.constant(1.0))])
        return GalleryItem(kind, op, "NOT COMPACT", description="constant diagonal 1 at offset 1")
    if kind == "periodic_sign":
        op = BandedZOperator(1, N, [Diagonal((0,), (-1.0) ** np.abs(j), Tail.periodic(2))])
        return GalleryItem(kind, op, "NOT COMPACT", description="diag((-1)^j)")

    fvals = None
    if kind in ("mult_c0", "product"):
        f = f or (lambda t: 2.0 ** (-abs(t)))
        fvals = np.array([complex(f(int(t))) for t in j])
    if kind == "mult_c0":
        op = BandedZOperator(1, N, [Diagonal((0,), fvals, Tail.c0())])
        return GalleryItem(kind, op, "COMPACT", description="M_f with f in c0")

    if kind in ("conv_L1", "product"):
        if psi is None:
            psi = {-1: 0.25, 0: 0.5, 1: 0.25}
        if width is None:
            width = max(abs(k) for k in psi) if isinstance(psi, dict) else (
                len(psi) // 2 if not callable(psi) else 8)
        table, err = _psi_table(psi, width, cutoff)
        diags = []
        for k in range(-width, width + 1):
            # (C_psi f)(j) = sum_i psi(j - i) f(i), so B[j, j + k] = psi(-k)
            c = table.get(-k, 0.0)
            if c == 0:
                continue
            if kind == "conv_L1":
                diags.append(Diagonal((k,), np.full(j.size, c), Tail.constant(c)))
            else:
                diags.append(Diagonal((k,), fvals * c, Tail.c0()))
        op = BandedZOperator(1, N, diags)
        expected = "NOT COMPACT" if kind == "conv_L1" else "COMPACT"
        desc = "C_psi" if kind == "conv_L1" else "M_f C_psi with f in c0"
        return GalleryItem(kind, op, expected, truncation_error=err, description=desc)
    raise ValueError(f"unknown gallery kind {kind!r}")
