"""Wavelet transform, twisted convolution and coorbit norms on finite phase space.

On a finite group every nonzero window is integrable, so all coorbit spaces
coincide as sets; what differs between them is the norm, and that is what the
functions here compute.  Inner products are antilinear in the second slot and
use the Haar weights of :mod:`qhafinite.group`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from .group import FiniteAbelianGroup
from .heisenberg import Cocycle, phase_index, phase_inv, rep_U

__all__ = [
    "Window",
    "delta_window",
    "CoorbitNormReport",
    "inner_group",
    "inner_phase",
    "lp_norm_phase",
    "wavelet",
    "wavelet_matrix",
    "wavelet_adjoint",
    "godement_check",
    "twisted_convolution",
    "coorbit_project",
    "projection_matrix",
    "reproducing_kernel",
    "coorbit_norm",
    "window_equivalence_constant",
    "parity_isometry_check",
]


def inner_group(g: FiniteAbelianGroup, f, h) -> complex:
    return complex(np.vdot(h, f) * g.w_group)


def inner_phase(g: FiniteAbelianGroup, F, H) -> complex:
    return complex(np.vdot(H, F) * g.w_phase)


def lp_norm_phase(g: FiniteAbelianGroup, F, p) -> float:
    """Weighted ``L^p(Xi)`` norm; ``p = inf`` is the plain sup norm."""
    p = _check_p(p)
    a = np.abs(np.asarray(F))
    if np.isinf(p):
        return float(a.max(initial=0.0))
    return float((np.sum(a**p) * g.w_phase) ** (1.0 / p))


def _check_p(p) -> float:
    p = float(p)
    if not (p >= 1.0):
        raise ValueError(f"exponent p must lie in [1, inf], got {p}")
    return p


@dataclass(eq=False)
class Window:
    """A nonzero window ``phi0`` together with the cocycle defining ``U``."""

    cocycle: Cocycle
    phi: np.ndarray
    name: str = "phi0"
    parity_atol: float = field(default=1e-12, repr=False)

    def __post_init__(self):
        g = self.cocycle.group
        self.phi = np.asarray(self.phi, dtype=complex)
        if self.phi.shape != (g.size,):
            raise ValueError(f"window must have length {g.size}")
        if not np.all(np.isfinite(self.phi)):
            raise ValueError("window has non-finite entries")
        if np.linalg.norm(self.phi) == 0:
            raise ValueError("window must be nonzero")
        self.phi.setflags(write=False)

    @property
    def group(self) -> FiniteAbelianGroup:
        return self.cocycle.group

    @cached_property
    def norm_sq(self) -> float:
        return float(np.vdot(self.phi, self.phi).real * self.group.w_group)

    @cached_property
    def parity_sign(self) -> Optional[int]:
        """``+1`` or ``-1`` when ``R phi0 = +-phi0``, otherwise ``None``."""
        reflected = self.phi[self.group.neg]
        scale = self.parity_atol * max(1.0, np.abs(self.phi).max())
        if np.max(np.abs(reflected - self.phi)) <= scale:
            return 1
        if np.max(np.abs(reflected + self.phi)) <= scale:
            return -1
        return None

    @cached_property
    def matrix(self) -> np.ndarray:
        """``matrix[p, t] = conj((U_p phi0)(t)) w_G`` so that ``W f = matrix @ f``."""
        c = self.cocycle
        g = self.group
        n = g.size
        shifted = self.phi[g.sub_table]  # [x, t] -> phi0(x^{-1} t)
        rows = shifted[:, None, :] * g.characters[None, :, :]  # [x, nu, t]
        rows = rows.reshape(n * n, n) * c.a[:, None]
        return rows.conj() * g.w_group

    @cached_property
    def self_transform(self) -> np.ndarray:
        """``W_{phi0}(phi0)``."""
        return self.matrix @ self.phi


def delta_window(c: Cocycle) -> Window:
    phi = np.zeros(c.group.size, dtype=complex)
    phi[0] = 1.0
    return Window(c, phi, name="delta_e")


@dataclass
class CoorbitNormReport:
    p: float
    value: float
    window: str

    def to_json(self) -> dict:
        p = "inf" if np.isinf(self.p) else self.p
        return {"p": p, "value": self.value, "window": self.window}


def _signal(w: Window, f) -> np.ndarray:
    f = np.asarray(f, dtype=complex)
    if f.shape != (w.group.size,):
        raise ValueError(f"signal must have length {w.group.size}")
    return f


def _phase_fn(c: Cocycle, F) -> np.ndarray:
    F = np.asarray(F, dtype=complex)
    if F.shape != (c.size,):
        raise ValueError(f"phase function must have length {c.size}")
    return F


def wavelet_matrix(w: Window) -> np.ndarray:
    return w.matrix


def wavelet(w: Window, f) -> np.ndarray:
    """``W_{phi0}(f)(xi) = <f, U_xi phi0>``."""
    return w.matrix @ _signal(w, f)


def wavelet_adjoint(w: Window, F) -> np.ndarray:
    """``sum_xi F(xi) U_xi phi0 w_Xi``, the Hilbert-space adjoint of :func:`wavelet`."""
    g = w.group
    F = _phase_fn(w.cocycle, F)
    return w.matrix.conj().T @ F * (g.w_phase / g.w_group)


def godement_check(f, h, w0: Window, w1: Window) -> float:
    """``|<W_0 f, W_1 h>_{L^2(Xi)} - <f, h><phi1, phi0>|``."""
    g = w0.group
    lhs = inner_phase(g, wavelet(w0, f), wavelet(w1, h))
    rhs = inner_group(g, _signal(w0, f), _signal(w0, h)) * inner_group(g, w1.phi, w0.phi)
    return abs(lhs - rhs)


def twisted_convolution(c: Cocycle, F, H) -> np.ndarray:
    """``(F *' H)(x) = sum_y F(y) H(y^{-1} x) m(y, y^{-1} x) w_Xi``."""
    F = _phase_fn(c, F)
    H = _phase_fn(c, H)
    return (F @ (H[c.sub] * c.twist)) * c.group.w_phase


def coorbit_project(w: Window, F) -> np.ndarray:
    """Orthogonal projection of ``L^2(Xi)`` onto the range of the wavelet transform."""
    return twisted_convolution(w.cocycle, F, w.self_transform) / w.norm_sq


def projection_matrix(w: Window) -> np.ndarray:
    """``W W^* / ||phi0||^2`` as a ``|Xi| x |Xi|`` matrix."""
    g = w.group
    W = w.matrix
    return W @ W.conj().T * (g.w_phase / g.w_group) / w.norm_sq


def reproducing_kernel(w: Window, xi, form: str = "cocycle") -> np.ndarray:
    """Reproducing kernel ``K_xi`` of the range of ``W_{phi0}``.

    ``form="cocycle"`` uses the relabeled self-transform with the phase
    ``m(x, x^{-1}) / m(x^{-1}, y)``; ``form="wavelet"`` uses
    ``W_{phi0}(U_xi phi0)``.  Both agree.
    """
    c = w.cocycle
    p = phase_index(c.group, xi)
    if form == "wavelet":
        return wavelet(w, rep_U(c, p, w.phi)) / w.norm_sq
    if form != "cocycle":
        raise ValueError(f"unknown kernel form {form!r}")
    pinv = phase_inv(c.group, p)
    y = np.arange(c.size)
    return w.self_transform[c.sub[p, y]] * c.table[p, pinv] / c.table[pinv, y] / w.norm_sq


def coorbit_norm(w: Window, f, p) -> CoorbitNormReport:
    p = _check_p(p)
    value = lp_norm_phase(w.group, wavelet(w, f), p)
    return CoorbitNormReport(p=p, value=value, window=w.name)


def window_equivalence_constant(w0: Window, w1: Window, atol: float = 1e-12) -> tuple[float, int]:
    """Constant ``C`` with ``||W_1 f||_1 <= C ||W_0 f||_1`` for every ``f``.

    Returns ``C = min_xi ||W_1(phi1)||_1 / |<U_xi phi1, phi0>|`` over phase
    points with a nonvanishing overlap, together with the minimizing index.
    """
    g = w0.group
    # <U_xi phi1, phi0> = conj(<phi0, U_xi phi1>) = conj(W_{phi1}(phi0)(xi))
    overlaps = np.abs(w1.matrix @ w0.phi)
    ok = overlaps > atol * max(1.0, overlaps.max())
    if not ok.any():
        raise ValueError("windows have no nonvanishing overlap")
    l1 = lp_norm_phase(g, w1.self_transform, 1)
    ratios = np.full(overlaps.shape, np.inf)
    ratios[ok] = l1 / overlaps[ok]
    best = int(np.argmin(ratios))
    return float(ratios[best]), best


def parity_isometry_check(w: Window, f, p) -> float:
    """``| ||Rf||_{p,phi0} - ||f||_{p,phi0} |`` for a parity-symmetric window.

    Also confirms the relabeling identity ``W(Rf)(xi) = +-W(f)(xi^{-1})``.
    """
    sign = w.parity_sign
    if sign is None:
        raise ValueError("window is not parity symmetric (R phi0 != +-phi0)")
    g = w.group
    f = _signal(w, f)
    wf = wavelet(w, f)
    wrf = wavelet(w, f[g.neg])
    relabel = np.max(np.abs(wrf - sign * wf[w.cocycle.neg]), initial=0.0)
    scale = max(1.0, np.abs(wf).max(initial=0.0))
    if relabel > 1e-10 * scale:
        raise ArithmeticError(f"parity relabeling identity violated by {relabel:.3e}")
    return abs(lp_norm_phase(g, wrf, p) - lp_norm_phase(g, wf, p))
