"""Operators on ``L^2(G)`` through their integral kernels.

Kernel orientation
------------------
``KernelOperator.kernel[x, y]`` has the *output* variable as row index::

    (A f)(x) = sum_y kernel[x, y] f(y) w

where ``w`` is the Haar weight of the underlying side (``w_G = 1`` for
operators on ``G``, ``w_dual = 1/|G|`` for operators on the dual).  With this
orientation the kernel multiplier of ``(delta_0 x g) * A`` is
``g^(x^{-1} y)`` and the band set of ``A`` is ``{x^{-1} y : k(x, y) != 0}``,
the usual "diagonal offset" of a matrix.  The paper-style pairing kernel
``<A phi, psi> = <k, conj(phi) (x) psi>`` is the transpose, see
:func:`pairing_kernel`.  In this orientation the literal support condition
``supp(A delta_h) subset h K`` holds for ``K^{-1}`` (see
:func:`satisfies_band_definition`).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .group import FiniteAbelianGroup, fourier_dual
from .heisenberg import Cocycle, phase_index

__all__ = [
    "ConsistencyError",
    "KernelOperator",
    "BandSet",
    "PhaseMeasure",
    "OscillationReport",
    "C1Profile",
    "multiplication_operator",
    "convolution_operator",
    "shift_operator",
    "pairing_kernel",
    "alpha",
    "band_support",
    "is_band_operator",
    "satisfies_band_definition",
    "band_truncate",
    "qha_convolve",
    "smooth_fourier",
    "kernel_multiplier",
    "oscillation",
    "default_probes",
    "band_oscillation_bound",
    "fourier_conjugate",
    "fejer_bump",
    "c1_membership_profile",
]


class ConsistencyError(ArithmeticError):
    """Two independent computations of the same quantity disagree."""


@dataclass(eq=False)
class KernelOperator:
    """Operator on functions over ``G`` (or over the dual when ``dual=True``)."""

    group: FiniteAbelianGroup
    kernel: np.ndarray
    dual: bool = False

    def __post_init__(self):
        n = self.group.size
        self.kernel = np.asarray(self.kernel, dtype=complex)
        if self.kernel.shape != (n, n):
            raise ValueError(f"kernel must be {n} x {n}, got {self.kernel.shape}")
        if not np.all(np.isfinite(self.kernel)):
            raise ValueError("kernel has non-finite entries")

    @property
    def weight(self) -> float:
        return self.group.w_dual if self.dual else self.group.w_group

    @property
    def matrix(self) -> np.ndarray:
        """Matrix acting on coefficient vectors."""
        return self.kernel * self.weight

    @classmethod
    def from_matrix(cls, group, matrix, dual=False) -> "KernelOperator":
        w = group.w_dual if dual else group.w_group
        return cls(group, np.asarray(matrix, dtype=complex) / w, dual)

    def apply(self, f) -> np.ndarray:
        return self.matrix @ np.asarray(f, dtype=complex)

    def adjoint(self) -> "KernelOperator":
        return KernelOperator(self.group, self.kernel.conj().T, self.dual)

    def __matmul__(self, other: "KernelOperator") -> "KernelOperator":
        if other.group != self.group or other.dual != self.dual:
            raise ValueError("operators act on different spaces")
        return KernelOperator(self.group, self.kernel @ other.kernel * self.weight, self.dual)

    def __add__(self, other):
        return KernelOperator(self.group, self.kernel + other.kernel, self.dual)

    def __sub__(self, other):
        return KernelOperator(self.group, self.kernel - other.kernel, self.dual)

    def __mul__(self, scalar):
        return KernelOperator(self.group, self.kernel * scalar, self.dual)

    __rmul__ = __mul__

    def norm(self) -> float:
        """Operator norm on ``L^2`` (uniform weights make it the spectral norm)."""
        return float(np.linalg.norm(self.matrix, 2))

    def schur_bound(self, p: float) -> float:
        """Riesz-Thorin/Schur upper bound for the ``L^p`` operator norm."""
        a = np.abs(self.matrix)
        col = a.sum(axis=0).max()  # L^1 -> L^1
        row = a.sum(axis=1).max()  # L^inf -> L^inf
        if np.isinf(p):
            return float(row)
        return float(col ** (1.0 / p) * row ** (1.0 - 1.0 / p))

    def to_json(self) -> dict:
        return {
            "group": self.group.to_json(),
            "kernel": [[[float(z.real), float(z.imag)] for z in row] for row in self.kernel],
        }

    @classmethod
    def from_json(cls, data: dict) -> "KernelOperator":
        g = FiniteAbelianGroup.from_json(data["group"])
        k = np.asarray(data["kernel"], dtype=float)
        if k.ndim != 3 or k.shape[-1] != 2:
            raise ValueError("kernel must be a nested array of [re, im] pairs")
        return cls(g, k[..., 0] + 1j * k[..., 1])


def multiplication_operator(g: FiniteAbelianGroup, f, dual: bool = False) -> KernelOperator:
    f = np.asarray(f, dtype=complex)
    w = g.w_dual if dual else g.w_group
    return KernelOperator(g, np.diag(f) / w, dual)


def convolution_operator(g: FiniteAbelianGroup, psi, dual: bool = False) -> KernelOperator:
    """``(C_psi f)(x) = sum_y psi(y^{-1} x) f(y) w``."""
    psi = np.asarray(psi, dtype=complex)
    return KernelOperator(g, psi[g.sub_table.T], dual)


def shift_operator(g: FiniteAbelianGroup, k) -> KernelOperator:
    """Kernel ``[y = x k]``, i.e. ``(S f)(x) = f(x k)``."""
    kk = g.index(k)
    n = g.size
    kernel = np.zeros((n, n), dtype=complex)
    kernel[np.arange(n), g.add_table[:, kk]] = 1.0 / g.w_group
    return KernelOperator(g, kernel)


def pairing_kernel(A: KernelOperator) -> np.ndarray:
    """Kernel ``k`` with ``<A phi, psi> = sum k(x, y) phi(x) conj(psi(y)) w^2``."""
    return A.kernel.T


@dataclass(frozen=True)
class BandSet:
    """A subset ``K`` of the group, stored as element indices."""

    group: FiniteAbelianGroup
    indices: frozenset

    @classmethod
    def from_elements(cls, g: FiniteAbelianGroup, elements: Iterable) -> "BandSet":
        return cls(g, frozenset(g.index(e) for e in elements))

    @classmethod
    def whole(cls, g) -> "BandSet":
        return cls(g, frozenset(range(g.size)))

    @property
    def contains_identity(self) -> bool:
        return 0 in self.indices

    @property
    def symmetric(self) -> bool:
        return self.inverse().indices == self.indices

    def inverse(self) -> "BandSet":
        return BandSet(self.group, frozenset(int(self.group.neg[i]) for i in self.indices))

    def product(self, other: "BandSet") -> "BandSet":
        t = self.group.add_table
        return BandSet(self.group, frozenset(int(t[i, j]) for i in self.indices for j in other.indices))

    def __le__(self, other: "BandSet") -> bool:
        return self.indices <= other.indices

    def __len__(self):
        return len(self.indices)

    def elements(self) -> list:
        return [self.group.element_at(i) for i in sorted(self.indices)]

    def mask(self) -> np.ndarray:
        m = np.zeros(self.group.size, dtype=bool)
        m[list(self.indices)] = True
        return m


def _threshold(A: KernelOperator, tol: float, relative: bool) -> float:
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    scale = np.abs(A.kernel).max(initial=0.0) if relative else 1.0
    return tol * scale


def band_support(A: KernelOperator, tol: float = 1e-12, relative: bool = True) -> BandSet:
    """Minimal ``K`` with ``|k(x, y)| <= tol`` whenever ``x^{-1} y`` is outside ``K``."""
    thr = _threshold(A, tol, relative)
    hit = np.abs(A.kernel) > thr
    return BandSet(A.group, frozenset(int(i) for i in np.unique(A.group.sub_table[hit])))


def satisfies_band_definition(A: KernelOperator, K: BandSet, tol: float = 0.0,
                              relative: bool = True) -> bool:
    """Literal support condition: ``supp(A f) subset H K`` whenever ``supp f subset H``.

    Checked on singletons ``H = {h}``; general ``H`` follows by linearity.
    """
    g = A.group
    thr = _threshold(A, tol, relative)
    allowed = K.mask()
    for h in range(g.size):
        out = np.abs(A.matrix[:, h]) > thr * A.weight
        support = np.flatnonzero(out)
        # x in hK  <=>  h^{-1} x in K
        if not allowed[g.sub_table[h, support]].all():
            return False
    return True


def is_band_operator(A: KernelOperator, K: BandSet, tol: float = 0.0, relative: bool = True) -> bool:
    """``A`` in ``BO_K`` via the kernel-support criterion, cross-checked against the definition."""
    by_kernel = band_support(A, tol, relative) <= K
    by_definition = satisfies_band_definition(A, K.inverse(), tol, relative)
    if by_kernel != by_definition:
        raise ConsistencyError("kernel-support and definitional band criteria disagree")
    return by_kernel


def band_truncate(A: KernelOperator, K: BandSet) -> tuple[KernelOperator, float]:
    """Mask the kernel to ``x^{-1} y in K`` and report the operator-norm distance."""
    keep = K.mask()[A.group.sub_table]
    B = KernelOperator(A.group, np.where(keep, A.kernel, 0.0), A.dual)
    return B, (A - B).norm()


def alpha(c: Cocycle, xi, A: KernelOperator) -> KernelOperator:
    """``alpha_xi(A) = U_xi A U_xi^{-1}``.

    For ``xi = (x0, nu)`` the kernel becomes ``nu(x) conj(nu(y)) k(x0^{-1} x, x0^{-1} y)``;
    the phase ``a(xi)`` cancels.
    """
    g = c.group
    if A.dual:
        raise ValueError("alpha acts on operators over G")
    ix, inu = divmod(phase_index(g, xi), g.size)
    src = g.sub_table[ix]  # x0^{-1} x
    # nu(x) conj(nu(y)) evaluated as nu(y^{-1} x), exact on the diagonal
    phase = g.characters[inu][g.sub_table.T]
    kernel = phase * A.kernel[np.ix_(src, src)]
    return KernelOperator(g, kernel)


@dataclass
class PhaseMeasure:
    """Finite complex measure on ``Xi``: point masses plus an optional density.

    The density is taken with respect to the Haar measure ``w_Xi``.
    """

    group: FiniteAbelianGroup
    atoms: list = field(default_factory=list)
    density: Optional[np.ndarray] = None

    def __post_init__(self):
        g = self.group
        self.atoms = [(phase_index(g, p), complex(w)) for p, w in self.atoms]
        if self.density is not None:
            self.density = np.asarray(self.density, dtype=complex)
            if self.density.shape != (g.size**2,):
                raise ValueError("density must be indexed by phase space")

    @classmethod
    def atom(cls, g, xi, weight=1.0) -> "PhaseMeasure":
        return cls(g, atoms=[(xi, weight)])

    @classmethod
    def tensor(cls, g, f_group, h_dual) -> "PhaseMeasure":
        """Density ``f(x) h(nu)``; ``delta_0`` on ``G`` is the indicator of ``e``."""
        f = np.asarray(f_group, dtype=complex)
        h = np.asarray(h_dual, dtype=complex)
        return cls(g, density=np.outer(f, h).ravel())

    @classmethod
    def delta_tensor(cls, g, h_dual) -> "PhaseMeasure":
        """``delta_0 (x) h``."""
        e = np.zeros(g.size)
        e[0] = 1.0 / g.w_group
        return cls.tensor(g, e, h_dual)

    def total_variation(self) -> float:
        tv = sum(abs(w) for _, w in self.atoms)
        if self.density is not None:
            tv += float(np.abs(self.density).sum() * self.group.w_phase)
        return tv

    def weights(self) -> np.ndarray:
        """Mass of each phase point (atoms plus ``density * w_Xi``)."""
        g = self.group
        out = np.zeros(g.size**2, dtype=complex)
        if self.density is not None:
            out += self.density * g.w_phase
        for p, w in self.atoms:
            out[p] += w
        return out


def qha_convolve(c: Cocycle, mu: PhaseMeasure, A: KernelOperator) -> KernelOperator:
    """``mu * A = sum_z alpha_z(A) mu({z})`` (plain sum over the support of ``mu``)."""
    total = np.zeros_like(A.kernel)
    weights = mu.weights()
    for p in np.flatnonzero(weights):
        total += weights[p] * alpha(c, int(p), A).kernel
    return KernelOperator(A.group, total)


def kernel_multiplier(g: FiniteAbelianGroup, h_dual) -> np.ndarray:
    """``h_g(x, y) = g^(x^{-1} y)`` with ``g^`` the transform of a function on the dual.

    Values of ``g^`` below the rounding bound of the transform sum
    (``4 |G| eps sum |h| w_dual``) are set to exactly zero, so that a
    multiplier with ``supp g^ subset K`` gives kernels vanishing outside ``K``.
    """
    h = np.asarray(h_dual, dtype=complex)
    ghat = fourier_dual(g, h)
    noise = 4 * g.size * np.finfo(float).eps * np.abs(h).sum() * g.w_dual
    ghat[np.abs(ghat) <= noise] = 0.0
    return ghat[g.sub_table]


def smooth_fourier(c: Cocycle, h_dual, A: KernelOperator, atol: float = 1e-10) -> KernelOperator:
    """``(delta_0 (x) g) * A`` computed as a Hadamard product, checked against the direct sum."""
    g = c.group
    direct = qha_convolve(c, PhaseMeasure.delta_tensor(g, h_dual), A)
    hadamard = KernelOperator(g, kernel_multiplier(g, h_dual) * A.kernel)
    err = np.abs(direct.kernel - hadamard.kernel).max(initial=0.0)
    scale = max(1.0, np.abs(A.kernel).max(initial=0.0) * np.abs(h_dual).sum() * g.w_dual)
    if err > atol * scale:
        raise ConsistencyError(f"kernel multiplier identity violated by {err:.3e}")
    return hadamard


@dataclass
class OscillationReport:
    osc_group: float
    osc_dual: float
    probes_group: list
    probes_dual: list
    values_group: list
    values_dual: list

    def to_json(self) -> dict:
        return {
            "osc_group": self.osc_group,
            "osc_dual": self.osc_dual,
            "probes_group": [list(p) for p in self.probes_group],
            "probes_dual": [list(p) for p in self.probes_dual],
            "values_group": self.values_group,
            "values_dual": self.values_dual,
        }


def default_probes(g: FiniteAbelianGroup, powers: Sequence[int] = (1, 2)) -> list:
    """Generators of each cyclic factor and their small powers and inverses."""
    probes = []
    for j, n in enumerate(g.orders):
        for k in powers:
            for s in (k, -k):
                e = [0] * g.rank
                e[j] = s % n
                e = tuple(e)
                if e != g.identity and e not in probes:
                    probes.append(e)
    return probes


def oscillation(c: Cocycle, A: KernelOperator, probes_group=None, probes_dual=None) -> OscillationReport:
    """``max ||alpha_(x,1)(A) - A||`` and ``max ||alpha_(e,nu)(A) - A||`` over probe sets."""
    g = c.group
    pg = list(default_probes(g) if probes_group is None else probes_group)
    pd = list(default_probes(g) if probes_dual is None else probes_dual)
    vg = [(alpha(c, (x, g.identity), A) - A).norm() for x in pg]
    vd = [(alpha(c, (g.identity, nu), A) - A).norm() for nu in pd]
    return OscillationReport(max(vg, default=0.0), max(vd, default=0.0), pg, pd, vg, vd)


def band_oscillation_bound(A: KernelOperator, nu, tol: float = 1e-12) -> float:
    """Schur-type bound ``sum_{k in K} |nu(k) - 1| max_x |A_{x, xk}|`` for ``||alpha_(e,nu)A - A||``.

    Each diagonal ``{(x, xk)}`` of the matrix is a weighted permutation whose
    norm is its largest entry.
    """
    g = A.group
    inu = g.index(nu)
    K = band_support(A, tol)
    mat = np.abs(A.matrix)
    total = 0.0
    for k in K.indices:
        diag = mat[np.arange(g.size), g.add_table[:, k]]
        total += abs(g.characters[inu, k] - 1.0) * diag.max()
    return total


def fourier_conjugate(A: KernelOperator) -> KernelOperator:
    """``F A F^{-1}`` as a kernel on the other side.

    For ``A`` on ``G``: ``k~(nu, mu) = sum_{x,y} k(x, y) conj(nu(x)) mu(y) w_G^2``.
    For ``A`` on the dual the dual transform is used, and conjugating twice
    returns ``R A R`` (``R`` the parity operator), the canonical identification
    of ``G`` with its double dual.
    """
    g = A.group
    X = g.characters
    w = A.weight
    kernel = X.conj() @ A.kernel @ X.T * w * w
    return KernelOperator(g, kernel, dual=not A.dual)


def fejer_bump(g: FiniteAbelianGroup, radius: int, dual: bool = False) -> np.ndarray:
    """Nonnegative triangular bump ``prod_j (r - |x_j|)_+`` with unit mass.

    ``|x_j|`` is the circular distance to 0 in ``Z_{n_j}``; ``radius = 1`` gives
    the point mass at the identity.
    """
    if radius < 1:
        raise ValueError("radius must be at least 1")
    e = g.elements
    n = np.asarray(g.orders)
    dist = np.minimum(e, n - e)
    vals = np.prod(np.clip(radius - dist, 0, None), axis=1).astype(float)
    w = g.w_dual if dual else g.w_group
    return vals / (vals.sum() * w)


@dataclass
class C1Profile:
    radii: list
    smoothing_errors: list
    oscillation_bounds: list
    smoothed_osc_group: list
    smoothed_osc_dual: list
    translation_bounds_group: list
    translation_bounds_dual: list
    band_group: list
    band_dual: list
    two_sided_ok: bool

    def rows(self) -> list:
        keys = ["radius", "smoothing_error", "oscillation_bound", "smoothed_osc_group",
                "smoothed_osc_dual", "translation_bound_group", "translation_bound_dual"]
        cols = [self.radii, self.smoothing_errors, self.oscillation_bounds, self.smoothed_osc_group,
                self.smoothed_osc_dual, self.translation_bounds_group, self.translation_bounds_dual]
        return [dict(zip(keys, vals)) for vals in zip(*cols)]

    def to_json(self) -> dict:
        return {
            "rows": self.rows(),
            "band_group": [list(e) for e in self.band_group],
            "band_dual": [list(e) for e in self.band_dual],
            "two_sided_ok": self.two_sided_ok,
        }


def _translation_modulus(g, f, probes, w):
    """``max_h ||f(h^{-1} .) - f||_1`` over probes."""
    vals = [float(np.abs(f[g.sub_table[g.index(h)]] - f).sum() * w) for h in probes]
    return max(vals, default=0.0)


def c1_membership_profile(c: Cocycle, A: KernelOperator, radii: Optional[Sequence[int]] = None,
                          tol: float = 1e-12, slack: float = 1e-10) -> C1Profile:
    """Smoothing profile of ``A`` along shrinking bumps ``f_r (x) g_r``.

    Two inequalities are checked at every radius:

    * ``||mu_r * A - A|| <= int ||alpha_z(A) - A|| d|mu_r|(z)`` (smoothing error
      is controlled by the oscillation of ``A``);
    * ``||alpha_(h,1)(mu_r * A) - mu_r * A|| <= ||f_r(h^{-1}.) - f_r||_1 ||A||``
      and likewise on the dual side (the smoothed operator oscillates no more
      than the bump).
    """
    g = c.group
    if radii is None:
        radii = list(range(max(n // 2 + 1 for n in g.orders), 0, -1))
    probes = default_probes(g)
    normA = A.norm()
    osc_all = np.array([(alpha(c, p, A) - A).norm() for p in range(c.size)])
    out = dict(err=[], bound=[], og=[], od=[], tg=[], td=[])
    ok = True
    for r in radii:
        f = fejer_bump(g, r)
        h = fejer_bump(g, r, dual=True)
        mu = PhaseMeasure.tensor(g, f, h)
        B = qha_convolve(c, mu, A)
        err = (B - A).norm()
        bound = float(np.abs(mu.weights()) @ osc_all)
        rep = oscillation(c, B, probes, probes)
        tg = _translation_modulus(g, f, probes, g.w_group) * normA
        td = _translation_modulus(g, h, probes, g.w_dual) * normA
        scale = slack * max(1.0, normA)
        ok &= err <= bound + scale and rep.osc_group <= tg + scale and rep.osc_dual <= td + scale
        for key, val in zip(out, (err, bound, rep.osc_group, rep.osc_dual, tg, td)):
            out[key].append(float(val))
    return C1Profile(
        radii=list(radii),
        smoothing_errors=out["err"],
        oscillation_bounds=out["bound"],
        smoothed_osc_group=out["og"],
        smoothed_osc_dual=out["od"],
        translation_bounds_group=out["tg"],
        translation_bounds_dual=out["td"],
        band_group=band_support(A, tol).elements(),
        band_dual=band_support(fourier_conjugate(A), tol).elements(),
        two_sided_ok=bool(ok),
    )
