"""Quantum harmonic analysis on finite abelian groups and windowed ``Z^d``.

Modules
-------
group       finite abelian groups, characters and Fourier transforms
heisenberg  phase space, Heisenberg cocycles, the representations U and V
coorbit     wavelet transform, twisted convolution, coorbit norms
opalg       kernel operators, band supports, QHA convolution, oscillation
limitops    banded operators on windowed Z^d and limit-operator diagnostics
propa       Følner boxes and almost-invariant partitions of unity
"""
from .group import FiniteAbelianGroup, make_group, fourier, fourier_dual, inverse_fourier, character_eval
from .heisenberg import (
    Cocycle,
    PhasePoint,
    phase_index,
    phase_point,
    rep_U,
    rep_U_matrix,
    rep_V,
    rep_V_matrix,
    sigma_iso_check,
    parity,
)
from .coorbit import (
    Window,
    delta_window,
    wavelet,
    wavelet_adjoint,
    godement_check,
    twisted_convolution,
    coorbit_project,
    projection_matrix,
    reproducing_kernel,
    coorbit_norm,
    window_equivalence_constant,
    parity_isometry_check,
)
from .opalg import (
    KernelOperator,
    BandSet,
    PhaseMeasure,
    band_support,
    is_band_operator,
    band_truncate,
    alpha,
    qha_convolve,
    smooth_fourier,
    oscillation,
    fourier_conjugate,
    c1_membership_profile,
)
from .limitops import (
    BandedZOperator,
    Diagonal,
    Tail,
    shift,
    limit_operator,
    limit_operators,
    compactness_diagnostic,
    example_gallery,
)
from .propa import FolnerSet, folner_for, build_partition, verify_partition
from .selftest import run_selftest

__all__ = [
    "FiniteAbelianGroup",
    "make_group",
    "fourier",
    "fourier_dual",
    "inverse_fourier",
    "character_eval",
    "Cocycle",
    "PhasePoint",
    "phase_index",
    "phase_point",
    "rep_U",
    "rep_U_matrix",
    "rep_V",
    "rep_V_matrix",
    "sigma_iso_check",
    "parity",
    "Window",
    "delta_window",
    "wavelet",
    "wavelet_adjoint",
    "godement_check",
    "twisted_convolution",
    "coorbit_project",
    "projection_matrix",
    "reproducing_kernel",
    "coorbit_norm",
    "window_equivalence_constant",
    "parity_isometry_check",
    "KernelOperator",
    "BandSet",
    "PhaseMeasure",
    "band_support",
    "is_band_operator",
    "band_truncate",
    "alpha",
    "qha_convolve",
    "smooth_fourier",
    "oscillation",
    "fourier_conjugate",
    "c1_membership_profile",
    "BandedZOperator",
    "Diagonal",
    "Tail",
    "shift",
    "limit_operator",
    "limit_operators",
    "compactness_diagnostic",
    "example_gallery",
    "FolnerSet",
    "folner_for",
    "build_partition",
    "verify_partition",
    "run_selftest",
]

__version__ = "0.1.0"
