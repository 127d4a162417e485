"""Band operators on Z_16 and the smoothing (delta_0 x g) * A.

Run with ``python demos/03_band_operators.py``.
"""
import numpy as np

from qhafinite.group import FiniteAbelianGroup
from qhafinite.heisenberg import Cocycle
from qhafinite import opalg as oa
from qhafinite.selftest import _dual_from_transform

G = FiniteAbelianGroup([16])
c = Cocycle(G)
rng = np.random.default_rng(2)
j = np.arange(16)
dist = np.minimum(j, 16 - j)

# M_phi C_psi: a smooth multiplier times a short convolution
phi = np.exp(-dist**2 / 8.0)
psi = np.where(dist == 0, 0.5, np.where(dist == 1, 0.25, 0.0))
A = oa.multiplication_operator(G, phi) @ oa.convolution_operator(G, psi)
K = oa.band_support(A)
print("band of M_phi C_psi:", K.elements())
print("band of F A F^-1:   ", oa.band_support(oa.fourier_conjugate(A), 1e-10).elements())

# a dense operator, smoothed by g with supp g^ in K, lands in BO_K
B = oa.KernelOperator(G, rng.standard_normal((16, 16)))
ghat = np.where(K.mask(), 1.0, 0.0)
S = oa.smooth_fourier(c, _dual_from_transform(G, ghat), B)
print("smoothed dense operator in BO_K:", oa.is_band_operator(S, K))
print("A unchanged by the same smoothing:", (oa.smooth_fourier(c, _dual_from_transform(G, ghat), A) - A).norm())

# oscillation under translations and modulations
rep = oa.oscillation(c, A)
print(f"osc_G = {rep.osc_group:.4f}   osc_dual = {rep.osc_dual:.4f}")
print("dense:", oa.oscillation(c, B).osc_group, oa.oscillation(c, B).osc_dual)

# smoothing profile along shrinking Fejer bumps
prof = oa.c1_membership_profile(c, A)
print("radius  smoothing_error  smoothed_osc_G  smoothed_osc_dual")
for row in prof.rows():
    print(f"{row['radius']:6d}  {row['smoothing_error']:15.6f}  {row['smoothed_osc_group']:14.6f}"
          f"  {row['smoothed_osc_dual']:17.6f}")
print("two-sided inequalities hold:", prof.two_sided_ok)
