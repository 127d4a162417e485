"""Coorbit norms on a finite group: all spaces coincide, the norms do not.

Run with ``python demos/02_coorbit_norms.py``.
"""
import numpy as np

from qhafinite.group import FiniteAbelianGroup
from qhafinite.heisenberg import Cocycle
from qhafinite.coorbit import Window, delta_window, coorbit_norm, window_equivalence_constant, parity_isometry_check

G = FiniteAbelianGroup([2, 3])
c = Cocycle(G)
rng = np.random.default_rng(1)
f = rng.standard_normal(6) + 1j * rng.standard_normal(6)

# with phi0 = delta_e the coorbit norm is just the l^p norm
d = delta_window(c)
for p in (1, 2, 3, np.inf):
    lp = np.abs(f).max() if np.isinf(p) else (np.abs(f)**p).sum() ** (1 / p)
    print(f"p={p}: |f|_(p,delta) = {coorbit_norm(d, f, p).value:.12f}   l^p = {lp:.12f}")

# a different window changes the numbers by at most the constant C
w = Window(c, rng.standard_normal(6), name="random")
C, idx = window_equivalence_constant(d, w)
ratios = []
for _ in range(200):
    g = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    ratios.append(coorbit_norm(w, g, 1).value / coorbit_norm(d, g, 1).value)
print(f"C = {C:.4f} (at phase point {idx}); worst observed ratio {max(ratios):.4f}")

# R f(y) = f(-y) is an isometry when the window is even or odd
for p in (1, 2, np.inf):
    print(f"p={p}: | |Rf| - |f| | = {parity_isometry_check(d, f, p):.2e}")
