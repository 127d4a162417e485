"""Phase space of Z_8: the short-time Fourier transform as a wavelet transform.

Run with ``python demos/01_phase_space.py``.
"""
import numpy as np

from qhafinite.group import FiniteAbelianGroup, fourier
from qhafinite.heisenberg import Cocycle, phase_point, rep_U_matrix
from qhafinite.coorbit import (Window, wavelet, wavelet_adjoint, godement_check,
                               coorbit_project, reproducing_kernel, inner_phase)

G = FiniteAbelianGroup([8])
c = Cocycle(G)  # a = 1, so m((x,nu),(y,mu)) = conj(mu(x))
rng = np.random.default_rng(0)

# characters and the Fourier transform; weights 1 on G and 1/8 on the dual
print("chi_1 on Z8:", np.round(G.characters[1], 3))
print("F(delta_0) =", fourier(G, np.eye(8)[0]).real)

# U_(x,nu) translates by x and modulates by nu.  The phase in U U = m U
xi, eta = 9, 20
U = lambda p: rep_U_matrix(c, p)
print(phase_point(G, xi), phase_point(G, eta), "-> m =", np.round(c.table[xi, eta], 3),
      " residual:", np.linalg.norm(U(xi) @ U(eta) - c.table[xi, eta] * U(c.add[xi, eta])))

# a gaussian window; W f(x, nu) = <f, U_(x,nu) phi0> is the STFT
t = np.minimum(np.arange(8), 8 - np.arange(8))
w = Window(c, np.exp(-t**2 / 2.0), name="gauss")
f = np.cos(2 * np.pi * 3 * np.arange(8) / 8) + 0.1 * rng.standard_normal(8)
spec = np.abs(wavelet(w, f)).reshape(8, 8)
print("|W f| (rows x, columns nu):")
print(np.round(spec, 2))

# orthogonality relations with c = 1, and inversion through the adjoint
w1 = Window(c, rng.standard_normal(8))
print("Godement residual:", godement_check(f, rng.standard_normal(8), w, w1))
print("reconstruction error:", np.abs(wavelet_adjoint(w, wavelet(w, f)) / w.norm_sq - f).max())

# range of W: projection by twisted convolution with W(phi0), and the kernel K_xi
F = rng.standard_normal(64)
PF = coorbit_project(w, F)
print("P^2 F - P F:", np.abs(coorbit_project(w, PF) - PF).max())
Wf = wavelet(w, f)
print("<Wf, K_xi> - Wf(xi), worst xi:",
      max(abs(inner_phase(G, Wf, reproducing_kernel(w, p)) - Wf[p]) for p in range(64)))
