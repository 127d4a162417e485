"""Compactness on windowed Z through limit operators.

Run with ``python demos/04_limit_operators.py``.
"""
from qhafinite import limitops as lo
from qhafinite.opalg import band_support

for kind in ("diag_decay", "identity", "laurent_shift", "periodic_sign", "mult_c0", "conv_L1", "product"):
    item = lo.example_gallery(kind)
    rep = lo.compactness_diagnostic(item.operator)
    sig = dict(rep.tail)
    print(f"{item.description:40s} {rep.verdict:12s} sigma(0)={sig[0]:.3e} sigma(48)={sig[48]:.3e}"
          f"  n*={rep.n_star}")

# the two limit operators of diag((-1)^j), one per residue class
B = lo.example_gallery("periodic_sign", N=4).operator
for spec, L in lo.limit_operators(B):
    print(spec.label(), L.diagonals[(0,)].values.real)

# tail norms of diag(1/(1+|j|)) are exactly 1/(n+2)
B = lo.example_gallery("diag_decay").operator
print([(n, round(s * (n + 2), 12)) for n, s in lo.tail_norms(B, [0, 10, 50, 100])])

# periodizing the window gives an operator on Z_(2N+1) with the same band
P = lo.periodize(lo.example_gallery("product", N=10).operator)
print("band on", P.group, ":", band_support(P).elements())
