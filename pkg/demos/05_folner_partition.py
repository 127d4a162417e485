"""Følner boxes and the almost-invariant partition of unity on Z and Z^2.

Run with ``python demos/05_folner_partition.py``.
"""
from qhafinite import propa as pr

H = [(1,), (-1,)]
for eps in (0.2, 0.1, 0.05, 0.01):
    K = pr.folner_for(eps, H)
    print(f"eps={eps:<5} N={K.sides[0]:4d}  ratio={pr.folner_ratio(K, (1,))}")

K = pr.folner_for(0.05, H)
rep = pr.verify_partition(pr.build_partition(K, 60, H), H, 0.05)
for name, chk in rep.checks.items():
    print(f"({name}) passed={chk['passed']} value={chk['value']}")

H2 = pr.unit_cross(2)
K2 = pr.folner_for(0.1, H2)
rep2 = pr.verify_partition(pr.build_partition(K2, K2.sides[0] + 2, H2), H2, 0.1)
print("Z^2:", K2.sides, "ratio", rep2.ratio, "all conditions:", rep2.passed, "interior points:", rep2.interior_points)
