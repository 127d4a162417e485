"""Acceptance gate: one test per criterion, each at its stated tolerance.

Each test records what it measured; the terminal summary prints one
PASS/FAIL line per criterion.
"""
import numpy as np
import pytest

from qhafinite import coorbit as co
from qhafinite import limitops as lo
from qhafinite import opalg as oa
from qhafinite import propa as pr
from qhafinite.group import FiniteAbelianGroup, fourier
from qhafinite.heisenberg import Cocycle, parity_intertwine_check
from qhafinite.selftest import _dual_from_transform
from fractions import Fraction

from conftest import crandn


def measured(record_property, text):
    record_property("measured", text)
    print(text)


@pytest.fixture
def rng():
    return np.random.default_rng(20241016)


GROUPS = [(2,), (4,), (2, 3)]


def test_criterion_01_godement(rng, record_property):
    worst = 0.0
    for orders in GROUPS:
        c = Cocycle(FiniteAbelianGroup(orders))
        n = c.group.size
        for _ in range(100):
            w0, w1 = co.Window(c, crandn(rng, n)), co.Window(c, crandn(rng, n))
            worst = max(worst, co.godement_check(crandn(rng, n), crandn(rng, n), w0, w1))
    measured(record_property, f"max Godement residual {worst:.3e} (< 1e-10)")
    assert worst < 1e-10


def test_criterion_02_twisted_convolution(rng, record_property):
    g = FiniteAbelianGroup([4])
    c = Cocycle(g)
    worst = 0.0
    for _ in range(100):
        p0, p1, p2, p3 = (crandn(rng, 4) for _ in range(4))
        lhs = co.twisted_convolution(c, co.wavelet(co.Window(c, p0), p3), co.wavelet(co.Window(c, p1), p2))
        rhs = co.inner_group(g, p2, p0) * co.wavelet(co.Window(c, p1), p3)
        worst = max(worst, float(np.abs(lhs - rhs).max()))
    measured(record_property, f"max pointwise error {worst:.3e} (< 1e-10)")
    assert worst < 1e-10


def test_criterion_03_projection(rng, record_property):
    g = FiniteAbelianGroup([4])
    c = Cocycle(g)
    w = co.Window(c, crandn(rng, 4))
    P = co.projection_matrix(w)
    W = w.matrix
    errs = [np.linalg.norm(P @ P - P), np.linalg.norm(P - P.conj().T), np.linalg.norm(P @ W - W)]
    F = crandn(rng, c.size)
    errs.append(np.linalg.norm(co.coorbit_project(w, F) - P @ F))
    Wf = co.wavelet(w, crandn(rng, 4))
    kern = max(abs(co.inner_phase(g, Wf, co.reproducing_kernel(w, xi)) - Wf[xi]) for xi in range(c.size))
    measured(record_property, f"Frobenius errors {max(errs):.3e}, kernel evaluation {kern:.3e} (< 1e-10)")
    assert max(errs) < 1e-10 and kern < 1e-10


def test_criterion_04_hg_multiplier(rng, record_property):
    worst = 0.0
    for orders in [(4,), (2, 3)]:
        g = FiniteAbelianGroup(orders)
        c = Cocycle(g)
        for _ in range(50):
            A = oa.KernelOperator(g, crandn(rng, g.size, g.size))
            h = crandn(rng, g.size)
            direct = oa.qha_convolve(c, oa.PhaseMeasure.delta_tensor(g, h), A)
            worst = max(worst, float(np.abs(direct.kernel - oa.kernel_multiplier(g, h) * A.kernel).max()))
    measured(record_property, f"max entrywise error {worst:.3e} (< 1e-10)")
    assert worst < 1e-10


def test_criterion_05_c01_equals_bdo(rng, record_property):
    violations = 0
    err = 0.0
    for orders in [(4,), (2, 3)]:
        g = FiniteAbelianGroup(orders)
        c = Cocycle(g)
        for _ in range(50):
            K = oa.BandSet(g, frozenset(rng.choice(g.size, int(rng.integers(1, g.size + 1)), replace=False).tolist()))
            A = oa.KernelOperator(g, crandn(rng, g.size, g.size))
            ghat = np.where(K.mask(), crandn(rng, g.size), 0)
            S = oa.smooth_fourier(c, _dual_from_transform(g, ghat), A)
            violations += not oa.is_band_operator(S, K, 0)
            B = oa.KernelOperator(g, np.where(K.mask()[g.sub_table], crandn(rng, g.size, g.size), 0))
            ghat = np.where(K.mask(), 1.0, crandn(rng, g.size))
            err = max(err, (oa.smooth_fourier(c, _dual_from_transform(g, ghat), B) - B).norm())
    measured(record_property, f"(a) band violations {violations}/100; (b) max error {err:.3e} (< 1e-10)")
    assert violations == 0 and err < 1e-10


def test_criterion_05a_exact_zero_outside_band(rng):
    # with tolerance exactly 0, entries outside K must vanish to the bit
    g = FiniteAbelianGroup([4])
    c = Cocycle(g)
    K = oa.BandSet.from_elements(g, [(0,), (1,)])
    ghat = np.where(K.mask(), crandn(rng, 4), 0)
    S = oa.smooth_fourier(c, _dual_from_transform(g, ghat), oa.KernelOperator(g, crandn(rng, 4, 4)))
    outside = ~K.mask()[g.sub_table]
    assert np.max(np.abs(S.kernel[outside])) == 0


def test_criterion_06_band_algebra(record_property):
    import itertools

    g = FiniteAbelianGroup([4])
    rng = np.random.default_rng(6)
    subsets = [oa.BandSet(g, frozenset(s)) for r in range(1, 5) for s in itertools.combinations(range(4), r)]
    bad = 0
    pairs = 0
    for KA in subsets:
        A = oa.KernelOperator(g, np.where(KA.mask()[g.sub_table], crandn(rng, 4, 4), 0))
        bad += oa.band_support(A.adjoint()).indices != oa.band_support(A).inverse().indices
        for KB in subsets:
            B = oa.KernelOperator(g, np.where(KB.mask()[g.sub_table], crandn(rng, 4, 4), 0))
            bad += not (oa.band_support(A @ B) <= oa.band_support(A).product(oa.band_support(B)))
            pairs += 1
    measured(record_property, f"{pairs} products and {len(subsets)} adjoints on Z4, violations {bad}")
    assert bad == 0


def test_criterion_07_compactness(record_property):
    verdicts = {}
    for kind in ("diag_decay", "identity", "laurent_shift", "product"):
        verdicts[kind] = lo.compactness_diagnostic(lo.example_gallery(kind).operator)
    B = lo.example_gallery("diag_decay").operator
    tail = lo.tail_norms(B, range(0, 120))
    tail_err = max(abs(s - 1 / (n + 2)) for n, s in tail)
    prod = verdicts["product"]
    sigma_star = dict(prod.tail)[prod.n_star] if prod.n_star is not None else float("inf")
    measured(record_property,
             "verdicts " + ", ".join(f"{k}={v.verdict}" for k, v in verdicts.items())
             + f"; diag tail error {tail_err:.1e}; M_phi C_psi sigma({prod.n_star}) = {sigma_star:.2e}")
    assert verdicts["diag_decay"].verdict == "COMPACT"
    assert verdicts["identity"].verdict == "NOT COMPACT"
    assert verdicts["laurent_shift"].verdict == "NOT COMPACT"
    assert prod.verdict == "COMPACT"
    assert tail_err < 1e-12
    assert sigma_star < 1e-6 and prod.monotone


def test_criterion_08_fourier_of_multiplication(rng, record_property):
    g = FiniteAbelianGroup([8])
    worst = 0.0
    for _ in range(20):
        f = crandn(rng, 8)
        T = oa.fourier_conjugate(oa.multiplication_operator(g, f))
        worst = max(worst, float(np.abs(T.kernel - fourier(g, f)[g.sub_table.T]).max()))
    measured(record_property, f"max kernel error on Z8 {worst:.3e} (< 1e-10)")
    assert worst < 1e-10


def test_criterion_09_parity(rng, record_property):
    g = FiniteAbelianGroup([4])
    c = Cocycle(g)
    inter = max(parity_intertwine_check(c, p)[1] for p in range(c.size))
    w = co.delta_window(c)
    iso = max(co.parity_isometry_check(w, crandn(rng, 4), p) for _ in range(50) for p in (1, 2, np.inf))
    measured(record_property, f"intertwining {inter:.3e} (< 1e-12); isometry {iso:.3e}")
    assert inter < 1e-12 and iso < 1e-10


def test_criterion_10_property_a(record_property):
    H = [(1,), (-1,)]
    K = pr.folner_for(0.05, H)
    rep = pr.verify_partition(pr.build_partition(K, 60, H), H, 0.05)
    N = K.sides[0]
    iii = rep.checks["iii"]["per_h"]
    H2 = pr.unit_cross(2)
    K2 = pr.folner_for(0.1, H2)
    rep2 = pr.verify_partition(pr.build_partition(K2, K2.sides[0] + 2, H2), H2, 0.1)
    measured(record_property, f"N={N}, (iii)={iii['[1]']} and {iii['[-1]']}; "
                              f"d=2 box {K2.sides} ratio {rep2.ratio} < 1/10")
    assert N == 41
    assert iii["[1]"] == Fraction(2, N) and iii["[-1]"] == Fraction(2, N)
    assert all(rep.checks[k]["passed"] for k in ("i", "ii", "iv"))
    assert rep.checks["i"]["value"] == 1
    assert rep2.passed and rep2.ratio < Fraction(1, 10)


def test_criterion_11_modulation_is_lp(rng, record_property):
    worst = 0.0
    for n in (2, 4, 8, 16):
        w = co.delta_window(Cocycle(FiniteAbelianGroup([n])))
        for _ in range(50):
            f = crandn(rng, n)
            for p in (1, 2, 3, np.inf):
                lp = np.abs(f).max() if np.isinf(p) else np.sum(np.abs(f) ** p) ** (1 / p)
                worst = max(worst, abs(co.coorbit_norm(w, f, p).value - lp))
    measured(record_property, f"max |coorbit norm - l^p norm| {worst:.3e} (< 1e-12)")
    assert worst < 1e-12
