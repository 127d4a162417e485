import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qhafinite import opalg as oa
from qhafinite.group import FiniteAbelianGroup, fourier, fourier_dual
from qhafinite.heisenberg import Cocycle, rep_U_matrix
from qhafinite.selftest import _dual_from_transform

from conftest import SMALL_GROUPS, crandn

Z2 = FiniteAbelianGroup([2])
Z4 = FiniteAbelianGroup([4])


def random_op(g, rng):
    return oa.KernelOperator(g, crandn(rng, g.size, g.size))


def band_op(g, rng, K):
    return oa.KernelOperator(g, np.where(K.mask()[g.sub_table], crandn(rng, g.size, g.size), 0))


def test_action_and_pairing_convention(group, rng):
    A = random_op(group, rng)
    f, phi, psi = (crandn(rng, group.size) for _ in range(3))
    w = group.w_group
    direct = np.array([sum(A.kernel[x, y] * f[y] * w for y in range(group.size)) for x in range(group.size)])
    np.testing.assert_allclose(A.apply(f), direct, atol=1e-12)
    k = oa.pairing_kernel(A)
    pairing = np.einsum("xy,x,y->", k, phi, psi.conj()) * w * w
    assert abs(pairing - np.vdot(psi, A.apply(phi)) * w) < 1e-10
    np.testing.assert_allclose(A.adjoint().matrix, A.matrix.conj().T)


def test_alpha_matches_conjugation(group, rng):
    c = Cocycle(group)
    A = random_op(group, rng)
    for p in range(c.size):
        U = rep_U_matrix(c, p)
        np.testing.assert_allclose(oa.alpha(c, p, A).matrix, U @ A.matrix @ U.conj().T, atol=1e-12)
    np.testing.assert_allclose(oa.alpha(c, 0, A).kernel, A.kernel)


def test_alpha_examples(group, rng):
    c = Cocycle(group)
    f = crandn(rng, group.size)
    psi = crandn(rng, group.size)
    for p in range(c.size):
        ix, inu = divmod(p, group.size)
        shifted = f[group.sub_table[ix]]
        np.testing.assert_allclose(oa.alpha(c, p, oa.multiplication_operator(group, f)).kernel,
                                   oa.multiplication_operator(group, shifted).kernel, atol=1e-12)
        modulated = psi * group.characters[inu]
        np.testing.assert_allclose(oa.alpha(c, p, oa.convolution_operator(group, psi)).kernel,
                                   oa.convolution_operator(group, modulated).kernel, atol=1e-12)


def test_band_support_examples():
    S = oa.shift_operator(Z4, (1,))
    assert S.apply([1, 2, 3, 4]).tolist() == [2, 3, 4, 1]
    assert oa.band_support(S).elements() == [(1,)]
    D = oa.multiplication_operator(Z4, [1, 2, 3, 4])
    assert oa.band_support(D).elements() == [(0,)]
    dense = random_op(Z4, np.random.default_rng(0))
    assert len(oa.band_support(dense)) == 4
    assert oa.is_band_operator(dense, oa.BandSet.whole(Z4))
    assert not oa.is_band_operator(S, oa.BandSet.from_elements(Z4, [(0,)]))
    assert oa.is_band_operator(S, oa.BandSet.from_elements(Z4, [(1,)]))


def test_band_definition_uses_inverse_set():
    S = oa.shift_operator(Z4, (1,))
    K = oa.BandSet.from_elements(Z4, [(1,)])
    # S delta_h is supported at h - 1
    assert oa.satisfies_band_definition(S, K.inverse())
    assert not oa.satisfies_band_definition(S, K)


def test_band_set_flags():
    K = oa.BandSet.from_elements(Z4, [(0,), (1,), (3,)])
    assert K.contains_identity and K.symmetric
    K2 = oa.BandSet.from_elements(Z4, [(1,)])
    assert not K2.symmetric and not K2.contains_identity
    assert K2.product(K2).elements() == [(2,)]
    assert K2.inverse().elements() == [(3,)]


def test_band_truncate():
    A = oa.KernelOperator(Z2, np.ones((2, 2)))
    B, dist = oa.band_truncate(A, oa.BandSet.from_elements(Z2, [(0,)]))
    np.testing.assert_allclose(B.kernel, np.eye(2))
    assert dist == pytest.approx(1.0)
    _, zero = oa.band_truncate(oa.shift_operator(Z4, (1,)), oa.BandSet.from_elements(Z4, [(1,)]))
    assert zero == 0


def test_band_truncate_monotone(rng):
    g = FiniteAbelianGroup([6])
    A = random_op(g, rng)
    order = [0, 1, 5, 2, 4, 3]
    dists = [oa.band_truncate(A, oa.BandSet(g, frozenset(order[:k])))[1] for k in range(1, 7)]
    assert all(b <= a + 1e-12 for a, b in zip(dists, dists[1:]))
    assert dists[-1] == pytest.approx(0, abs=1e-12)


@pytest.mark.parametrize("orders", [(4,), (2, 2)])
def test_band_algebra_exhaustive(orders):
    g = FiniteAbelianGroup(orders)
    rng = np.random.default_rng(7)
    subsets = [oa.BandSet(g, frozenset(s)) for r in range(1, g.size + 1)
               for s in itertools.combinations(range(g.size), r)]
    for KA in subsets:
        A = band_op(g, rng, KA)
        assert oa.band_support(A.adjoint()).indices == oa.band_support(A).inverse().indices
        for KB in subsets:
            B = band_op(g, rng, KB)
            assert oa.band_support(A @ B) <= oa.band_support(A).product(oa.band_support(B))


def test_qha_convolve_examples(group, rng):
    c = Cocycle(group)
    A = random_op(group, rng)
    unit = oa.PhaseMeasure.atom(group, 0)
    np.testing.assert_allclose(oa.qha_convolve(c, unit, A).kernel, A.kernel)
    diag = oa.qha_convolve(c, oa.PhaseMeasure.delta_tensor(group, np.ones(group.size)), A)
    np.testing.assert_allclose(diag.kernel, np.diag(np.diag(A.kernel)), atol=1e-12)
    mu = oa.PhaseMeasure(group, atoms=[(3 % c.size, 0.5 - 1j)], density=crandn(rng, c.size))
    assert oa.qha_convolve(c, mu, A).norm() <= mu.total_variation() * A.norm() * (1 + 1e-12)


def test_kernel_multiplier_lemma(rng):
    for g in (Z4, FiniteAbelianGroup([2, 3])):
        c = Cocycle(g)
        for _ in range(10):
            A = random_op(g, rng)
            h = crandn(rng, g.size)
            direct = oa.qha_convolve(c, oa.PhaseMeasure.delta_tensor(g, h), A)
            np.testing.assert_allclose(direct.kernel, oa.kernel_multiplier(g, h) * A.kernel, atol=1e-10)
            np.testing.assert_allclose(oa.smooth_fourier(c, h, A).kernel, direct.kernel, atol=1e-10)


def test_smooth_fourier_examples(group, rng):
    c = Cocycle(group)
    A = random_op(group, rng)
    np.testing.assert_allclose(oa.smooth_fourier(c, np.ones(group.size), A).kernel,
                               np.diag(np.diag(A.kernel)), atol=1e-12)
    K = oa.BandSet(group, frozenset({0, group.size - 1}))
    B = band_op(group, rng, K)
    ghat = np.where(K.mask(), 1.0, crandn(rng, group.size))
    h = _dual_from_transform(group, ghat)
    np.testing.assert_allclose(fourier_dual(group, h), ghat, atol=1e-12)
    np.testing.assert_allclose(oa.smooth_fourier(c, h, B).kernel, B.kernel, atol=1e-10)


def test_oscillation_examples():
    for n in (4, 5, 8):
        g = FiniteAbelianGroup([n])
        c = Cocycle(g)
        D = oa.multiplication_operator(g, np.arange(1, n + 1))
        assert oa.oscillation(c, D).osc_dual == 0
        C = oa.convolution_operator(g, np.random.default_rng(n).standard_normal(n))
        assert oa.oscillation(c, C).osc_group < 1e-12
        S = oa.shift_operator(g, (1,))
        rep = oa.oscillation(c, S, [], [(1,)])
        assert rep.osc_dual == pytest.approx(abs(np.exp(2j * np.pi / n) - 1))
        assert oa.band_oscillation_bound(S, (1,)) == pytest.approx(rep.osc_dual)


def test_band_oscillation_bound_holds(rng):
    g = FiniteAbelianGroup([8])
    c = Cocycle(g)
    K = oa.BandSet.from_elements(g, [(0,), (1,), (7,)])
    for _ in range(10):
        A = band_op(g, rng, K)
        for nu in range(1, 8):
            val = (oa.alpha(c, (g.identity, (nu,)), A) - A).norm()
            assert val <= oa.band_oscillation_bound(A, (nu,)) + 1e-12


def test_fourier_conjugate(group, rng):
    Id = oa.KernelOperator.from_matrix(group, np.eye(group.size))
    np.testing.assert_allclose(oa.fourier_conjugate(Id).matrix, np.eye(group.size), atol=1e-12)
    f = crandn(rng, group.size)
    T = oa.fourier_conjugate(oa.multiplication_operator(group, f))
    assert T.dual
    np.testing.assert_allclose(T.kernel, fourier(group, f)[group.sub_table.T], atol=1e-12)
    A = random_op(group, rng)
    twice = oa.fourier_conjugate(oa.fourier_conjugate(A))
    R = np.eye(group.size)[group.neg]
    np.testing.assert_allclose(twice.matrix, R @ A.matrix @ R, atol=1e-10)
    # F A F^{-1} as matrices on coefficient vectors
    F = group.characters.conj() * group.w_group
    Finv = group.characters.T * group.w_dual
    np.testing.assert_allclose(oa.fourier_conjugate(A).matrix, F @ A.matrix @ Finv, atol=1e-10)


def test_fejer_bump():
    g = FiniteAbelianGroup([8])
    b = oa.fejer_bump(g, 1)
    np.testing.assert_allclose(b, np.eye(8)[0])
    b3 = oa.fejer_bump(g, 3, dual=True)
    assert np.all(b3 >= 0) and b3.sum() * g.w_dual == pytest.approx(1)
    assert np.count_nonzero(b3) == 5
    with pytest.raises(ValueError):
        oa.fejer_bump(g, 0)


def test_c1_profile(rng):
    g = FiniteAbelianGroup([8])
    c = Cocycle(g)
    j = np.arange(8)
    phi = np.exp(-np.minimum(j, 8 - j) ** 2)
    psi = np.zeros(8)
    psi[[0, 1, 7]] = [0.5, 0.25, 0.25]
    A = oa.multiplication_operator(g, phi) @ oa.convolution_operator(g, psi)
    prof = oa.c1_membership_profile(c, A)
    assert prof.two_sided_ok
    assert prof.radii[-1] == 1 and prof.smoothing_errors[-1] == pytest.approx(0, abs=1e-12)
    assert prof.band_group == [(0,), (1,), (7,)]
    rows = prof.rows()
    assert set(rows[0]) >= {"radius", "smoothing_error"}
    dense = random_op(g, rng)
    pd = oa.c1_membership_profile(c, dense)
    assert pd.two_sided_ok and len(pd.band_group) == 8 and len(pd.band_dual) == 8


def test_kernel_json_roundtrip(group, rng):
    A = random_op(group, rng)
    B = oa.KernelOperator.from_json(A.to_json())
    np.testing.assert_array_equal(A.kernel, B.kernel)
    with pytest.raises(ValueError):
        oa.KernelOperator.from_json({"group": {"orders": [2]}, "kernel": [[1, 2], [3, 4]]})


def test_schur_bound(group, rng):
    A = random_op(group, rng)
    assert A.norm() <= A.schur_bound(2) + 1e-12
    assert A.schur_bound(1) == pytest.approx(np.abs(A.matrix).sum(axis=0).max())


@given(st.sampled_from(SMALL_GROUPS), st.integers(0, 2**32 - 1))
def test_alpha_is_action_and_isometric(orders, seed):
    g = FiniteAbelianGroup(orders)
    c = Cocycle(g)
    rng = np.random.default_rng(seed)
    A = random_op(g, rng)
    p, q = (int(v) for v in rng.integers(c.size, size=2))
    lhs = oa.alpha(c, p, oa.alpha(c, q, A))
    assert (lhs - oa.alpha(c, int(c.add[p, q]), A)).norm() < 1e-12
    assert oa.alpha(c, p, A).norm() == pytest.approx(A.norm())


@given(st.sampled_from(SMALL_GROUPS), st.integers(0, 2**32 - 1))
def test_c01_bdo_directions(orders, seed):
    g = FiniteAbelianGroup(orders)
    c = Cocycle(g)
    rng = np.random.default_rng(seed)
    K = oa.BandSet(g, frozenset(rng.choice(g.size, int(rng.integers(1, g.size + 1)), replace=False).tolist()))
    A = random_op(g, rng)
    ghat = np.where(K.mask(), crandn(rng, g.size), 0)
    assert oa.is_band_operator(oa.smooth_fourier(c, _dual_from_transform(g, ghat), A), K, 1e-12)
    B = band_op(g, rng, K)
    ghat = np.where(K.mask(), 1.0, crandn(rng, g.size))
    assert (oa.smooth_fourier(c, _dual_from_transform(g, ghat), B) - B).norm() < 1e-10
