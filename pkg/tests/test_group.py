import numpy as np
import pytest
from hypothesis import given, strategies as st

from qhafinite.group import (
    FiniteAbelianGroup,
    character_eval,
    fourier,
    fourier_dual,
    group_inv,
    group_op,
    inverse_fourier,
    make_group,
)

from conftest import crandn

orders_st = st.lists(st.integers(1, 5), min_size=1, max_size=3)


def test_sizes_and_weights():
    for orders, size in (([2], 2), ([4], 4), ([2, 3], 6)):
        g = make_group(orders)
        assert g.size == size
        assert g.w_group == 1.0
        assert g.w_dual == pytest.approx(1.0 / size)
        assert g.w_phase == pytest.approx(1.0 / size)


def test_rejects_bad_orders():
    with pytest.raises(ValueError):
        make_group([])
    with pytest.raises(ValueError):
        make_group([2, 0])


def test_unreduced_element():
    g = make_group([2, 3])
    assert g.element((1, 2)) == (1, 2)
    with pytest.raises(ValueError):
        g.element((1, 3))
    assert make_group([2, 3], auto_reduce=True).element((1, 3)) == (1, 0)


def test_group_law_examples():
    z4 = make_group([4])
    assert group_op(z4, (1,), (2,)) == (3,)
    assert group_inv(z4, (1,)) == (3,)
    assert group_op(make_group([2, 3]), (1, 2), (1, 2)) == (0, 1)


def test_character_examples():
    assert character_eval(make_group([4]), (1,), (1,)) == pytest.approx(1j)
    assert character_eval(make_group([2]), (1,), (1,)) == pytest.approx(-1)
    g = make_group([2, 3])
    for x in g.iter_elements():
        assert character_eval(g, (0, 0), x) == 1


def test_fourier_examples():
    z2 = make_group([2])
    np.testing.assert_allclose(fourier(z2, [1, 0]), [1, 1])
    for n in (3, 5):
        g = make_group([n])
        expected = np.zeros(n)
        expected[0] = n
        np.testing.assert_allclose(fourier(g, np.ones(n)), expected, atol=1e-12)
        delta = np.zeros(n)
        delta[0] = 1
        np.testing.assert_allclose(fourier_dual(g, np.ones(n)), delta, atol=1e-12)


def test_lexicographic_order():
    g = make_group([2, 3])
    assert [g.element_at(i) for i in range(6)] == [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)]


def test_json_roundtrip():
    g = make_group([2, 3])
    assert g.to_json() == {"orders": [2, 3]}
    assert FiniteAbelianGroup.from_json(g.to_json()) == g


@given(orders_st)
def test_character_orthogonality(orders):
    g = FiniteAbelianGroup(orders)
    gram = g.characters @ g.characters.conj().T * g.w_group
    np.testing.assert_allclose(gram, g.size * g.w_group * np.eye(g.size), atol=1e-12)


@given(orders_st, st.integers(0, 2**32 - 1))
def test_plancherel_and_inversion(orders, seed):
    g = FiniteAbelianGroup(orders)
    rng = np.random.default_rng(seed)
    f, h = crandn(rng, g.size), crandn(rng, g.size)
    lhs = np.vdot(fourier(g, h), fourier(g, f)) * g.w_dual
    assert abs(lhs - np.vdot(h, f) * g.w_group) < 1e-10
    np.testing.assert_allclose(inverse_fourier(g, fourier(g, f)), f, atol=1e-12)


@given(orders_st, st.data())
def test_character_multiplicative_and_double_dual(orders, data):
    g = FiniteAbelianGroup(orders)
    i, j, k = (data.draw(st.integers(0, g.size - 1)) for _ in range(3))
    x, y, nu = g.element_at(i), g.element_at(j), g.element_at(k)
    xy = group_op(g, x, y)
    assert character_eval(g, nu, xy) == pytest.approx(character_eval(g, nu, x) * character_eval(g, nu, y))
    # x evaluated as a character of the dual
    assert character_eval(g, x, nu) == pytest.approx(character_eval(g, nu, x))
    assert abs(abs(character_eval(g, nu, x)) - 1) < 1e-12
