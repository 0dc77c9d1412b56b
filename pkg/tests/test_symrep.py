"""Weight-k coefficient modules: the symmetric-power action and its dual."""

from __future__ import annotations

import random

import pytest

from drinfeld import (
    Mat2,
    NonInvertibleDeterminant,
    ScalarKHat,
    chi,
    dual_act,
    dual_unit,
    dual_zero,
    epsilon,
    gamma_level,
    sigma,
    sym_act,
)
from drinfeld.sampling import random_group_element


def _unit(k, p, i):
    return [ScalarKHat.from_rational(1 if j == i else 0, p) for j in range(k + 1)]


def _vec_eq(xs, ys):
    return all((a - b).is_zero() for a, b in zip(xs, ys))


def _scale(s, xs):
    return [s * x for x in xs]


class TestDiagonalEigenvalues:
    @pytest.mark.parametrize("p", [2, 3])
    @pytest.mark.parametrize("n", [-1, 1])
    def test_sym_eigenvalues_on_the_axis(self, p, n):
        # the level-n diagonal element scales the i-th monomial by pihat^{n(2i-k)}
        for k in range(0, 5):
            g = gamma_level(n, p)
            for i in range(k + 1):
                out = sym_act(g, _unit(k, p, i), k, p)
                expected = _scale(ScalarKHat.pihat(p, n * (2 * i - k)), _unit(k, p, i))
                assert _vec_eq(out, expected)

    @pytest.mark.parametrize("p", [2, 3])
    @pytest.mark.parametrize("n", [-1, 1])
    def test_dual_eigenvalues_are_inverted(self, p, n):
        for k in range(0, 5):
            g = gamma_level(n, p)
            for j in range(k + 1):
                out = dual_act(g, dual_unit(k, p, j), k, p)
                expected = _scale(
                    ScalarKHat.pihat(p, n * (k - 2 * j)), dual_unit(k, p, j)
                )
                assert _vec_eq(out, expected)


class TestActionLaws:
    @pytest.mark.parametrize("k", [0, 1, 2, 3])
    def test_sym_act_is_a_left_action(self, k):
        p = 2
        rng = random.Random(101 + k)
        for _ in range(8):
            g1 = random_group_element(rng, p)
            g2 = random_group_element(rng, p)
            vec = [
                ScalarKHat.from_rational(rng.randrange(-3, 4), p) for _ in range(k + 1)
            ]
            lhs = sym_act(g2, sym_act(g1, vec, k, p), k, p)
            rhs = sym_act(g2 @ g1, vec, k, p)
            assert _vec_eq(lhs, rhs)

    @pytest.mark.parametrize("k", [0, 1, 2, 3])
    def test_dual_act_is_a_left_action(self, k):
        p = 2
        rng = random.Random(211 + k)
        for _ in range(8):
            g1 = random_group_element(rng, p)
            g2 = random_group_element(rng, p)
            vec = [
                ScalarKHat.from_rational(rng.randrange(-3, 4), p) for _ in range(k + 1)
            ]
            lhs = dual_act(g2, dual_act(g1, vec, k, p), k, p)
            rhs = dual_act(g2 @ g1, vec, k, p)
            assert _vec_eq(lhs, rhs)

    @pytest.mark.parametrize("k", [0, 1, 2, 3, 4])
    def test_scalar_p_acts_trivially(self, k):
        # the central element diag(p, p) lies in the kernel of the normalized action
        p = 2
        g = Mat2(p, 0, 0, p)
        for i in range(k + 1):
            assert _vec_eq(sym_act(g, _unit(k, p, i), k, p), _unit(k, p, i))
            assert _vec_eq(dual_act(g, dual_unit(k, p, i), k, p), dual_unit(k, p, i))

    def test_identity_acts_trivially(self):
        p = 3
        k = 3
        vec = [ScalarKHat.from_rational(j + 1, p) for j in range(k + 1)]
        assert _vec_eq(sym_act(Mat2.identity(), vec, k, p), vec)

    def test_singular_matrix_rejected(self):
        with pytest.raises(NonInvertibleDeterminant):
            sym_act(Mat2(1, 2, 2, 4), _unit(1, 2, 0), 1, 2)


class TestCharacters:
    def test_chi_on_the_axis(self):
        p = 2
        assert str(chi(gamma_level(1, p), p)) == str(ScalarKHat.pihat(p, 1))
        inv = chi(gamma_level(1, p).inv(), p)
        assert inv.valuation() == -chi(gamma_level(1, p), p).valuation()

    def test_chi_is_multiplicative(self):
        p = 3
        rng = random.Random(307)
        for _ in range(10):
            g1 = random_group_element(rng, p)
            g2 = random_group_element(rng, p)
            assert ((chi(g1, p) * chi(g2, p)) - chi(g2 @ g1, p)).is_zero()

    def test_sigma_is_the_determinant_parity(self):
        p = 2
        assert sigma(gamma_level(1, p), p) == -1
        assert sigma(gamma_level(2, p), p) == 1
        assert sigma(Mat2.identity(), p) == 1

    def test_epsilon_is_the_unit_part_of_the_determinant(self):
        p = 2
        assert str(epsilon(Mat2(3, 0, 0, 3), p)) == "9"
        assert str(epsilon(gamma_level(1, p), p)) == "1"

    def test_dual_zero_shape(self):
        z = dual_zero(2, 2)
        assert len(z) == 3
        assert all(x == 0 or (hasattr(x, "is_zero") and x.is_zero()) for x in z)
