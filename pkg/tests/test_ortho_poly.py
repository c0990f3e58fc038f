"""Basis, Gauss-rule, fractional-integral, and history-kernel checks."""

from math import gamma, sqrt

import numpy as np
import pytest

from fhbvm import InvalidParameterError, eval_basis, frac_int_basis, gauss_rule, make_basis, tail_kernels
from fhbvm.ortho_poly import (
    LEFT_SINGULAR,
    RIGHT_SINGULAR,
    SMOOTH,
    eval_basis_many,
    frac_int_basis_many,
    tail_kernels_many,
)

from oracles import frac_int_quad, gram_schmidt_basis, tail_kernel_quad, weight_moment


class TestBasis:
    def test_p0_is_one_everywhere(self):
        basis = make_basis(0.37, 8)
        for c in (0.0, 0.2, 1.0, 1.7):
            assert eval_basis(basis, c)[0] == 1.0

    def test_alpha_one_is_shifted_legendre(self):
        basis = make_basis(1.0, 5)
        # orthonormal degree-1 shifted Legendre vanishes at the midpoint
        assert abs(eval_basis(basis, 0.5)[1]) < 1e-15
        # and equals sqrt(3)*(2c-1)
        assert eval_basis(basis, 0.75)[1] == pytest.approx(sqrt(3.0) * 0.5, rel=1e-14)

    def test_orthonormality_by_quadrature(self):
        for alpha in (0.2, 0.5, 0.99):
            s_max = 22
            rule = gauss_rule(alpha, s_max + 3)
            table = eval_basis_many(make_basis(alpha, s_max), rule.nodes)
            gram = (table * rule.weights[:, None]).T @ table
            assert np.max(np.abs(gram - np.eye(s_max))) < 1e-12

    @pytest.mark.parametrize("alpha", [0.2, 0.4, 0.8])
    def test_matches_gram_schmidt_oracle(self, alpha):
        pts = np.array([0.05, 0.3, 0.77, 1.0])
        basis = make_basis(alpha, 22)
        got = eval_basis_many(basis, pts)
        want = gram_schmidt_basis(alpha, 22, pts)
        scale = np.max(np.abs(want), axis=0)
        assert np.max(np.abs(got - want) / scale[None, :]) < 1e-10

    def test_gram_schmidt_oracle_at_single_point(self):
        got = eval_basis(make_basis(0.5, 22), 0.3)
        want = gram_schmidt_basis(0.5, 22, [0.3])[0]
        assert np.max(np.abs(got - want) / np.maximum(np.abs(want), 1.0)) < 1e-10

    def test_invalid_arguments(self):
        with pytest.raises(InvalidParameterError):
            make_basis(0.0, 5)
        with pytest.raises(InvalidParameterError):
            make_basis(-1.0, 5)
        with pytest.raises(InvalidParameterError):
            make_basis(0.5, 0)
        with pytest.raises(InvalidParameterError):
            eval_basis(make_basis(0.5, 3), np.nan)


class TestGaussRule:
    def test_legendre_midpoint(self):
        rule = gauss_rule(1.0, 1, RIGHT_SINGULAR)
        assert rule.nodes[0] == pytest.approx(0.5, abs=1e-15)
        assert rule.weights[0] == pytest.approx(1.0, abs=1e-15)

    def test_one_node_right_singular(self):
        rule = gauss_rule(0.5, 1, RIGHT_SINGULAR)
        assert rule.nodes[0] == pytest.approx(2.0 / 3.0, rel=1e-14)
        assert rule.weights[0] == pytest.approx(1.0, abs=1e-14)

    def test_one_node_left_singular(self):
        rule = gauss_rule(0.5, 1, LEFT_SINGULAR)
        assert rule.nodes[0] == pytest.approx(1.0 / 3.0, rel=1e-14)
        assert rule.weights[0] == pytest.approx(2.0, rel=1e-14)

    @pytest.mark.parametrize("alpha", [0.2, 0.5, 0.99])
    @pytest.mark.parametrize("n", [1, 4, 11, 22])
    def test_exactness_right_singular(self, alpha, n):
        rule = gauss_rule(alpha, n, RIGHT_SINGULAR)
        assert abs(np.sum(rule.weights) - 1.0) < 1e-13
        for d in range(2 * n):
            mom = weight_moment(alpha, d)
            assert abs(rule.weights @ rule.nodes**d - mom) <= 1e-12 * abs(mom)

    def test_exactness_left_singular(self):
        alpha, n = 0.3, 9
        rule = gauss_rule(alpha, n, LEFT_SINGULAR)
        for d in range(2 * n):
            mom = 1.0 / (alpha + d)  # int_0^1 c^(alpha-1+d) dc
            assert abs(rule.weights @ rule.nodes**d - mom) <= 1e-12 * abs(mom)

    def test_exactness_smooth(self):
        rule = gauss_rule(1.0, 6, SMOOTH)
        for d in range(12):
            assert abs(rule.weights @ rule.nodes**d - 1.0 / (d + 1)) < 1e-13

    def test_nodes_inside_and_increasing(self):
        rule = gauss_rule(0.2, 30)
        assert np.all(rule.nodes > 0) and np.all(rule.nodes < 1)
        assert np.all(np.diff(rule.nodes) > 0)


class TestFracInt:
    def test_zero_at_origin(self):
        basis = make_basis(0.4, 10)
        assert np.all(frac_int_basis(basis, 0.0) == 0.0)

    @pytest.mark.parametrize("alpha", [0.2, 0.5, 0.8, 0.99])
    def test_endpoint_identity(self, alpha):
        basis = make_basis(alpha, 22)
        got = frac_int_basis(basis, 1.0)
        want = np.zeros(22)
        want[0] = 1.0 / gamma(alpha + 1.0)
        assert np.max(np.abs(got - want)) < 1e-13

    def test_degree_zero_closed_form(self):
        alpha = 0.6
        basis = make_basis(alpha, 8)
        for c in (0.1, 0.5, 0.9, 1.0):
            assert frac_int_basis(basis, c)[0] == pytest.approx(
                c**alpha / gamma(alpha + 1.0), rel=1e-14
            )

    def test_against_adaptive_quadrature(self):
        alpha = 0.35
        basis = make_basis(alpha, 12)
        ev = lambda tau: eval_basis(basis, tau)
        got = frac_int_basis_many(basis, np.array([0.25, 0.8]))
        for r, c in enumerate((0.25, 0.8)):
            for j in (0, 3, 11):
                assert got[r, j] == pytest.approx(
                    frac_int_quad(ev, alpha, j, c), rel=1e-10, abs=1e-12
                )

    def test_domain_error(self):
        basis = make_basis(0.5, 4)
        with pytest.raises(InvalidParameterError):
            frac_int_basis(basis, 1.5)


class TestTailKernels:
    def test_endpoint_values(self):
        basis = make_basis(0.7, 9)
        got = tail_kernels(basis, 1.0)
        want = np.zeros(9)
        want[0] = 1.0 / gamma(1.7)
        assert np.max(np.abs(got - want)) == 0.0

    def test_junction_with_frac_int(self):
        for alpha in (0.2, 0.5, 0.99):
            basis = make_basis(alpha, 22)
            assert np.max(
                np.abs(tail_kernels(basis, 1.0) - frac_int_basis(basis, 1.0))
            ) < 1e-13

    def test_degree_zero_closed_form(self):
        alpha = 0.5
        basis = make_basis(alpha, 6)
        for x in (1.0 + 1e-8, 1.3, 2.0, 7.5, 1e6):
            want = (x**alpha - (x - 1.0) ** alpha) / gamma(alpha + 1.0)
            assert tail_kernels(basis, x)[0] == pytest.approx(want, rel=1e-13)
        assert tail_kernels(basis, 2.0)[0] == pytest.approx(
            (sqrt(2.0) - 1.0) / gamma(1.5), rel=1e-14
        )

    def test_against_adaptive_quadrature(self):
        alpha, s_max = 0.6, 22
        basis = make_basis(alpha, s_max)
        ev = lambda tau: eval_basis(basis, tau)
        for x in (1.001, 1.5, 3.0, 50.0):
            got = tail_kernels(basis, x)
            want = np.array([tail_kernel_quad(ev, alpha, j, x) for j in range(s_max)])
            assert np.max(np.abs(got - want)) < 1e-12 * np.max(np.abs(want))

    @pytest.mark.parametrize("alpha", [0.2, 0.5, 0.99])
    def test_regime_consistency_at_switch(self, alpha):
        basis = make_basis(alpha, 22)
        below = tail_kernels(basis, 2.0 - 1e-9)
        above = tail_kernels(basis, 2.0 + 1e-9)
        assert np.max(np.abs(below - above)) < 1e-10 * np.max(np.abs(below))

    def test_domain_error(self):
        basis = make_basis(0.5, 4)
        with pytest.raises(InvalidParameterError):
            tail_kernels(basis, 0.999)

    def test_vectorized_matches_scalar(self):
        basis = make_basis(0.3, 7)
        xs = np.array([1.0, 1.2, 1.9999, 2.0, 14.0])
        table = tail_kernels_many(basis, xs)
        for r, x in enumerate(xs):
            assert np.array_equal(table[r], tail_kernels(basis, x))
