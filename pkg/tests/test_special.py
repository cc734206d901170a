"""Tests for Jacobi polynomial evaluation and the theta sums."""

import math

import mpmath
import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from hopfheat.special import (
    JacobiIndex,
    jacobi_eval,
    jacobi_sup_bound,
    theta_sum_direct,
    theta_sum_dual,
)

X = sp.symbols("x")


def rodrigues_exact(k: int, n: int, x0):
    """P_k^(0,n)(x0) from the Rodrigues derivative form in exact rationals."""
    base = sp.Poly((1 + X) ** n * (1 - X ** 2) ** k, X)
    d = base
    for _ in range(k):
        d = d.diff(X)
    c = sp.Rational((-1) ** k, 2 ** k * math.factorial(k))
    return c * d.eval(x0) / (1 + x0) ** n


def chebyshev_nodes(m: int):
    return [math.cos(math.pi * (2 * i + 1) / (2 * m)) for i in range(m)]


def theta_direct_mp(t, d, kmax=50, dps=50):
    """Extended-precision direct image sum, the reference for both forms."""
    with mpmath.workdps(dps):
        tt, dd = mpmath.mpf(t), mpmath.mpf(d)
        s = mpmath.mpf(0)
        for k in range(-kmax, kmax + 1):
            a = dd + 2 * k * mpmath.pi
            s += a * mpmath.exp(-a * a / (4 * tt))
        return float(s)


class TestJacobiEval:
    def test_degree_zero_is_one(self):
        assert jacobi_eval(JacobiIndex(0, 5), 0.3) == 1.0

    def test_legendre_at_one(self):
        assert jacobi_eval(JacobiIndex(3, 0), 1.0) == pytest.approx(1.0, abs=1e-15)

    def test_endpoint_normalization(self):
        # P_k^(0,n)(1) = 1 for all orders
        for k in (0, 1, 2, 5, 20, 50, 100, 200):
            for n in (0, 1, 3, 10, 25, 50):
                assert jacobi_eval(JacobiIndex(k, n), 1.0) == pytest.approx(1.0, rel=1e-11)

    def test_rodrigues_oracle_spot(self):
        for k, n in [(2, 1), (5, 3), (10, 7), (30, 10)]:
            for x0 in chebyshev_nodes(5):
                exact = float(rodrigues_exact(k, n, sp.Rational(x0)))
                got = jacobi_eval(JacobiIndex(k, n), x0)
                assert abs(got - exact) <= 1e-11 * max(1.0, abs(exact))

    def test_scipy_cross_check_large_degree(self):
        from scipy.special import eval_jacobi

        rng = np.random.default_rng(0)
        for _ in range(50):
            k = int(rng.integers(0, 201))
            n = int(rng.integers(0, 101))
            x0 = float(rng.uniform(-1, 1))
            ref = float(eval_jacobi(k, 0, n, x0))
            got = jacobi_eval(JacobiIndex(k, n), x0)
            assert abs(got - ref) <= 1e-10 * max(1.0, abs(ref))

    def test_array_input(self):
        xs = np.linspace(-1, 1, 11)
        vals = jacobi_eval(JacobiIndex(4, 2), xs)
        assert vals.shape == xs.shape
        for x0, v in zip(xs, vals):
            assert v == pytest.approx(jacobi_eval(JacobiIndex(4, 2), float(x0)), rel=1e-14)

    def test_domain_error(self):
        with pytest.raises(ValueError):
            jacobi_eval(JacobiIndex(2, 1), 1.001)

    def test_bad_index(self):
        with pytest.raises(ValueError):
            JacobiIndex(-1, 0)


class TestSupBound:
    def test_constant(self):
        assert jacobi_sup_bound(JacobiIndex(0, 0)) == 1.0

    def test_at_least_one(self):
        assert jacobi_sup_bound(JacobiIndex(10, 0)) >= 1.0

    def test_grid_scan(self):
        xs = np.linspace(-1, 1, 10000)
        for k, n in [(5, 2), (10, 4), (30, 10), (7, 0)]:
            dense_max = float(np.max(np.abs(jacobi_eval(JacobiIndex(k, n), xs))))
            assert jacobi_sup_bound(JacobiIndex(k, n)) >= dense_max

    @given(st.integers(0, 50), st.integers(0, 20), st.floats(-1.0, 1.0))
    @settings(max_examples=200, deadline=None)
    def test_bound_property(self, k, n, x0):
        assert abs(jacobi_eval(JacobiIndex(k, n), x0)) <= jacobi_sup_bound(
            JacobiIndex(k, n)
        ) * (1 + 1e-10)


class TestThetaSums:
    def test_direct_at_zero_small(self):
        # the k=0 term vanishes at d=0 and the images nearly cancel
        val = theta_sum_direct(0.25, 0.0)
        ref = theta_direct_mp(0.25, 0.0)
        assert abs(val - ref) <= 1e-15

    def test_direct_small_t_oracle(self):
        val = theta_sum_direct(0.01, 1.0)
        ref = theta_direct_mp(0.01, 1.0)
        assert val == pytest.approx(ref, rel=1e-13)
        assert val == pytest.approx(1.0 * math.exp(-25.0), rel=1e-10)

    def test_direct_matches_dual_large_t(self):
        assert theta_sum_direct(2.0, 0.5) == pytest.approx(theta_sum_dual(2.0, 0.5), abs=1e-14)

    def test_dual_oracle_points(self):
        for t, d in [(5.0, 0.3), (1.0, 0.0), (0.5, 3.0)]:
            ref = theta_direct_mp(t, d, kmax=100)
            assert abs(theta_sum_dual(t, d) - ref) <= 1e-12 * (1 + abs(ref))

    def test_agreement_grid(self):
        for t in (0.05, 0.1, 0.5, 1.0, 5.0):
            for d in np.arange(0.0, 3.15, 0.1):
                a = theta_sum_direct(t, float(d))
                b = theta_sum_dual(t, float(d))
                assert abs(a - b) <= 1e-10 * (1 + abs(a))

    @given(st.floats(0.05, 5.0), st.floats(0.0, 3.1))
    @settings(max_examples=150, deadline=None)
    def test_agreement_property(self, t, d):
        a = theta_sum_direct(t, d)
        b = theta_sum_dual(t, d)
        assert abs(a - b) <= 1e-10 * (1 + abs(a))

    def test_bad_t(self):
        with pytest.raises(ValueError):
            theta_sum_direct(0.0, 0.5)
        with pytest.raises(ValueError):
            theta_sum_dual(-1.0, 0.5)
