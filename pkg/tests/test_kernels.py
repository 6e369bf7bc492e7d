import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, optimize

from binomix.kernels import (build_epanechnikov, build_legendre_kernel,
                             eval_kernel, kernel_moment)


def quad_moment(kernel, j):
    """Independent quadrature oracle for the j-th moment."""
    val, _ = integrate.quad(lambda u: u**j * eval_kernel(kernel, u),
                            -1.0, 1.0, epsabs=1e-13, limit=200)
    return val


class TestEpanechnikov:
    def test_center_value(self, epanechnikov):
        assert eval_kernel(epanechnikov, 0.0) == 0.75

    def test_outside_support(self, epanechnikov):
        assert eval_kernel(epanechnikov, 2.0) == 0.0
        assert eval_kernel(epanechnikov, -1.0001) == 0.0

    def test_moments(self, epanechnikov):
        assert abs(kernel_moment(epanechnikov, 0) - 1.0) < 1e-10
        assert abs(kernel_moment(epanechnikov, 1)) < 1e-10
        assert abs(kernel_moment(epanechnikov, 2) - 0.2) < 1e-10

    def test_closed_support_endpoint(self, epanechnikov):
        # 1(|v| <= 1): the endpoint evaluates through the polynomial
        assert eval_kernel(epanechnikov, 1.0) == 0.0
        assert eval_kernel(epanechnikov, -1.0) == 0.0


class TestLegendre:
    @pytest.mark.parametrize("order", [2, 4, 6, 8])
    def test_moment_conditions(self, legendre_kernels, order):
        k = legendre_kernels[order]
        assert abs(kernel_moment(k, 0) - 1.0) < 1e-8
        for j in range(1, order):
            assert abs(kernel_moment(k, j)) < 1e-8

    @pytest.mark.parametrize("order", [4])
    def test_moments_against_quadrature_oracle(self, legendre_kernels, order):
        k = legendre_kernels[order]
        assert abs(quad_moment(k, 0) - 1.0) < 1e-8
        assert abs(quad_moment(k, 2)) < 1e-8
        assert abs(quad_moment(k, 3)) < 1e-8

    def test_order2_is_quadratic_projection(self, legendre_kernels):
        # K(u) = 9/8 - 15/8 u^2 on [-1, 1]
        k = legendre_kernels[2]
        np.testing.assert_allclose(k.coefficients, [9 / 8, 0.0, -15 / 8],
                                   atol=1e-12)
        assert abs(kernel_moment(k, 0) - 1.0) < 1e-8

    def test_eval_matches_term_by_term_sum(self, legendre_kernels):
        # independent evaluation through the orthonormalized basis
        from numpy.polynomial import legendre as npleg
        k = legendre_kernels[4]
        v = 0.5
        total = 0.0
        for m in range(0, 5):
            e = np.zeros(m + 1)
            e[m] = 1.0
            phi0 = np.sqrt((2 * m + 1) / 2) * npleg.legval(0.0, e)
            phiv = np.sqrt((2 * m + 1) / 2) * npleg.legval(v, e)
            total += phi0 * phiv
        assert abs(eval_kernel(k, v) - total) < 1e-12

    @pytest.mark.parametrize("order", [1, 3, 5, 10])
    def test_rejects_unsupported_orders(self, order):
        with pytest.raises(ValueError):
            build_legendre_kernel(order)

    def test_absolute_moment_finite(self, legendre_kernels):
        k = legendre_kernels[4]
        b = kernel_moment(k, absolute=True, s=4.0)
        assert np.isfinite(b) and b > 0
        # oracle: split at the sign changes of K located by a scan plus
        # bisection, independently of the module's root finding, then one
        # quad per piece (quad silently skips kink slivers off the cuts)
        grid = np.linspace(-1, 1, 100_001)
        vals = eval_kernel(k, grid)
        flips = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
        roots = [optimize.brentq(lambda u: eval_kernel(k, u),
                                 grid[i], grid[i + 1], xtol=1e-15)
                 for i in flips]
        cuts = [-1.0] + roots + [1.0]
        val = sum(
            integrate.quad(lambda u: abs(u)**4 * abs(eval_kernel(k, u)),
                           lo, hi, epsabs=1e-13, limit=200)[0]
            for lo, hi in zip(cuts[:-1], cuts[1:]))
        assert abs(b - val) < 1e-10


class TestBounds:
    @pytest.mark.parametrize("order", [2, 4, 6, 8])
    def test_k_max_dominates_grid(self, legendre_kernels, order):
        k = legendre_kernels[order]
        grid = np.linspace(-1, 1, 10_001)
        assert np.all(np.abs(eval_kernel(k, grid)) <= k.bounds.k_max)

    def test_k_max_dominates_epanechnikov(self, epanechnikov):
        grid = np.linspace(-1, 1, 10_001)
        assert np.all(np.abs(eval_kernel(epanechnikov, grid))
                      <= epanechnikov.bounds.k_max)

    @pytest.mark.parametrize("order", [2, 4, 6, 8])
    def test_lipschitz_on_random_pairs(self, legendre_kernels, order):
        k = legendre_kernels[order]
        rng = np.random.default_rng(order)
        v = rng.uniform(-1, 1, size=(1000, 2))
        gap = np.abs(eval_kernel(k, v[:, 0]) - eval_kernel(k, v[:, 1]))
        assert np.all(gap <= k.bounds.m * np.abs(v[:, 0] - v[:, 1]))

    def test_beta_is_one_for_polynomials(self, epanechnikov, legendre_kernels):
        assert epanechnikov.bounds.beta == 1.0
        assert legendre_kernels[6].bounds.beta == 1.0


@settings(max_examples=200, deadline=None)
@given(v=st.floats(min_value=1.0000001, max_value=1e6))
def test_zero_outside_support_property(v):
    k = build_epanechnikov()
    assert eval_kernel(k, v) == 0.0
    assert eval_kernel(k, -v) == 0.0


@settings(max_examples=100, deadline=None)
@given(v=st.floats(min_value=-1, max_value=1),
       w=st.floats(min_value=-1, max_value=1))
def test_lipschitz_property(v, w):
    k = build_legendre_kernel(6)
    gap = abs(eval_kernel(k, v) - eval_kernel(k, w))
    assert gap <= k.bounds.m * abs(v - w) + 1e-15
