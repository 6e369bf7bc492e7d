import numpy as np
import pytest

from binomix import backends
from binomix.kernels import build_epanechnikov, build_legendre_kernel


def brute_weighted_sums(c2, pts, w, us, h):
    out = np.zeros(len(us))
    for k, u in enumerate(us):
        acc = 0.0
        for p, wi in zip(pts, w):
            v = (p - u) / h
            if abs(v) <= 1.0:
                acc += wi * sum(c * v ** (2 * j) for j, c in enumerate(c2))
        out[k] = acc / h
    return out


@pytest.fixture(scope="module")
def case():
    rng = np.random.default_rng(42)
    pts = rng.uniform(0, 1, 300)
    w = rng.normal(size=300)
    us = np.linspace(0.05, 0.95, 40)
    return pts, w, us


@pytest.mark.parametrize("order", [2, 8])
def test_weighted_sums_matches_bruteforce(case, order):
    pts, w, us = case
    c2 = build_legendre_kernel(order).even_coefficients
    expected = brute_weighted_sums(c2, pts, w, us, 0.17)
    got = backends.weighted_sums(c2, pts, w, us, 0.17)
    np.testing.assert_allclose(got, expected, rtol=0, atol=1e-12)


def test_backends_agree(case):
    pts, w, us = case
    c2 = build_epanechnikov().even_coefficients
    py = backends.get_backend("python")
    results = [py.weighted_sums(c2, pts, w, us, 0.2),
               py.kernel_values(c2, pts, 0.5, 0.2),
               py.power_sums(pts, w, us, 0.2, 5)]
    try:
        cc = backends.get_backend("c")
    except ValueError:
        pytest.skip("compiled backend not built")
    fast = [cc.weighted_sums(c2, pts, w, us, 0.2),
            cc.kernel_values(c2, pts, 0.5, 0.2),
            cc.power_sums(pts, w, us, 0.2, 5)]
    for a, b in zip(results, fast):
        np.testing.assert_allclose(a, b, rtol=0, atol=1e-12)


def test_power_sums_reconstruct_weighted_sums(case):
    pts, w, us = case
    k = build_legendre_kernel(6)
    c2 = k.even_coefficients
    m = backends.power_sums(pts, w, us, 0.25, c2.size)
    direct = backends.weighted_sums(c2, pts, w, us, 0.25)
    np.testing.assert_allclose(c2 @ m, direct, rtol=1e-11, atol=1e-12)


def test_kernel_values_support(case):
    pts, w, us = case
    c2 = build_epanechnikov().even_coefficients
    vals = backends.kernel_values(c2, pts, 0.5, 0.05)
    outside = np.abs(pts - 0.5) > 0.05
    assert np.all(vals[outside] == 0.0)


def test_active_backend_reports_a_name():
    assert backends.active_backend() in ("c", "python")
