import numpy as np
import pytest

from binomix.estimator import BinomialSample
from binomix.kernels import build_epanechnikov, build_legendre_kernel
from binomix.simlab import dgp_heterogeneous


@pytest.fixture(scope="session")
def epanechnikov():
    return build_epanechnikov()


@pytest.fixture(scope="session")
def legendre_kernels():
    return {order: build_legendre_kernel(order) for order in (2, 4, 6, 8)}


def heterogeneous_sample(n=200, target=50, seed=0) -> BinomialSample:
    """One seeded dataset from the heterogeneous-trials DGP."""
    rng = np.random.default_rng(seed)
    t, _, x, _ = dgp_heterogeneous(n, target, rng)
    return BinomialSample(x, t)
