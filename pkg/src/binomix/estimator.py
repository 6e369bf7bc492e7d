"""KDE of the mixing density from empirical proportions, with inference.

The estimator at a point u is the average of K_h(X_i / t_i) where
K_h(x) = K((x - u) / h) / h.  Standard errors come from the sum of squared
deviations of the per-record kernel values, and confidence intervals are
normal intervals around the (undersmoothed) estimate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtri

from . import backends
from .kernels import KernelSpec


class DataError(ValueError):
    """Invalid observation data (bad counts, empty sample, bad groups)."""


@dataclass(frozen=True)
class BinomialSample:
    """Observed (successes, trials[, group]) records.

    successes and trials are integer arrays with 0 <= x_i <= t_i and
    t_i >= 1; groups, when present, is a 0/1 array of the same length.
    """

    successes: np.ndarray
    trials: np.ndarray
    groups: np.ndarray | None = None

    def __post_init__(self):
        x = np.ascontiguousarray(np.asarray(self.successes, dtype=np.int64))
        t = np.ascontiguousarray(np.asarray(self.trials, dtype=np.int64))
        object.__setattr__(self, "successes", x)
        object.__setattr__(self, "trials", t)
        if x.ndim != 1 or t.shape != x.shape:
            raise DataError("successes and trials must be 1-d arrays of equal length")
        if x.size == 0:
            raise DataError("sample contains no records")
        if np.any(t < 1):
            raise DataError("every record needs at least one trial")
        if np.any(x < 0) or np.any(x > t):
            raise DataError("successes must satisfy 0 <= x <= trials")
        if self.groups is not None:
            a = np.ascontiguousarray(np.asarray(self.groups, dtype=np.int64))
            object.__setattr__(self, "groups", a)
            if a.shape != x.shape:
                raise DataError("group labels must match the number of records")
            if not np.all((a == 0) | (a == 1)):
                raise DataError("group labels must be 0 or 1")

    @classmethod
    def from_records(cls, records) -> "BinomialSample":
        """Build from an iterable of (x, t) or (x, t, group) tuples."""
        rows = list(records)
        if not rows:
            raise DataError("sample contains no records")
        if len(rows[0]) == 3:
            x, t, a = zip(*rows)
            return cls(np.array(x), np.array(t), np.array(a))
        x, t = zip(*rows)
        return cls(np.array(x), np.array(t))

    @property
    def n(self) -> int:
        return self.successes.size

    @property
    def proportions(self) -> np.ndarray:
        """Empirical proportions x_i / t_i."""
        return self.successes / self.trials


@dataclass(frozen=True)
class EstimateResult:
    """Point estimate with normal CI at one evaluation point."""

    u: float
    estimate: float
    se: float
    ci_lo: float
    ci_hi: float
    h: float
    alpha: float


def harmonic_mean(trials) -> float:
    """n / sum(1 / t_i); the trial summary governing the error bounds."""
    t = np.asarray(trials, dtype=np.float64)
    if t.size == 0:
        raise DataError("harmonic mean of an empty list")
    if np.any(t < 1):
        raise DataError("trials must be >= 1")
    return t.size / float(np.sum(1.0 / t))


def _check_point(u: float, h: float) -> None:
    if not 0.0 < u < 1.0:
        raise ValueError(f"evaluation point must lie in (0, 1), got {u}")
    if h <= 0.0:
        raise ValueError(f"bandwidth must be positive, got {h}")


def kde_at(sample: BinomialSample, kernel: KernelSpec, h: float, u: float,
           clamp_nonneg: bool = False) -> float:
    """KDE value (1/n) sum_i K((x_i/t_i - u)/h) / h at the point u.

    With ``clamp_nonneg`` a negative value (possible for higher-order
    kernels) is replaced by 0.
    """
    _check_point(u, h)
    pts = sample.proportions
    w = np.full(sample.n, 1.0 / sample.n)
    val = float(backends.weighted_sums(kernel.even_coefficients, pts, w,
                                       np.array([u]), h)[0])
    if clamp_nonneg and val < 0.0:
        return 0.0
    return val


def kde_grid(sample: BinomialSample, kernel: KernelSpec, h: float, grid,
             clamp_nonneg: bool = False) -> np.ndarray:
    """kde_at evaluated over a grid of points, order preserved."""
    us = np.ascontiguousarray(np.asarray(grid, dtype=np.float64))
    if us.size and (us.min() <= 0.0 or us.max() >= 1.0):
        raise ValueError("grid points must lie in (0, 1)")
    if h <= 0.0:
        raise ValueError(f"bandwidth must be positive, got {h}")
    pts = sample.proportions
    w = np.full(sample.n, 1.0 / sample.n)
    vals = backends.weighted_sums(kernel.even_coefficients, pts, w, us, h)
    if clamp_nonneg:
        vals = np.maximum(vals, 0.0)
    return vals


def kernel_values_at(sample: BinomialSample, kernel: KernelSpec, h: float,
                     u: float) -> np.ndarray:
    """Per-record kernel values K_h(x_i / t_i); building block for
    variance estimates and pairwise-difference statistics."""
    _check_point(u, h)
    return backends.kernel_values(kernel.even_coefficients,
                                  sample.proportions, u, h)


def variance_estimate(sample: BinomialSample, kernel: KernelSpec, h: float,
                      u: float) -> float:
    """Plug-in variance of the KDE at u.

    (1/(n(n-1))) sum_i {K_h(x_i/t_i) - p_hat_h(u)}^2.
    """
    if sample.n < 2:
        raise DataError("variance estimate needs at least two records")
    kv = kernel_values_at(sample, kernel, h, u)
    dev = kv - kv.mean()
    return float(np.sum(dev * dev)) / (sample.n * (sample.n - 1))


def confidence_interval(sample: BinomialSample, kernel: KernelSpec, h: float,
                        u: float, alpha: float = 0.05,
                        clamp_nonneg: bool = False) -> EstimateResult:
    """Normal CI: estimate +/- z_{1-alpha/2} * sqrt(variance_estimate).

    Valid asymptotically when h undersmooths (is below the bias-variance
    balancing rate) and the trial counts grow fast enough.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    est = kde_at(sample, kernel, h, u, clamp_nonneg=clamp_nonneg)
    se = float(np.sqrt(variance_estimate(sample, kernel, h, u)))
    z = float(ndtri(1.0 - alpha / 2.0))
    return EstimateResult(u=u, estimate=est, se=se,
                          ci_lo=est - z * se, ci_hi=est + z * se,
                          h=h, alpha=alpha)
