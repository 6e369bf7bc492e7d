"""Bandwidth selection by pairwise comparison tests with bootstrap thresholds.

Scanning a decreasing bandwidth grid, each bandwidth h is tested against
all smaller ones: the null "no smaller bandwidth significantly reduces the
bias at u" is rejected when the largest studentized difference of the KDE
values exceeds 1 + c_h(alpha), with c_h(alpha) a multiplier-bootstrap
quantile of the centered max statistic.  The selected bandwidth is the
smallest one whose null is not rejected.

Reproducibility contract: the multiplier draw b for the bandwidth at grid
index j uses ``numpy.random.SeedSequence(seed, spawn_key=(j, b))``, so
results are independent of how draws might be scheduled across workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .estimator import BinomialSample, DataError, kernel_values_at
from .kernels import KernelSpec


@dataclass(frozen=True)
class BandwidthGrid:
    """Strictly decreasing candidate bandwidths."""

    values: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) == 0:
            raise ValueError("bandwidth grid is empty")
        if any(v <= 0 for v in vals):
            raise ValueError("bandwidths must be positive")
        if any(a <= b for a, b in zip(vals, vals[1:])):
            raise ValueError("bandwidth grid must be strictly decreasing")

    @classmethod
    def geometric(cls, h_max: float, ratio: float = 0.9,
                  count: int = 10) -> "BandwidthGrid":
        if not 0 < ratio < 1:
            raise ValueError("ratio must lie in (0, 1)")
        return cls(tuple(h_max * ratio**k for k in range(count)))

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class LepskiConfig:
    """Test level, bootstrap size, RNG seed and evaluation point."""

    u: float
    alpha: float = 0.05
    bootstrap_reps: int = 1000
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")
        if self.bootstrap_reps < 1:
            raise ValueError("bootstrap_reps must be >= 1")


@dataclass(frozen=True)
class LepskiTraceEntry:
    h: float
    statistic: float
    critical: float
    rejected: bool
    trivial: bool  # smallest grid element: nothing smaller to compare to


@dataclass(frozen=True)
class LepskiResult:
    selected: float
    all_rejected: bool
    trace: tuple[LepskiTraceEntry, ...]
    first_rejection_index: int | None


def centered_differences(sample: BinomialSample, kernel: KernelSpec,
                         h: float, h_prime: float, u: float) -> np.ndarray:
    """Z_i = {K_h'(x_i/t_i) - K_h(x_i/t_i)} - {p_hat_h'(u) - p_hat_h(u)}."""
    d = kernel_values_at(sample, kernel, h_prime, u) \
        - kernel_values_at(sample, kernel, h, u)
    return d - d.mean()


def pairwise_variance(sample: BinomialSample, kernel: KernelSpec, h: float,
                      h_prime: float, u: float) -> float:
    """Variance estimate of p_hat_h'(u) - p_hat_h(u):
    (1/(n(n-1))) sum_i Z_i^2 with Z the centered kernel-value differences."""
    if h == h_prime:
        raise ValueError("pairwise variance needs two distinct bandwidths")
    if h <= 0 or h_prime <= 0:
        raise ValueError("bandwidths must be positive")
    if sample.n < 2:
        raise DataError("pairwise variance needs at least two records")
    z = centered_differences(sample, kernel, h, h_prime, u)
    return float(np.sum(z * z)) / (sample.n * (sample.n - 1))


def _multipliers(seed: int, h_index: int, reps: int, n: int) -> np.ndarray:
    """Standard-normal multiplier matrix, one independent substream per
    draw (rows), derived from (seed, h_index, draw)."""
    out = np.empty((reps, n))
    for b in range(reps):
        ss = np.random.SeedSequence(seed, spawn_key=(h_index, b))
        out[b] = np.random.Generator(np.random.PCG64(ss)).standard_normal(n)
    return out


def _empirical_quantile(draws: np.ndarray, level: float) -> float:
    """Smallest order statistic with at least `level` mass at or below it."""
    draws = np.sort(draws)
    idx = int(np.ceil(level * draws.size)) - 1
    return float(draws[min(max(idx, 0), draws.size - 1)])


def bootstrap_critical_value(sample: BinomialSample, kernel: KernelSpec,
                             h: float, grid: BandwidthGrid,
                             cfg: LepskiConfig) -> float:
    """(1 - alpha) multiplier-bootstrap quantile of the centered max
    statistic max_{h' < h} |sum_i e_i Z_i(h, h')| / (n sqrt(var_{h,h'})).

    Pairs with zero variance estimate are skipped (their statistic
    contributes 0).  Deterministic given cfg.seed; see the module
    docstring for the substream protocol.
    """
    if h not in grid.values:
        raise ValueError("h must be an element of the grid")
    j = grid.values.index(h)
    smaller = grid.values[j + 1:]
    if not smaller:
        raise ValueError("no smaller grid elements to compare against")
    n = sample.n
    z_rows = []
    scales = []
    for h_prime in smaller:
        z = centered_differences(sample, kernel, h, h_prime, cfg.u)
        var = float(np.sum(z * z)) / (n * (n - 1))
        if var > 0.0:
            z_rows.append(z)
            scales.append(n * np.sqrt(var))
    if not z_rows:
        return 0.0
    zmat = np.array(z_rows)          # (pairs, n)
    scale = np.array(scales)         # (pairs,)
    mult = _multipliers(cfg.seed, j, cfg.bootstrap_reps, n)
    stats = np.max(np.abs(mult @ zmat.T) / scale, axis=1)
    return _empirical_quantile(stats, 1.0 - cfg.alpha)


def lepski_select(sample: BinomialSample, kernel: KernelSpec,
                  grid: BandwidthGrid, cfg: LepskiConfig) -> LepskiResult:
    """Scan the grid from the largest bandwidth down, test each one
    against all smaller ones, and return the smallest non-rejected
    tested bandwidth.

    The smallest grid element admits no comparison (its test holds
    vacuously); it is recorded in the trace as trivial and returned only
    when every tested bandwidth was rejected, in which case the result
    carries ``all_rejected=True`` since the procedure's premise (some
    null holds) failed.  A singleton grid returns its only element.
    """
    if sample.n < 2:
        raise DataError("bandwidth selection needs at least two records")
    entries = []
    for j, h in enumerate(grid.values):
        smaller = grid.values[j + 1:]
        if not smaller:
            entries.append(LepskiTraceEntry(h=h, statistic=0.0, critical=0.0,
                                            rejected=False, trivial=True))
            continue
        p_h = float(np.mean(kernel_values_at(sample, kernel, h, cfg.u)))
        stat = 0.0
        for h_prime in smaller:
            var = pairwise_variance(sample, kernel, h, h_prime, cfg.u)
            if var == 0.0:
                continue
            p_hp = float(np.mean(kernel_values_at(sample, kernel, h_prime,
                                                  cfg.u)))
            stat = max(stat, abs(p_hp - p_h) / np.sqrt(var))
        critical = bootstrap_critical_value(sample, kernel, h, grid, cfg)
        entries.append(LepskiTraceEntry(h=h, statistic=stat, critical=critical,
                                        rejected=stat > 1.0 + critical,
                                        trivial=False))
    tested = [e for e in entries if not e.trivial]
    first_rejection = next((i for i, e in enumerate(entries) if e.rejected),
                           None)
    if not tested:  # singleton grid
        return LepskiResult(selected=grid.values[0], all_rejected=False,
                            trace=tuple(entries), first_rejection_index=None)
    accepted = [e.h for e in tested if not e.rejected]
    if not accepted:
        return LepskiResult(selected=grid.values[-1], all_rejected=True,
                            trace=tuple(entries),
                            first_rejection_index=first_rejection)
    return LepskiResult(selected=min(accepted), all_rejected=False,
                        trace=tuple(entries),
                        first_rejection_index=first_rejection)
