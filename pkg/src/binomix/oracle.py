"""Exact error computations and the error-bound formulas.

This module is the verification backbone of the package.  It computes,
for known mixing densities, the exact marginal pmf of the counts, the
exact Bernstein approximation error of any bounded f, the quasi-Riemann
sum error, and the exact expectation (hence exact bias) of the KDE.  Next
to these exact quantities it evaluates the closed-form upper bounds so
that dominance can be checked numerically.

Densities are either Beta(a, b) (integrals via Beta-function identities)
or piecewise polynomials on [0, 1] (integrals via regularized incomplete
Beta functions); both routes are exact up to special-function accuracy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import polynomial as nppoly
from scipy import integrate
from scipy.special import betainc, betaln, gammaln

from .estimator import harmonic_mean
from .kernels import KernelBounds, KernelSpec, eval_kernel, kernel_moment


@dataclass(frozen=True)
class SmoothnessParams:
    """Constants describing a density for the bound formulas.

    l      : Holder/Lipschitz constant of the density
    alpha  : Holder exponent in (0, 1]
    p_max  : sup of the density
    s      : smoothness index used for the h**s smoothing term
    """

    l: float
    alpha: float
    p_max: float
    s: float


@dataclass(frozen=True)
class DensitySpec:
    """A known mixing density on [0, 1] for oracles and simulations.

    kind "beta": Beta(a, b) with beta_params = (a, b).
    kind "piecewise": polynomial pieces (lo, hi, ascending coefficients);
    at a shared breakpoint the value of the left piece applies.
    """

    kind: str
    name: str
    smoothness: SmoothnessParams
    beta_params: tuple[float, float] | None = None
    pieces: tuple[tuple[float, float, tuple[float, ...]], ...] | None = None

    def pdf(self, q):
        q = np.asarray(q, dtype=np.float64)
        scalar = q.ndim == 0
        q = np.atleast_1d(q)
        out = np.zeros_like(q)
        inside = (q >= 0.0) & (q <= 1.0)
        if self.kind == "beta":
            a, b = self.beta_params
            qi = q[inside]
            with np.errstate(divide="ignore", invalid="ignore"):
                vals = qi ** (a - 1) * (1 - qi) ** (b - 1)
            out[inside] = vals / math.exp(betaln(a, b))
        else:
            uppers = np.array([hi for _, hi, _ in self.pieces])
            idx = np.searchsorted(uppers, q[inside], side="left")
            idx = np.minimum(idx, len(self.pieces) - 1)
            vals = np.empty(idx.shape)
            for k, (_, _, coeffs) in enumerate(self.pieces):
                sel = idx == k
                if np.any(sel):
                    vals[sel] = nppoly.polyval(q[inside][sel], coeffs)
            out[inside] = vals
        return float(out[0]) if scalar else out

    def pdf_derivative(self, q):
        """Derivative of the density within pieces (undefined at jumps)."""
        q = np.asarray(q, dtype=np.float64)
        scalar = q.ndim == 0
        q = np.atleast_1d(q)
        out = np.zeros_like(q)
        inside = (q >= 0.0) & (q <= 1.0)
        if self.kind == "beta":
            a, b = self.beta_params
            qi = q[inside]
            with np.errstate(divide="ignore", invalid="ignore"):
                vals = (a - 1) * qi ** (a - 2) * (1 - qi) ** (b - 1) \
                    - (b - 1) * qi ** (a - 1) * (1 - qi) ** (b - 2)
            out[inside] = vals / math.exp(betaln(a, b))
        else:
            uppers = np.array([hi for _, hi, _ in self.pieces])
            idx = np.searchsorted(uppers, q[inside], side="left")
            idx = np.minimum(idx, len(self.pieces) - 1)
            vals = np.empty(idx.shape)
            for k, (_, _, coeffs) in enumerate(self.pieces):
                sel = idx == k
                if np.any(sel):
                    vals[sel] = nppoly.polyval(q[inside][sel],
                                               nppoly.polyder(coeffs))
            out[inside] = vals
        return float(out[0]) if scalar else out

    def cdf(self, q):
        q = np.asarray(q, dtype=np.float64)
        scalar = q.ndim == 0
        q = np.atleast_1d(np.clip(q, 0.0, 1.0))
        if self.kind == "beta":
            a, b = self.beta_params
            out = betainc(a, b, q)
        else:
            out = np.zeros_like(q)
            for lo, hi, coeffs in self.pieces:
                anti = nppoly.polyint(coeffs)
                upper = np.clip(q, lo, hi)
                seg = nppoly.polyval(upper, anti) - nppoly.polyval(lo, anti)
                out += np.where(q > lo, seg, 0.0)
        return float(out[0]) if scalar else out

    @property
    def breakpoints(self) -> tuple[float, ...]:
        """Interior points where the density formula changes."""
        if self.kind == "beta":
            return ()
        return tuple(hi for _, hi, _ in self.pieces[:-1])


def beta_density(a: float, b: float,
                 smoothness: SmoothnessParams | None = None) -> DensitySpec:
    if smoothness is None:
        if (a, b) == (2.0, 2.0):
            # sup 6u(1-u) = 1.5; sup |6 - 12u| = 6; quadratic => s = 2
            smoothness = SmoothnessParams(l=6.0, alpha=1.0, p_max=1.5, s=2.0)
        else:
            smoothness = _grid_smoothness_raw(
                _beta_spec_unchecked(a, b), s=2.0)
    spec = DensitySpec(kind="beta", name=f"beta({a:g},{b:g})",
                       smoothness=smoothness, beta_params=(float(a), float(b)))
    _check_normalized(spec)
    return spec


def uniform_density() -> DensitySpec:
    spec = DensitySpec(
        kind="piecewise", name="uniform",
        smoothness=SmoothnessParams(l=0.0, alpha=1.0, p_max=1.0, s=2.0),
        pieces=((0.0, 1.0, (1.0,)),))
    _check_normalized(spec)
    return spec


# Normalizing constant of the four-piece non-smooth example density,
# computed exactly from the piecewise antiderivatives: 61/120 ~ 0.50833.
NONSMOOTH_NORMALIZER = 61.0 / 120.0

_NONSMOOTH_RAW = (
    (0.0, 0.25, (0.0, 2.0, 2.0)),      # 2u^2 + 2u
    (0.25, 0.5, (0.0, 1.0)),           # u
    (0.5, 0.75, (0.2, 2.0, -1.0)),     # -u^2 + 2u + 0.2
    (0.75, 1.0, (-1.0, 1.5)),          # 1.5u - 1
)


def nonsmooth_density() -> DensitySpec:
    """Piecewise density with jumps whose two-group difference is smooth.

    The pieces are divided by the normalizing constant 61/120.  Global
    Holder smoothness fails at the jumps; the attached constants use the
    within-piece Lipschitz maximum and s = 1, which is a documented
    treatment rather than a smoothness-class statement.
    """
    pieces = tuple(
        (lo, hi, tuple(c / NONSMOOTH_NORMALIZER for c in coeffs))
        for lo, hi, coeffs in _NONSMOOTH_RAW
    )
    # sup within pieces: density peaks at 0.75- (1.1375 / C); steepest
    # slope is 4u + 2 at u = 0.25 (3 / C).
    c = NONSMOOTH_NORMALIZER
    smoothness = SmoothnessParams(l=3.0 / c, alpha=1.0, p_max=1.1375 / c, s=1.0)
    spec = DensitySpec(kind="piecewise", name="nonsmooth",
                       smoothness=smoothness, pieces=pieces)
    _check_normalized(spec)
    return spec


def _beta_spec_unchecked(a: float, b: float) -> DensitySpec:
    return DensitySpec(kind="beta", name=f"beta({a:g},{b:g})",
                       smoothness=SmoothnessParams(0, 1, 1, 1),
                       beta_params=(float(a), float(b)))


def _check_normalized(spec: DensitySpec) -> None:
    cuts = sorted({0.0, 1.0} | {p for p in spec.breakpoints if 0.0 < p < 1.0})
    total = sum(integrate.quad(spec.pdf, lo, hi, epsabs=1e-12, limit=200)[0]
                for lo, hi in zip(cuts[:-1], cuts[1:]))
    if abs(total - 1.0) > 1e-8:
        raise ValueError(f"density {spec.name} integrates to {total}, not 1")


def grid_smoothness(density: DensitySpec, s: float | None = None,
                    factor: float = 1.001, npts: int = 20001) -> SmoothnessParams:
    """Constants from grid sups of the density and its within-piece slope,
    inflated by a small safety factor."""
    base = _grid_smoothness_raw(density, s=s, npts=npts)
    return SmoothnessParams(l=base.l * factor, alpha=base.alpha,
                            p_max=base.p_max * factor, s=base.s)


def _grid_smoothness_raw(density: DensitySpec, s: float | None = None,
                         npts: int = 20001) -> SmoothnessParams:
    qs = np.linspace(0.0, 1.0, npts)
    cuts = set(density.breakpoints)
    if cuts:
        # stay clear of jump points; slopes are per piece
        keep = np.ones(qs.shape, dtype=bool)
        for c in cuts:
            keep &= np.abs(qs - c) > 1e-9
        qs = qs[keep]
    p_max = float(np.max(density.pdf(qs)))
    l = float(np.max(np.abs(density.pdf_derivative(qs))))
    if s is None:
        s = density.smoothness.s
    return SmoothnessParams(l=l, alpha=1.0, p_max=p_max, s=float(s))


# ---------------------------------------------------------------------------
# exact quantities


@lru_cache(maxsize=256)
def exact_mixture_pmf(density: DensitySpec, t: int) -> np.ndarray:
    """Marginal pmf of the count X for trials t under the mixing density.

    m(x) = C(t, x) * integral of q**x (1-q)**(t-x) p(q) dq, x = 0..t.
    Beta densities use the Beta-function identity; piecewise-polynomial
    densities use regularized incomplete Beta differences per piece, with
    logs to stay stable at large t.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    x = np.arange(t + 1, dtype=np.float64)
    log_comb = gammaln(t + 1) - gammaln(x + 1) - gammaln(t - x + 1)
    if density.kind == "beta":
        a, b = density.beta_params
        log_m = log_comb + betaln(x + a, t - x + b) - betaln(a, b)
        m = np.exp(log_m)
    else:
        m = np.zeros(t + 1)
        for lo, hi, coeffs in density.pieces:
            for k, c in enumerate(coeffs):
                if c == 0.0:
                    continue
                aa = x + k + 1
                bb = t - x + 1
                weight = np.exp(log_comb + betaln(aa, bb))
                m += c * weight * (betainc(aa, bb, hi) - betainc(aa, bb, lo))
    total = m.sum()
    if abs(total - 1.0) > 1e-10:
        raise ArithmeticError(
            f"mixture pmf for {density.name}, t={t} sums to {total!r}")
    m.flags.writeable = False
    return m


def _integral_fp(f, density: DensitySpec, breakpoints=()) -> float:
    # one adaptive quad per subinterval: passing breakpoints to a single
    # QAGP call can silently miss the 1e-10 target
    cuts = sorted({0.0, 1.0} | {float(p) for p in
                   (*breakpoints, *density.breakpoints) if 0.0 < p < 1.0})

    def integrand(q):
        return float(f(q)) * float(density.pdf(q))

    total = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        val, _ = integrate.quad(integrand, lo, hi, epsabs=1e-12, limit=200)
        total += val
    return total


def bernstein_error_exact(f, density: DensitySpec, t: int,
                          breakpoints=()) -> float:
    """Exact p-weighted Bernstein approximation error of f at degree t.

    sum_x f(x/t) m(x) - integral of f p, where m is the exact count pmf.
    ``breakpoints`` (e.g. kernel support endpoints) are passed to the
    quadrature as subdivision nodes.
    """
    m = exact_mixture_pmf(density, t)
    xs = np.arange(t + 1) / t
    discrete = float(np.sum(np.asarray(f(xs), dtype=np.float64) * m))
    return discrete - _integral_fp(f, density, breakpoints)


def quasi_riemann_error(f, density: DensitySpec, t: int,
                        breakpoints=()) -> float:
    """|sum_x f(x/t) p(x/t) / t - integral of f p| for x = 0..t."""
    xs = np.arange(t + 1) / t
    riemann = float(np.sum(np.asarray(f(xs), dtype=np.float64)
                           * density.pdf(xs))) / t
    return abs(riemann - _integral_fp(f, density, breakpoints))


def kernel_hat(kernel: KernelSpec, h: float, u: float):
    """The function x -> K((x - u)/h) / h, with its support endpoints
    attached for quadrature subdivision."""

    def f(x):
        return eval_kernel(kernel, (np.asarray(x, dtype=np.float64) - u) / h) / h

    f.breakpoints = (u - h, u + h)
    return f


def exact_kde_expectation(density: DensitySpec, trials, kernel: KernelSpec,
                          h: float, u: float) -> float:
    """Exact E of the empirical-proportion KDE at u: the per-record kernel
    values averaged against the exact count pmf."""
    trials = np.asarray(trials, dtype=np.int64)
    f = kernel_hat(kernel, h, u)
    total = 0.0
    uniq, counts = np.unique(trials, return_counts=True)
    for t, c in zip(uniq, counts):
        m = exact_mixture_pmf(density, int(t))
        xs = np.arange(t + 1) / t
        total += c * float(np.sum(f(xs) * m))
    return total / trials.size


def exact_kde_bias(density: DensitySpec, trials, kernel: KernelSpec,
                   h: float, u: float) -> float:
    return exact_kde_expectation(density, trials, kernel, h, u) \
        - float(density.pdf(u))


# ---------------------------------------------------------------------------
# bound formulas


def bernstein_smear_factor(t: int, sp: SmoothnessParams) -> float:
    """Factor multiplying the discrete L1 norm of f in the Bernstein
    error bound: L (1/4 / (t+3))**(alpha/2) + L (1/(t+2))**alpha + p_max/t."""
    return (sp.l * (0.25 / (t + 3)) ** (sp.alpha / 2.0)
            + sp.l * (1.0 / (t + 2)) ** sp.alpha
            + sp.p_max / t)


def abs_grid_sum(f, t: int) -> float:
    """sum_x |f(x/t)| / (t+1), the discrete L1 norm entering the bounds."""
    xs = np.arange(t + 1) / t
    return float(np.sum(np.abs(np.asarray(f(xs), dtype=np.float64)))) / (t + 1)


def quasi_riemann_bound(t: int, h: float, sp: SmoothnessParams,
                        kb: KernelBounds) -> float:
    """Closed-form bound on the quasi-Riemann error for f = K_h:

    K_max p_max/(h t) + (2 + 1/(h t)) {L K_max (1/t)**alpha
                                       + 2 M p_max (1/(h t))**beta}.
    """
    ht = h * t
    return (kb.k_max * sp.p_max / ht
            + (2.0 + 1.0 / ht) * (sp.l * kb.k_max * (1.0 / t) ** sp.alpha
                                  + 2.0 * kb.m * sp.p_max * (1.0 / ht) ** kb.beta))


def mean_bernstein_bound(f, density: DensitySpec, trials,
                         smoothness: SmoothnessParams | None = None,
                         breakpoints=(), riemann: str = "exact",
                         h: float | None = None,
                         kernel_bounds: KernelBounds | None = None) -> float:
    """Bound on |average Bernstein error of f over the trial list|.

    (1/n) sum_i { g(t_i, alpha) * sum_x |f(x/t_i)|/(t_i+1) + R_i } where
    R_i is the exact quasi-Riemann error (riemann="exact", the sharp
    default) or its closed-form bound (riemann="analytic", which needs h
    and the kernel bound constants).
    """
    sp = smoothness if smoothness is not None else density.smoothness
    trials = np.asarray(trials, dtype=np.int64)
    total = 0.0
    for t in trials:
        t = int(t)
        if riemann == "exact":
            r = quasi_riemann_error(f, density, t, breakpoints)
        elif riemann == "analytic":
            if h is None or kernel_bounds is None:
                raise ValueError("analytic riemann bound needs h and kernel bounds")
            r = quasi_riemann_bound(t, h, sp, kernel_bounds)
        else:
            raise ValueError(f"unknown riemann mode {riemann!r}")
        total += bernstein_smear_factor(t, sp) * abs_grid_sum(f, t) + r
    return total / trials.size


def strict_floor(s: float) -> int:
    """Largest integer strictly smaller than s (so strict_floor(2.0) = 1)."""
    return int(math.ceil(s)) - 1


def kde_bias_bound(density: DensitySpec, kernel: KernelSpec, trials,
                   h: float, u: float,
                   smoothness: SmoothnessParams | None = None) -> float:
    """Bound on |E p_hat_h(u) - p(u)| for the empirical-proportion KDE:

    (L B / floor(s)!) h**s
      + (1/n) sum_i { g(t_i, alpha) sum_x |K_h(x/t_i)|/(t_i+1)
                      + r(h, t_i, alpha, beta) }.
    """
    sp = smoothness if smoothness is not None else density.smoothness
    b = kernel_moment(kernel, absolute=True, s=sp.s)
    smoothing = sp.l * b / math.factorial(strict_floor(sp.s)) * h ** sp.s
    f = kernel_hat(kernel, h, u)
    trials = np.asarray(trials, dtype=np.int64)
    extra = 0.0
    for t in trials:
        t = int(t)
        extra += (bernstein_smear_factor(t, sp) * abs_grid_sum(f, t)
                  + quasi_riemann_bound(t, h, sp, kernel.bounds))
    return smoothing + extra / trials.size


def kde_variance_bound(p_max: float, kb: KernelBounds, n: int, h: float,
                       trials) -> float:
    """Bound on var p_hat_h(u): K_max^2 p_max (2 + 1/(h t_tilde)) / (n h)."""
    t_tilde = harmonic_mean(trials)
    return kb.k_max ** 2 * p_max / (n * h) * (2.0 + 1.0 / (h * t_tilde))


def rate_profile(n: int, trials, h: float, sp: SmoothnessParams) -> dict:
    """The four error-rate ingredients plus the trial-size thresholds for
    matching the i.i.d. minimax rate at the balancing bandwidth."""
    t_tilde = harmonic_mean(trials)
    return {
        "smoothing": h ** sp.s,
        "hetero": t_tilde ** -0.5,
        "riemann": 1.0 / (h * t_tilde),
        "variance": 1.0 / (n * h),
        "trial_threshold_low_smooth": n ** ((1 + 1 / sp.s) / (2 + 1 / sp.s)),
        "trial_threshold_high_smooth": n ** (2 / (2 + 1 / sp.s)),
    }


def diff_kde_bounds(kernel: KernelSpec, trials, h: float, u: float, n: int,
                    eps: float, tau_smoothness: SmoothnessParams) -> dict:
    """Bias and variance bounds for the two-group difference estimator.

    Same shape as the single-density bounds with the difference constants
    (L_tau, tau_max, gamma) substituted, and the variance inflated by the
    group-balance factor 1/eps**2.
    """
    sp = tau_smoothness
    b = kernel_moment(kernel, absolute=True, s=sp.s)
    smoothing = sp.l * b / math.factorial(strict_floor(sp.s)) * h ** sp.s
    f = kernel_hat(kernel, h, u)
    trials = np.asarray(trials, dtype=np.int64)
    extra = 0.0
    for t in trials:
        t = int(t)
        extra += (bernstein_smear_factor(t, sp) * abs_grid_sum(f, t)
                  + quasi_riemann_bound(t, h, sp, kernel.bounds))
    t_tilde = harmonic_mean(trials)
    variance = (kernel.bounds.k_max ** 2 * sp.p_max
                * (2.0 + 1.0 / (h * t_tilde)) / (n * h * eps ** 2))
    return {"bias_bound": smoothing + extra / trials.size,
            "variance_bound": variance}
