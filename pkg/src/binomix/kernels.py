"""Compactly supported polynomial kernels, including higher-order ones.

Every kernel here is a polynomial on [-1, 1] and exactly zero outside
(closed support: the endpoints evaluate through the polynomial).  Bound
constants needed by the error-bound calculators (sup of |K|, Lipschitz
constant of K, absolute moment) are computed at build time and stored on
the spec.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import legendre as npleg
from numpy.polynomial import polynomial as nppoly
from scipy import integrate

SUPPORTED_LEGENDRE_ORDERS = (2, 4, 6, 8)

# Stored sups are nudged up by one part in 1e12 so that they remain true
# upper bounds under floating-point evaluation error.
_SUP_NUDGE = 1.0 + 1e-12


@dataclass(frozen=True)
class KernelBounds:
    """Constants entering the error bounds.

    k_max  : sup of |K| on [-1, 1]
    m      : Lipschitz constant of K on [-1, 1] (sup of |K'|)
    beta   : Holder exponent of K; 1.0 for polynomial kernels
    b      : integral of |u|**s * |K(u)| over [-1, 1]
    s      : the exponent at which ``b`` was computed
    """

    k_max: float
    m: float
    beta: float
    b: float
    s: float


@dataclass(frozen=True)
class KernelSpec:
    """A kernel with its polynomial coefficients and bound constants.

    ``coefficients`` are ascending powers of v for K on [-1, 1].  All
    built-in families are even functions, so odd coefficients are zero.
    ``order`` is the kernel order: moments 1 .. order-1 vanish.
    """

    family: str
    order: int
    coefficients: tuple[float, ...]
    bounds: KernelBounds

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def even_coefficients(self) -> np.ndarray:
        """Coefficients of v**(2j), as consumed by the sum backends."""
        c = np.asarray(self.coefficients, dtype=np.float64)
        if c[1::2].size and np.max(np.abs(c[1::2])) > 1e-14:
            raise ValueError("kernel has non-even terms")
        return np.ascontiguousarray(c[0::2])

    def support_breakpoints(self, h: float, u: float) -> tuple[float, float]:
        """Endpoints of the support of v -> K((v - u)/h)."""
        return (u - h, u + h)


def eval_kernel(kernel: KernelSpec, v):
    """Evaluate K at v (scalar or array); exactly 0 where |v| > 1."""
    v = np.asarray(v, dtype=np.float64)
    inside = np.abs(v) <= 1.0
    vals = nppoly.polyval(np.where(inside, v, 0.0), kernel.coefficients) * inside
    if vals.ndim == 0:
        return float(vals)
    return vals


def kernel_moment(kernel: KernelSpec, j: int = 0, absolute: bool = False,
                  s: float | None = None) -> float:
    """Moment of the kernel over [-1, 1].

    Without ``absolute``: integral of u**j * K(u), computed by fixed-order
    Gauss-Legendre quadrature with enough nodes to be exact for the
    polynomial integrand.  With ``absolute`` (and optionally a real
    exponent ``s`` in place of j): integral of |u|**s * |K(u)|, computed
    by adaptive quadrature split at the sign changes of K and at 0.
    """
    coeffs = np.asarray(kernel.coefficients, dtype=np.float64)
    if not absolute:
        nodes, weights = npleg.leggauss(2 * (kernel.degree + j) + 8)
        return float(np.sum(weights * nodes**j * nppoly.polyval(nodes, coeffs)))

    exponent = float(j) if s is None else float(s)

    def integrand(u):
        return abs(u) ** exponent * abs(nppoly.polyval(u, coeffs))

    cuts = sorted({-1.0, 0.0, 1.0} | set(_real_roots_in_open_interval(coeffs)))
    total = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        val, _ = integrate.quad(integrand, lo, hi, epsabs=1e-13, limit=200)
        total += val
    return total


def build_epanechnikov() -> KernelSpec:
    """The Epanechnikov kernel K(v) = 0.75 (1 - v^2) on [-1, 1]."""
    return _finish("epanechnikov", 2, np.array([0.75, 0.0, -0.75]))


def build_legendre_kernel(order: int) -> KernelSpec:
    """Projection kernel of the given even order from Legendre polynomials.

    K(u) = sum_{m=0}^{order} phi_m(0) phi_m(u) with phi_m orthonormal on
    [-1, 1]; odd-m terms vanish since phi_m(0) = 0 for odd m.  Moments
    1 .. order-1 are zero and the kernel integrates to 1.
    """
    if order not in SUPPORTED_LEGENDRE_ORDERS:
        raise ValueError(
            f"order must be one of {SUPPORTED_LEGENDRE_ORDERS}, got {order}"
        )
    series = np.zeros(order + 1)
    for m in range(0, order + 1, 2):
        basis = np.zeros(m + 1)
        basis[m] = 1.0
        p_m_at_0 = npleg.legval(0.0, basis)
        series[m] = (2 * m + 1) / 2.0 * p_m_at_0
    coeffs = npleg.leg2poly(series)
    return _finish(f"legendre{order}", order, coeffs)


def _finish(family: str, order: int, coeffs: np.ndarray) -> KernelSpec:
    coeffs = np.asarray(coeffs, dtype=np.float64)
    spec_wo_bounds = coeffs  # bounds derived below from the raw polynomial
    k_max = _poly_sup_abs(spec_wo_bounds) * _SUP_NUDGE
    m = _poly_sup_abs(nppoly.polyder(spec_wo_bounds)) * _SUP_NUDGE
    kernel = KernelSpec(
        family=family,
        order=order,
        coefficients=tuple(float(c) for c in coeffs),
        bounds=KernelBounds(k_max=k_max, m=m, beta=1.0, b=np.nan, s=float(order)),
    )
    b = kernel_moment(kernel, absolute=True, s=float(order))
    kernel = KernelSpec(
        family=family,
        order=order,
        coefficients=kernel.coefficients,
        bounds=KernelBounds(k_max=k_max, m=m, beta=1.0, b=b, s=float(order)),
    )
    _check_moments(kernel)
    return kernel


def _check_moments(kernel: KernelSpec) -> None:
    if abs(kernel_moment(kernel, 0) - 1.0) > 1e-8:
        raise AssertionError(f"{kernel.family}: kernel does not integrate to 1")
    for j in range(1, kernel.order):
        if abs(kernel_moment(kernel, j)) > 1e-8:
            raise AssertionError(f"{kernel.family}: moment {j} does not vanish")


def _poly_sup_abs(coeffs: np.ndarray) -> float:
    """Exact sup of |poly| on [-1, 1]: check endpoints and critical points."""
    candidates = [-1.0, 1.0]
    candidates.extend(_real_roots_in_open_interval(nppoly.polyder(coeffs)))
    vals = np.abs(nppoly.polyval(np.array(candidates), coeffs))
    return float(np.max(vals))


def _real_roots_in_open_interval(coeffs: np.ndarray) -> list[float]:
    coeffs = np.trim_zeros(np.asarray(coeffs, dtype=np.float64), "b")
    if len(coeffs) < 2:
        return []
    roots = nppoly.polyroots(coeffs)
    out = []
    for r in roots:
        if abs(r.imag) < 1e-12 and -1.0 < r.real < 1.0:
            out.append(float(r.real))
    return out
