"""Pure-NumPy twin of the compiled kernel-sum core (`binomix._fastkern`).

Same contract: kernels are even polynomials K(v) = sum_j c2[j] * v**(2j)
on [-1, 1], zero outside.  Used when the extension is unavailable or when
``BINOMIX_BACKEND=python`` forces it.
"""

from __future__ import annotations

import numpy as np


def _masked_square(pts: np.ndarray, us: np.ndarray, h: float):
    v = (pts[np.newaxis, :] - us[:, np.newaxis]) / h
    mask = np.abs(v) <= 1.0
    return v * v * mask, mask


def weighted_sums(c2, pts, w, us, h):
    """out[k] = sum_i w[i] * K((pts[i] - us[k]) / h) / h."""
    c2 = np.asarray(c2, dtype=np.float64)
    v2, mask = _masked_square(np.asarray(pts, dtype=np.float64),
                              np.asarray(us, dtype=np.float64), h)
    kv = np.full_like(v2, c2[-1])
    for c in c2[-2::-1]:
        kv = kv * v2 + c
    kv *= mask
    return (kv @ np.asarray(w, dtype=np.float64)) / h


def kernel_values(c2, pts, u, h):
    """out[i] = K((pts[i] - u) / h) / h."""
    c2 = np.asarray(c2, dtype=np.float64)
    v = (np.asarray(pts, dtype=np.float64) - u) / h
    mask = np.abs(v) <= 1.0
    v2 = v * v * mask
    kv = np.full_like(v2, c2[-1])
    for c in c2[-2::-1]:
        kv = kv * v2 + c
    return kv * mask / h


def power_sums(pts, w, us, h, npow):
    """M[j, k] = sum_i w[i] * v_ik**(2j) * 1(|v_ik| <= 1) / h."""
    w = np.asarray(w, dtype=np.float64)
    v2, mask = _masked_square(np.asarray(pts, dtype=np.float64),
                              np.asarray(us, dtype=np.float64), h)
    out = np.empty((npow, len(us)), dtype=np.float64)
    p = mask.astype(np.float64)
    out[0] = p @ w
    for j in range(1, npow):
        p = p * v2
        out[j] = p @ w
    out /= h
    return out
