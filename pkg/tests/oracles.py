"""Independent reference computations used to pin the production code.

Everything here is deliberately slow and literal: direct summation instead
of FFTs, bisection instead of closed-form inverses, sorting-based empirical
distribution comparisons.  Nothing imports from the package's fast paths.
"""

import numpy as np


def direct_dft(series) -> np.ndarray:
    """Transform at the fundamental frequencies by direct O(n*q*p) summation."""
    x = np.asarray(series, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    n = x.shape[0]
    q = (n - 1) // 2
    t = np.arange(1, n + 1)
    rows = np.empty((q, x.shape[1]), dtype=complex)
    for j in range(1, q + 1):
        w = 2.0 * np.pi * j / n
        rows[j - 1] = (x * np.exp(-1j * w * t)[:, None]).sum(axis=0) / np.sqrt(n)
    return rows


def ks_distance(samples, cdf) -> float:
    """Kolmogorov-Smirnov distance between an empirical sample and a cdf."""
    s = np.sort(np.asarray(samples, dtype=float))
    m = s.size
    f = np.asarray(cdf(s), dtype=float)
    upper = np.max(np.arange(1, m + 1) / m - f)
    lower = np.max(f - np.arange(m) / m)
    return float(max(upper, lower))


def invert_increasing(fn, target, lo, hi, tol=1e-13):
    """Invert a strictly increasing scalar function by bisection."""
    flo, fhi = fn(lo), fn(hi)
    if not flo < target < fhi:
        raise ValueError("target not bracketed")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if fn(mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
