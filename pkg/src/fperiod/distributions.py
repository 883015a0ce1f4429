"""Gumbel limit law, centering sequences, and the hypoexponential oracle.

Under the null the centered maximum of the periodogram converges to the
standard Gumbel distribution ``F(x) = exp(-exp(-x))``.  The centering
sequences implemented here are

* ``b_q^d = lambda_1 * log(q * alpha_{1,d})`` with
  ``alpha_{1,d} = prod_{j=2..d} (1 - lambda_j/lambda_1)**-1`` for the
  eigenvalue-standardized maximum (finite truncation ``d`` or its limit), and
* ``c_q = log q + (d-1)*log(log q) - log((d-1)!)`` for the whitened
  ``d``-dimensional maximum.

For Gaussian data the squared transform norm at a single fundamental
frequency is exactly hypoexponential with component means equal to the
covariance eigenvalues; the cdf and sampler below serve as the exact
finite-dimensional oracle for the Gumbel approximation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegeneracyError

__all__ = [
    "gumbel_cdf",
    "gumbel_quantile",
    "centering_b",
    "centering_b_limit",
    "centering_c",
    "HypoExpSpec",
    "hypoexp_cdf",
    "hypoexp_sample",
    "max_hypoexp_standardized",
]

_GAP_TOL = 1e-8  # eigenvalue ratios closer than this to 1 are degenerate


def gumbel_cdf(x):
    """Standard Gumbel cdf ``exp(-exp(-x))``; accepts scalars or arrays."""
    out = np.exp(-np.exp(-np.asarray(x, dtype=float)))
    return float(out) if out.ndim == 0 else out


def gumbel_quantile(p: float) -> float:
    """Inverse of :func:`gumbel_cdf`: ``-log(-log(p))`` for ``p`` in (0, 1)."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"quantile level must lie strictly in (0, 1), got {p}")
    return -math.log(-math.log(p))


def _check_eigenvalues(eigenvalues, d: int) -> np.ndarray:
    lam = np.asarray(eigenvalues, dtype=float)
    if lam.ndim != 1 or lam.size == 0:
        raise ValueError("expected a nonempty 1-d eigenvalue sequence")
    if not 1 <= d <= lam.size:
        raise ValueError(f"truncation d={d} outside 1..{lam.size}")
    lam = lam[:d]
    if lam[0] <= 0:
        raise ValueError("leading eigenvalue must be positive")
    if d > 1 and np.any(np.diff(lam) >= 0):
        raise ValueError("eigenvalues must be strictly decreasing up to the truncation")
    return lam


def centering_b(q: int, eigenvalues, d: int) -> float:
    """Centering ``b_q^d = lambda_1 * (log q - sum_{j=2..d} log(1 - lambda_j/lambda_1))``.

    Requires ``q >= 1`` and strictly decreasing positive eigenvalues up to
    ``d``.  A ratio ``lambda_j/lambda_1`` within ``1e-8`` of 1 leaves the
    product unresolved and raises :class:`~fperiod.errors.DegeneracyError`.
    """
    q = int(q)
    if q < 1:
        raise ValueError(f"need q >= 1, got q={q}")
    lam = _check_eigenvalues(eigenvalues, d)
    gaps = 1.0 - lam[1:] / lam[0]
    if gaps.size and float(gaps.min()) < _GAP_TOL:
        raise DegeneracyError(
            "eigenvalue gap 1 - lambda_j/lambda_1 below 1e-8: "
            "centering sequence is unresolved"
        )
    return float(lam[0] * (math.log(q) - np.log(gaps).sum()))


def centering_b_limit(q: int, eigenvalues, tail_tol: float = 1e-6) -> float:
    """Truncated limit ``b_q = lim_d b_q^d`` using all supplied eigenvalues.

    The supplied list stands in for the full (summable) spectrum; the call is
    refused unless the relative tail ``lambda_last / lambda_1`` is at most
    ``tail_tol``, since otherwise the limit is not resolved by the list.  A
    single-eigenvalue list is accepted as an exactly rank-one spectrum.
    """
    lam = np.asarray(eigenvalues, dtype=float)
    if lam.ndim != 1 or lam.size == 0:
        raise ValueError("expected a nonempty 1-d eigenvalue sequence")
    if lam.size > 1:
        tail = float(lam[-1] / lam[0])
        if tail > tail_tol:
            raise ValueError(
                f"relative eigenvalue tail {tail:.3e} exceeds tail_tol={tail_tol:.1e}: "
                "limit centering not resolved by the supplied list"
            )
    return centering_b(q, lam, lam.size)


def centering_c(q: int, d: int) -> float:
    """Centering ``c_q = log q + (d-1)*log(log q) - log((d-1)!)`` for ``q >= 3``."""
    q = int(q)
    d = int(d)
    if q < 3:
        raise ValueError(f"need q >= 3 for the iterated logarithm, got q={q}")
    if d < 1:
        raise ValueError(f"need d >= 1, got d={d}")
    return math.log(q) + (d - 1) * math.log(math.log(q)) - math.lgamma(d)


@dataclass(frozen=True)
class HypoExpSpec:
    """Hypoexponential law: sum of independent exponentials with distinct means.

    ``means`` must be strictly decreasing and positive; the corresponding
    rates are ``1/means``.
    """

    means: tuple

    def __post_init__(self):
        means = tuple(float(m) for m in self.means)
        if not means:
            raise ValueError("need at least one component mean")
        if any(m <= 0 for m in means):
            raise ValueError("component means must be positive")
        if any(b >= a for a, b in zip(means, means[1:])):
            raise ValueError("component means must be strictly decreasing")
        object.__setattr__(self, "means", means)

    @property
    def dim(self) -> int:
        return len(self.means)


def _hypoexp_weights(means: np.ndarray) -> np.ndarray:
    """Mixture weights ``alpha_k = prod_{j != k} (1 - lambda_j/lambda_k)**-1``.

    Computed in log-magnitude plus sign form; the factors alternate in sign
    and their products overflow quickly when multiplied directly.
    """
    d = means.size
    if d == 1:
        return np.ones(1)
    ratio = 1.0 - means[None, :] / means[:, None]  # entry (k, j) = 1 - lam_j/lam_k
    off = ~np.eye(d, dtype=bool)
    log_mag = np.zeros(d)
    sign = np.ones(d)
    for k in range(d):
        row = ratio[k][off[k]]
        log_mag[k] = -np.log(np.abs(row)).sum()
        sign[k] = np.prod(np.sign(row))
    return sign * np.exp(log_mag)


def hypoexp_cdf(x, spec: HypoExpSpec):
    """Cdf ``sum_k alpha_k * (1 - exp(-x / mean_k))``, zero for ``x < 0``."""
    means = np.asarray(spec.means)
    alphas = _hypoexp_weights(means)
    xs = np.asarray(x, dtype=float)
    scalar = xs.ndim == 0
    xs = np.atleast_1d(xs)
    vals = (alphas[None, :] * -np.expm1(-xs[:, None] / means[None, :])).sum(axis=1)
    vals = np.where(xs < 0, 0.0, vals)
    return float(vals[0]) if scalar else vals


def hypoexp_sample(spec: HypoExpSpec, rng: np.random.Generator, size=None):
    """Draw from the hypoexponential law as a sum of exponential components."""
    shape = () if size is None else size
    total = np.zeros(shape)
    for mean in spec.means:
        total = total + rng.exponential(scale=mean, size=size)
    return float(total) if size is None else total


def max_hypoexp_standardized(
    spec: HypoExpSpec, q: int, rng: np.random.Generator, size=None
):
    """Standardized maximum ``(max of q iid hypoexponentials - b_q^d) / lambda_1``.

    This is the exact Gaussian-case statistic: for Gaussian data with
    covariance eigenvalues ``spec.means`` the squared transform norms at the
    ``q`` fundamental frequencies are iid hypoexponential, so draws from here
    quantify how close the finite-``q`` law is to the Gumbel limit.  With
    ``size=m`` an array of ``m`` independent standardized maxima is returned.
    """
    q = int(q)
    if q < 1:
        raise ValueError(f"need q >= 1, got q={q}")
    means = np.asarray(spec.means)
    b = centering_b(q, means, means.size)
    reps = 1 if size is None else int(size)
    out = np.empty(reps)
    # chunk the (rows, q) draw matrix to keep memory bounded for large q
    chunk = max(1, 4_000_000 // q)
    start = 0
    while start < reps:
        rows = min(chunk, reps - start)
        total = np.zeros((rows, q))
        for mean in means:
            total += rng.exponential(scale=mean, size=(rows, q))
        out[start : start + rows] = total.max(axis=1)
        start += rows
    out = (out - b) / means[0]
    return float(out[0]) if size is None else out
