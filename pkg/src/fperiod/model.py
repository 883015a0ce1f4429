"""Autoregressive noise model: estimation, residuals, and frequency filters.

The noise component is modeled as a first-order autoregression
``X_t = rho(X_{t-1}) + eps_t`` with a bounded operator ``rho``.  The
estimator is the classical principal-components regression: with lag
covariances ``C0`` and ``C1`` of the centered series,

    rho_hat = C1 @ (P_k C0^+ P_k),

where ``P_k`` projects onto the top-``k`` eigenvectors of ``C0`` and the
pseudo-inverse acts on that span.  ``k`` is the smallest dimension whose
cumulative eigenvalue share reaches ``variance_threshold`` (or a caller-fixed
``fixed_k``).

On the frequency side, a linear process with impulse-response operators
``a_k`` has transfer operator ``A(w) = sum_k a_k exp(-i*k*w)``; for the
autoregression the inverse filter is available in closed form,
``A^{-1}(w) = I - exp(-i*w) * rho``, and is applied row-wise to transform
tables before taking maxima.
"""

from __future__ import annotations

import warnings as _warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegeneracyError
from .hilbert import EigenSystem, sym_eigen
from .spectral import FrequencyGrid

__all__ = [
    "FarModel",
    "InnovationCov",
    "lag_autocov",
    "estimate_far1",
    "residuals",
    "innovation_cov",
    "select_a_n",
    "transfer_operator",
    "far1_inverse_filters",
]

_RANK_TOL = 1e-12


@dataclass(frozen=True)
class FarModel:
    """Estimated autoregression: operator, component count, and sample mean."""

    rho_hat: np.ndarray
    k_used: int
    mean: np.ndarray
    explained_variance: float
    warnings: tuple = ()


@dataclass(frozen=True)
class InnovationCov:
    """Residual covariance with its descending eigendecomposition."""

    sigma_hat: np.ndarray
    eigen: EigenSystem


def _as_series(series) -> np.ndarray:
    x = np.asarray(series, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2 or x.size == 0:
        raise ValueError("expected a nonempty n x p coefficient series")
    return x


def lag_autocov(series, h: int) -> np.ndarray:
    """Empirical lag-``h`` autocovariance about the sample mean.

    ``C_h = (n-h)**-1 * sum_t (X_{t+h} - mean) (x) (X_t - mean)``; ``C_0`` is
    symmetric positive semidefinite by construction.
    """
    x = _as_series(series)
    n = x.shape[0]
    h = int(h)
    if h < 0:
        raise ValueError("lag must be nonnegative")
    if n <= h + 1:
        raise ValueError(f"series of length {n} too short for lag {h}")
    xc = x - x.mean(axis=0)
    return xc[h:].T @ xc[: n - h] / (n - h)


def operator_norm(a) -> float:
    """Largest singular value (the bound relevant for stationarity)."""
    return float(np.linalg.norm(np.asarray(a), 2))


def estimate_far1(series, variance_threshold: float = 0.99, fixed_k: int | None = None) -> FarModel:
    """Principal-components estimate of the autoregression operator.

    The series is centered by its sample mean before estimation.  ``fixed_k``
    overrides the cumulative-variance rule; ``fixed_k = p`` on full-rank data
    gives the unregularized solve ``C1 @ inv(C0)``.  An estimate with operator
    norm at or above 1 is flagged in ``FarModel.warnings`` rather than
    rejected, since stationarity is a property of the truth, not the estimate.
    """
    x = _as_series(series)
    n, p = x.shape
    if n < 3:
        raise ValueError(f"need at least 3 observations, got {n}")
    c0 = lag_autocov(x, 0)
    c1 = lag_autocov(x, 1)
    eig = sym_eigen(c0)
    total = float(eig.values.sum())
    if total <= 0.0:
        raise DegeneracyError("series has no variance; cannot estimate the operator")
    if fixed_k is not None:
        k = int(fixed_k)
        if not 1 <= k <= p:
            raise ValueError(f"fixed_k={fixed_k} outside 1..{p}")
    else:
        if not 0.0 < variance_threshold <= 1.0:
            raise ValueError("variance_threshold must lie in (0, 1]")
        shares = np.cumsum(eig.values) / total
        k = int(np.searchsorted(shares, variance_threshold - 1e-12) + 1)
        k = min(k, p)
    if eig.values[k - 1] <= _RANK_TOL * eig.values[0]:
        raise DegeneracyError(
            f"covariance is numerically rank deficient at component {k}; "
            "reduce k or the variance threshold"
        )
    vk = eig.vectors[:, :k]
    rho = c1 @ ((vk / eig.values[:k]) @ vk.T)
    notes = ()
    norm = operator_norm(rho)
    if norm >= 1.0:
        notes = (
            f"estimated operator norm {norm:.3f} >= 1; "
            "the fitted autoregression is not stationary",
        )
    return FarModel(
        rho_hat=rho,
        k_used=k,
        mean=x.mean(axis=0),
        explained_variance=float(np.cumsum(eig.values)[k - 1] / total),
        warnings=notes,
    )


def residuals(series, model: FarModel) -> np.ndarray:
    """One-step residuals ``X_k - rho_hat(X_{k-1})`` for ``k = 2..n``.

    The series is centered by ``model.mean``; the result has ``n - 1`` rows.
    """
    x = _as_series(series)
    if x.shape[0] < 2:
        raise ValueError("need at least 2 observations to form residuals")
    rho = np.asarray(model.rho_hat, dtype=float)
    if rho.shape != (x.shape[1], x.shape[1]):
        raise ValueError(
            f"operator shape {rho.shape} does not match series dimension {x.shape[1]}"
        )
    xc = x - np.asarray(model.mean, dtype=float)
    return xc[1:] - xc[:-1] @ rho.T


def innovation_cov(resid) -> InnovationCov:
    """Residual covariance ``sigma_hat = m**-1 * sum eps (x) eps`` (no recentering).

    ``m`` is the number of residual rows, matching the ``1/(n-1)`` divisor for
    residuals built from an ``n``-point series.
    """
    e = _as_series(resid)
    m = e.shape[0]
    if m < 2:
        raise ValueError("need at least 2 residual rows")
    sigma = e.T @ e / m
    return InnovationCov(sigma_hat=sigma, eigen=sym_eigen(sigma))


def select_a_n(eigen: EigenSystem, threshold: float = 0.01) -> int:
    """Truncation rule: smallest ``j`` with ``-log(1 - lam_j/lam_1) <= threshold``.

    Falls back to the count of positive eigenvalues when no index qualifies
    (near-flat spectra); the result never exceeds the available eigenvalue
    count.
    """
    lam = np.asarray(eigen.values, dtype=float)
    if lam.size == 0 or lam[0] <= 0:
        raise DegeneracyError("leading eigenvalue must be positive to choose a_n")
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    for j in range(2, lam.size + 1):
        gap = 1.0 - lam[j - 1] / lam[0]
        if gap > 0 and -np.log(gap) <= threshold:
            return j
    return int(np.count_nonzero(lam > 0))


def transfer_operator(coeffs, omega: float) -> np.ndarray:
    """Transfer operator ``A(w) = sum_k a_k * exp(-i*k*w)`` from (lag, matrix) pairs."""
    pairs = [(int(k), np.asarray(a, dtype=float)) for k, a in coeffs]
    if not pairs:
        raise ValueError("need at least one (lag, operator) pair")
    p = pairs[0][1].shape[0]
    out = np.zeros((p, p), dtype=complex)
    for k, a in pairs:
        if a.shape != (p, p):
            raise ValueError("all lag operators must share the same square shape")
        out += a * np.exp(-1j * k * omega)
    return out


def far1_inverse_filters(rho, grid: FrequencyGrid) -> np.ndarray:
    """Inverse filters ``I - exp(-i*w_j) * rho`` for every grid frequency.

    Returns a ``(q, p, p)`` complex array.  Validity of the filtered limit
    needs a stable true operator; an input with norm at or above 1 only
    triggers a warning so the statistic stays computable.
    """
    r = np.asarray(rho, dtype=float)
    if r.ndim != 2 or r.shape[0] != r.shape[1]:
        raise ValueError(f"expected a square operator, got shape {r.shape}")
    if operator_norm(r) >= 1.0:
        _warnings.warn(
            "building inverse filters from an operator with norm >= 1; "
            "the filtered statistic is calibrated only for stable operators",
            stacklevel=2,
        )
    phases = np.exp(-1j * grid.omegas)
    eye = np.eye(r.shape[0])
    return eye[None, :, :] - phases[:, None, None] * r[None, :, :]
