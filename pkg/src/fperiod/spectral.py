"""Discrete Fourier transforms at fundamental frequencies and periodogram maxima.

For a coefficient series ``X_1, ..., X_n`` (rows of an ``n x p`` array) the
transform evaluated at frequency ``w`` is

    n**-0.5 * sum_{t=1..n} X_t * exp(-i*t*w),

computed coordinate-wise.  Testing uses only the fundamental frequencies
``w_j = 2*pi*j/n`` for ``j = 1..q`` with ``q = floor((n-1)/2)``, which
excludes frequency zero and (for even ``n``) the Nyquist frequency.  The
squared norm of a transform row equals the Hilbert-Schmidt norm of the
rank-one periodogram operator at that frequency.

The fast path goes through a full-length FFT per coordinate; a direct
summation oracle lives in the test suite and pins the implementation to the
defining formula.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "FrequencyGrid",
    "DftTable",
    "MaxResult",
    "fundamental_frequencies",
    "dft",
    "full_dft",
    "periodogram_norms",
    "periodogram_operator",
    "max_norm",
    "filter_dft",
]


@dataclass(frozen=True)
class FrequencyGrid:
    """Fundamental frequencies ``w_j = 2*pi*j/n`` for ``j = 1..q``."""

    n: int
    q: int
    omegas: np.ndarray


@dataclass(frozen=True)
class DftTable:
    """Transform values at the fundamental frequencies; row ``j-1`` is ``w_j``."""

    grid: FrequencyGrid
    rows: np.ndarray  # complex, shape (q, p)


@dataclass(frozen=True)
class MaxResult:
    """Maximum of a per-frequency norm sequence.

    ``argmax_j`` is the 1-based frequency index (smallest on ties) and
    ``implied_period = n / argmax_j`` is the period the winning frequency
    corresponds to.
    """

    value: float
    argmax_j: int
    implied_period: float


def _as_series(series) -> np.ndarray:
    x = np.asarray(series, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2 or x.size == 0:
        raise ValueError("expected a nonempty n x p coefficient series")
    return x


def fundamental_frequencies(n: int) -> FrequencyGrid:
    """Frequency grid for an ``n``-point sample; requires ``n >= 3``."""
    n = int(n)
    if n < 3:
        raise ValueError(f"need n >= 3 to have fundamental frequencies, got n={n}")
    q = (n - 1) // 2
    omegas = 2.0 * np.pi * np.arange(1, q + 1) / n
    return FrequencyGrid(n=n, q=q, omegas=omegas)


def dft(series) -> DftTable:
    """Transform of a coefficient series at all fundamental frequencies."""
    x = _as_series(series)
    n = x.shape[0]
    grid = fundamental_frequencies(n)
    # rows are 1-indexed in time: sum_{t=1..n} X_t e^{-itw} = e^{-iw} * FFT(X)_j
    coeffs = np.fft.fft(x, axis=0)[1 : grid.q + 1] / np.sqrt(n)
    phases = np.exp(-1j * grid.omegas)
    return DftTable(grid=grid, rows=coeffs * phases[:, None])


def full_dft(series) -> np.ndarray:
    """Test hook: the transform at all ``n`` frequencies ``2*pi*j/n``, ``j=0..n-1``.

    Uses the same normalization as :func:`dft`, so the energy identity
    ``sum_j ||row_j||^2 == sum_t ||X_t||^2`` holds exactly up to rounding.
    """
    x = _as_series(series)
    n = x.shape[0]
    coeffs = np.fft.fft(x, axis=0) / np.sqrt(n)
    phases = np.exp(-2j * np.pi * np.arange(n) / n)
    return coeffs * phases[:, None]


def periodogram_norms(table: DftTable) -> np.ndarray:
    """Squared complex norm of each transform row (all entries >= 0)."""
    rows = table.rows
    return np.einsum("jk,jk->j", rows, rows.conj()).real


def periodogram_operator(table: DftTable, j: int) -> np.ndarray:
    """Rank-one periodogram operator ``row_j (x) row_j`` at 1-based index ``j``."""
    if not 1 <= j <= table.grid.q:
        raise ValueError(f"frequency index {j} outside 1..{table.grid.q}")
    row = table.rows[j - 1]
    return np.outer(row, row.conj())


def max_norm(norms, n: int) -> MaxResult:
    """Maximum of a norm sequence with the smallest index winning ties."""
    values = np.asarray(norms, dtype=float)
    if values.ndim != 1 or values.size == 0:
        raise ValueError("expected a nonempty sequence of norms")
    idx = int(np.argmax(values))
    return MaxResult(
        value=float(values[idx]),
        argmax_j=idx + 1,
        implied_period=float(n) / (idx + 1),
    )


def filter_dft(table: DftTable, filters) -> DftTable:
    """Apply one operator per frequency: row ``j`` becomes ``filters[j] @ row j``."""
    mats = np.asarray(filters)
    q, p = table.rows.shape
    if mats.shape != (q, p, p):
        raise ValueError(
            f"expected {q} filters of shape ({p}, {p}), got array of shape {mats.shape}"
        )
    rows = np.einsum("jab,jb->ja", mats, table.rows)
    return DftTable(grid=table.grid, rows=rows)
