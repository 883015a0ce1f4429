"""Reading curve data, fitting an orthonormal basis, and writing reports.

Two CSV layouts are understood:

* Grid CSV: one curve per row, sampled at ``m`` points of [0, 1].  An
  optional first row holding the grid points themselves (detected as a
  strictly increasing sequence inside [0, 1]) overrides the default uniform
  grid ``linspace(0, 1, m)``.
* Coefficient CSV: ``n`` rows of ``p`` basis coefficients, no header.

Curves are projected onto the orthonormal Fourier system on [0, 1]

    phi_1 = 1,  phi_{2k} = sqrt(2) sin(2*pi*k*u),  phi_{2k+1} = sqrt(2) cos(2*pi*k*u)

by ordinary least squares at the grid points, so with enough grid points any
curve in the span is reproduced exactly and Hilbert norms equal coefficient
norms.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .spectral import fundamental_frequencies

__all__ = [
    "GridSeries",
    "BasisSpec",
    "read_grid_csv",
    "read_coef_csv",
    "write_coef_csv",
    "fourier_design",
    "fit_basis",
    "write_report",
]


@dataclass(frozen=True)
class GridSeries:
    """Discretized curves: row ``t`` of ``values`` sampled at ``grid`` points."""

    values: np.ndarray
    grid: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        grid = np.asarray(self.grid, dtype=float)
        if values.ndim != 2 or values.size == 0:
            raise ValueError("values must be a nonempty n x m array")
        if grid.shape != (values.shape[1],) or grid.size < 2:
            raise ValueError("grid must hold one point per column, at least 2")
        if grid[0] < 0.0 or grid[-1] > 1.0 or np.any(np.diff(grid) <= 0):
            raise ValueError("grid points must be strictly increasing within [0, 1]")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "grid", grid)


@dataclass(frozen=True)
class BasisSpec:
    """Orthonormal Fourier basis of odd size: 1 constant plus sine/cosine pairs."""

    kind: str = "fourier"
    size: int = 21

    def __post_init__(self):
        if self.kind != "fourier":
            raise ValueError(f"unsupported basis kind {self.kind!r}")
        if self.size < 1 or self.size % 2 == 0:
            raise ValueError("basis size must be an odd integer >= 1")


def _parse_csv_rows(path) -> list:
    rows = []
    with open(path, "r", encoding="utf-8-sig") as fh:  # tolerate a BOM
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped:
                continue
            cells = stripped.split(",")
            row = []
            for col, cell in enumerate(cells, start=1):
                try:
                    row.append(float(cell))
                except ValueError:
                    raise ValueError(
                        f"{path}: non-numeric value {cell.strip()!r} "
                        f"at line {lineno}, column {col}"
                    ) from None
            rows.append((lineno, row))
    if not rows:
        raise ValueError(f"{path}: file contains no data")
    width = len(rows[0][1])
    for lineno, row in rows:
        if len(row) != width:
            raise ValueError(
                f"{path}: ragged row at line {lineno} "
                f"({len(row)} cells, expected {width})"
            )
    return [row for _, row in rows]


def _looks_like_grid(row) -> bool:
    arr = np.asarray(row)
    return (
        arr.size >= 2
        and arr[0] >= 0.0
        and arr[-1] <= 1.0
        and bool(np.all(np.diff(arr) > 0))
    )


def read_grid_csv(path) -> GridSeries:
    """Read discretized curves, honoring an optional grid-point header row."""
    rows = _parse_csv_rows(path)
    if len(rows) >= 2 and _looks_like_grid(rows[0]):
        grid = np.asarray(rows[0])
        values = np.asarray(rows[1:])
    else:
        values = np.asarray(rows)
        grid = np.linspace(0.0, 1.0, values.shape[1])
    return GridSeries(values=values, grid=grid)


def read_coef_csv(path) -> np.ndarray:
    """Read a coefficient series: ``n`` rows of ``p`` values, no header."""
    return np.asarray(_parse_csv_rows(path))


def write_coef_csv(series, path) -> None:
    """Write a coefficient series losslessly (17 significant digits)."""
    x = np.asarray(series, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    np.savetxt(path, x, delimiter=",", fmt="%.17g")


def fourier_design(grid, size: int) -> np.ndarray:
    """Design matrix of the orthonormal Fourier basis at the grid points."""
    if size < 1 or size % 2 == 0:
        raise ValueError("basis size must be an odd integer >= 1")
    u = np.asarray(grid, dtype=float)
    out = np.empty((u.size, size))
    out[:, 0] = 1.0
    for k in range(1, (size - 1) // 2 + 1):
        out[:, 2 * k - 1] = np.sqrt(2.0) * np.sin(2.0 * np.pi * k * u)
        out[:, 2 * k] = np.sqrt(2.0) * np.cos(2.0 * np.pi * k * u)
    return out


def fit_basis(grid_series: GridSeries, basis: BasisSpec) -> np.ndarray:
    """Least-squares coefficients of each curve in the basis.

    Needs at least as many grid points as basis functions; a rank-deficient
    design (grid too coarse for the requested size) is refused.
    """
    m = grid_series.grid.size
    if m < basis.size:
        raise ValueError(
            f"need at least {basis.size} grid points for a size-{basis.size} "
            f"basis, got {m}"
        )
    design = fourier_design(grid_series.grid, basis.size)
    coeffs, _, rank, _ = np.linalg.lstsq(design, grid_series.values.T, rcond=None)
    if rank < basis.size:
        raise ValueError(
            f"design matrix rank {rank} < basis size {basis.size}: "
            "grid too coarse for this basis"
        )
    return coeffs.T


def write_report(report, path, format: str = "json") -> None:
    """Serialize a test report or Monte Carlo result to ``path``.

    JSON keeps all fields under stable key names.  CSV emits the
    per-frequency table ``j,omega,t_n_j`` for a test report and the
    ``alpha,rejection_rate,standard_error`` table for a Monte Carlo result.
    """
    if format == "json":
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(report.as_dict(), fh, indent=2)
            fh.write("\n")
        return
    if format != "csv":
        raise ValueError(f"unknown report format {format!r}")
    lines = []
    if hasattr(report, "per_freq"):
        grid = fundamental_frequencies(report.n)
        lines.append("j,omega,t_n_j")
        for j in range(grid.q):
            lines.append(f"{j + 1},{grid.omegas[j]:.17g},{report.per_freq[j]:.17g}")
    elif hasattr(report, "per_alpha"):
        lines.append("alpha,rejection_rate,standard_error")
        for alpha, rate in report.per_alpha.items():
            se = report.standard_errors[alpha]
            lines.append(f"{alpha!r},{rate!r},{se!r}")
    else:
        raise TypeError(f"cannot serialize object of type {type(report).__name__}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
