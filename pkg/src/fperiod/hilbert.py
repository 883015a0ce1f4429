"""Finite-basis representation of the underlying separable Hilbert space.

Curves are stored as coefficient vectors in a fixed orthonormal basis of
dimension ``p``, so inner products reduce to Euclidean dot products, bounded
operators become ``p x p`` matrices, and the Hilbert-Schmidt norm equals the
Frobenius norm.  Real vectors are 1-d float arrays, complexified vectors are
1-d complex arrays, operators are 2-d arrays of either kind.

All functions here are pure and safe to call from any number of threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegeneracyError

__all__ = [
    "EigenSystem",
    "complex_inner",
    "tensor",
    "hs_norm",
    "sym_eigen",
    "inv_sqrt",
]

_SYM_TOL = 1e-10
_EIG_ZERO_TOL = 1e-12  # eigenvalues within this (relative) band collapse to 0
_EIG_NEG_TOL = 1e-8  # more negative than this (relative) is not a rounding error


@dataclass(frozen=True)
class EigenSystem:
    """Eigendecomposition with descending eigenvalues.

    ``values`` is a 1-d array sorted in non-increasing order and ``vectors``
    holds the matching orthonormal eigenvectors as columns.  The sign of each
    eigenvector is fixed so that its first nonzero coordinate is positive.
    """

    values: np.ndarray
    vectors: np.ndarray


def _as_vector(x) -> np.ndarray:
    v = np.asarray(x)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("expected a nonempty 1-d coefficient vector")
    return v


def _as_square(a) -> np.ndarray:
    m = np.asarray(a)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise ValueError(f"expected a square operator matrix, got shape {m.shape}")
    return m


def complex_inner(u, v) -> complex:
    """Complex inner product, linear in ``u`` and conjugate-linear in ``v``.

    For ``u = u0 + i*u1`` and ``v = v0 + i*v1`` this is
    ``<u0,v0> + <u1,v1> + i(<u1,v0> - <u0,v1>)``, i.e. the usual complex
    inner product ``sum(u * conj(v))``.
    """
    u = _as_vector(u)
    v = _as_vector(v)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    return complex(np.vdot(v, u))


def tensor(x, y) -> np.ndarray:
    """Rank-one tensor ``x (x) y`` acting as ``z -> <z, y> x``.

    In coordinates this is the matrix ``outer(x, conj(y))``; its
    Hilbert-Schmidt norm equals ``norm(x) * norm(y)``.
    """
    x = _as_vector(x)
    y = _as_vector(y)
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
    return np.outer(x, np.conj(y))


def hs_norm(a) -> float:
    """Hilbert-Schmidt norm of a (real or complex) operator matrix.

    Equals the Frobenius norm, i.e. the root of the sum of squared singular
    values.
    """
    return float(np.linalg.norm(_as_square(a)))


def sym_eigen(s) -> EigenSystem:
    """Eigendecomposition of a symmetric positive semidefinite matrix.

    Eigenvalues are returned in descending order.  Values within
    ``1e-12 * scale`` of zero (including small negatives from rounding) are
    clipped to exactly zero, where ``scale = max(1, spectral radius)``;
    eigenvalues below ``-1e-8 * scale`` indicate a genuinely indefinite
    matrix and raise ``ValueError``.
    """
    s = np.asarray(_as_square(s), dtype=float)
    scale = max(1.0, float(np.abs(s).max()))
    if float(np.abs(s - s.T).max()) > _SYM_TOL * scale:
        raise ValueError("matrix is not symmetric within tolerance")
    values, vectors = np.linalg.eigh(s)
    values = values[::-1].copy()
    vectors = vectors[:, ::-1].copy()
    vscale = max(1.0, float(np.abs(values).max()))
    if float(values.min()) < -_EIG_NEG_TOL * vscale:
        raise ValueError(
            f"matrix has a negative eigenvalue ({values.min():.3e}); "
            "expected positive semidefinite input"
        )
    values[values < _EIG_ZERO_TOL * vscale] = 0.0
    # deterministic sign: first nonzero coordinate of each eigenvector positive
    for k in range(vectors.shape[1]):
        col = vectors[:, k]
        nz = np.flatnonzero(np.abs(col) > 1e-12)
        if nz.size and col[nz[0]] < 0:
            vectors[:, k] = -col
    return EigenSystem(values=values, vectors=vectors)


def inv_sqrt(s, eps: float = 1e-12) -> np.ndarray:
    """Symmetric inverse square root ``R`` with ``R S R = I``.

    ``s`` must be symmetric positive definite; a smallest eigenvalue at or
    below ``eps`` raises :class:`~fperiod.errors.DegeneracyError`.
    """
    eig = sym_eigen(s)
    smallest = float(eig.values[-1])
    if smallest <= eps:
        raise DegeneracyError(
            f"smallest eigenvalue {smallest:.3e} <= eps={eps:.1e}: "
            "matrix is numerically rank deficient"
        )
    w = 1.0 / np.sqrt(eig.values)
    return (eig.vectors * w) @ eig.vectors.T
