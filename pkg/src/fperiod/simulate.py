"""Data-generating processes and the Monte Carlo harness.

The noise is a first-order autoregression ``X_t = rho(X_{t-1}) + eps_t``
started at ``X_0 = eps_0`` (no further burn-in), with innovations drawn
either from a zero-mean Gaussian with prescribed covariance eigenvalues or
by resampling rows of a user-supplied pool.  A periodic signal
``s(t) = a * cos(2*pi*t/d)`` times a unit direction can be superimposed; the
period is either fixed or drawn as ``2 + Poisson(lambda)`` per realization.

Determinism contract: a spec (including its seed) maps to one series,
byte-for-byte.  The seed feeds two independent child streams (innovations
and the period draw), so the presence or amplitude of the signal never
perturbs the noise path.  The Monte Carlo driver derives one child seed per
replication from ``(seed, replication index)`` and reduces results by index,
so thread count and completion order cannot change the outcome.
"""

from __future__ import annotations

import warnings as _warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .distributions import gumbel_quantile
from .model import operator_norm
from .testing import TestOptions, tn_test

__all__ = [
    "SignalSpec",
    "GaussianInnovations",
    "BootstrapInnovations",
    "DgpSpec",
    "McResult",
    "gen_far1",
    "draw_period",
    "bootstrap_innovations",
    "monte_carlo",
]


@dataclass(frozen=True)
class SignalSpec:
    """Cosine signal ``a * cos(2*pi*t/d)`` along a unit direction.

    Exactly one of ``period`` (fixed ``d >= 2``) or ``poisson_lambda``
    (draw ``d = 2 + Poisson(lambda)`` per realization) must be given.
    ``direction=None`` means the first basis vector.
    """

    amplitude: float
    period: int | None = None
    poisson_lambda: float | None = None
    direction: np.ndarray | None = None

    def __post_init__(self):
        if self.amplitude < 0:
            raise ValueError("amplitude must be nonnegative")
        if (self.period is None) == (self.poisson_lambda is None):
            raise ValueError("give exactly one of period or poisson_lambda")
        if self.period is not None and int(self.period) < 2:
            raise ValueError("period must be at least 2")
        if self.poisson_lambda is not None and self.poisson_lambda <= 0:
            raise ValueError("poisson_lambda must be positive")
        if self.direction is not None:
            d = np.asarray(self.direction, dtype=float)
            if d.ndim != 1 or abs(float(np.linalg.norm(d)) - 1.0) > 1e-8:
                raise ValueError("direction must be a unit-norm vector")


@dataclass(frozen=True)
class GaussianInnovations:
    """Zero-mean Gaussian innovations with the given covariance eigenvalues.

    The eigenvalues sit on the coordinate axes of the working basis, i.e. the
    covariance is ``diag(eigenvalues)``.
    """

    eigenvalues: tuple

    def __post_init__(self):
        lam = tuple(float(v) for v in self.eigenvalues)
        if not lam or any(v <= 0 for v in lam):
            raise ValueError("eigenvalues must be a nonempty positive sequence")
        if any(b > a for a, b in zip(lam, lam[1:])):
            raise ValueError("eigenvalues must be non-increasing")
        object.__setattr__(self, "eigenvalues", lam)

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    def draw(self, count: int, rng: np.random.Generator) -> np.ndarray:
        scale = np.sqrt(np.asarray(self.eigenvalues))
        return rng.standard_normal((count, self.dim)) * scale


@dataclass(frozen=True)
class BootstrapInnovations:
    """Innovations resampled uniformly with replacement from a pool of rows."""

    pool: np.ndarray

    def __post_init__(self):
        pool = np.asarray(self.pool, dtype=float)
        if pool.ndim == 1:
            pool = pool[:, None]
        if pool.ndim != 2 or pool.size == 0:
            raise ValueError("pool must be a nonempty n x p array")
        object.__setattr__(self, "pool", pool)

    @property
    def dim(self) -> int:
        return self.pool.shape[1]

    def draw(self, count: int, rng: np.random.Generator) -> np.ndarray:
        return bootstrap_innovations(self.pool, count, rng)


@dataclass(frozen=True)
class DgpSpec:
    """One synthetic-series recipe: length, operator, innovations, signal, seed."""

    n: int
    rho: np.ndarray
    innovations: GaussianInnovations | BootstrapInnovations
    signal: SignalSpec | None = None
    seed: int = 0


@dataclass(frozen=True)
class McResult:
    """Empirical rejection rates per significance level.

    ``per_alpha`` maps each level to the mean rejection indicator over the
    successful replications; ``standard_errors`` holds the binomial standard
    error of each rate.
    """

    replications: int
    per_alpha: dict
    standard_errors: dict
    failures: int = 0

    def as_dict(self) -> dict:
        return {
            "replications": self.replications,
            "failures": self.failures,
            "per_alpha": {str(a): r for a, r in self.per_alpha.items()},
            "standard_errors": {str(a): s for a, s in self.standard_errors.items()},
        }


def bootstrap_innovations(pool, count: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``count`` rows uniformly with replacement from a nonempty pool."""
    p = np.asarray(pool, dtype=float)
    if p.ndim == 1:
        p = p[:, None]
    if p.ndim != 2 or p.size == 0:
        raise ValueError("pool must be a nonempty n x p array")
    if count < 0:
        raise ValueError("count must be nonnegative")
    return p[rng.integers(0, p.shape[0], size=int(count))]


def draw_period(poisson_lambda: float, rng: np.random.Generator, size=None):
    """Random period ``2 + Poisson(lambda)``; always at least 2."""
    if poisson_lambda <= 0:
        raise ValueError("poisson_lambda must be positive")
    draw = rng.poisson(poisson_lambda, size=size)
    if size is None:
        return 2 + int(draw)
    return 2 + draw


def gen_far1(spec: DgpSpec) -> np.ndarray:
    """Generate ``Y_1..Y_n`` from the autoregression plus optional signal.

    ``X_0 = eps_0`` and ``X_t = rho(X_{t-1}) + eps_t``; the returned rows are
    ``Y_t = s(t) * direction + X_t`` for ``t = 1..n``.  Identical specs
    produce identical output; a spec differing only in signal amplitude keeps
    the exact same noise path.
    """
    n = int(spec.n)
    if n < 1:
        raise ValueError("need n >= 1")
    if not isinstance(spec.innovations, (GaussianInnovations, BootstrapInnovations)):
        raise TypeError(f"unsupported innovation source: {type(spec.innovations).__name__}")
    p = spec.innovations.dim
    rho = np.asarray(spec.rho, dtype=float)
    if rho.shape != (p, p):
        raise ValueError(f"operator shape {rho.shape} does not match dimension {p}")
    if operator_norm(rho) >= 1.0:
        _warnings.warn(
            "generating from an operator with norm >= 1; without burn-in the "
            "series may be far from stationarity",
            stacklevel=2,
        )
    noise_ss, signal_ss = np.random.SeedSequence(spec.seed).spawn(2)
    eps = spec.innovations.draw(n + 1, np.random.default_rng(noise_ss))
    x = np.empty((n + 1, p))
    x[0] = eps[0]
    for t in range(1, n + 1):
        x[t] = rho @ x[t - 1] + eps[t]
    out = x[1:]

    sig = spec.signal
    if sig is not None and sig.amplitude > 0:
        if sig.period is not None:
            d = int(sig.period)
        else:
            d = draw_period(sig.poisson_lambda, np.random.default_rng(signal_ss))
        direction = (
            np.eye(p)[0] if sig.direction is None else np.asarray(sig.direction, float)
        )
        if direction.shape != (p,):
            raise ValueError("signal direction does not match the series dimension")
        s = sig.amplitude * np.cos(2.0 * np.pi * np.arange(1, n + 1) / d)
        out = out + np.outer(s, direction)
    return out


def _child_seed(root: int, index: int) -> int:
    ss = np.random.SeedSequence(entropy=root, spawn_key=(index,))
    return int(ss.generate_state(1, np.uint64)[0])


def monte_carlo(
    dgp: DgpSpec,
    opts: TestOptions,
    replications: int,
    alphas,
    threads: int = 1,
) -> McResult:
    """Empirical rejection rate of :func:`tn_test` over independent replications.

    Each replication re-generates the series from a child seed derived from
    ``(dgp.seed, index)`` (redrawing a Poisson period if the signal asks for
    one), runs the test, and records one rejection indicator per level in
    ``alphas``.  Results are bit-identical for a given template regardless of
    ``threads``.  Replications failing with a numeric error are counted; more
    than 1% failures aborts the run.
    """
    replications = int(replications)
    if replications < 1:
        raise ValueError("need at least one replication")
    alphas = [float(a) for a in alphas]
    if not alphas or any(not 0.0 < a < 1.0 for a in alphas):
        raise ValueError("alphas must be levels strictly in (0, 1)")
    criticals = np.array([gumbel_quantile(1.0 - a) for a in alphas])

    def run_one(index: int):
        spec = replace(dgp, seed=_child_seed(dgp.seed, index))
        try:
            report = tn_test(gen_far1(spec), opts)
        except (ValueError, FloatingPointError):
            return None
        return report.t_n > criticals

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(run_one, range(replications)))
    else:
        outcomes = [run_one(i) for i in range(replications)]

    rejected = [o for o in outcomes if o is not None]
    failures = replications - len(rejected)
    if failures > 0.01 * replications:
        raise RuntimeError(
            f"{failures} of {replications} replications failed (> 1%); aborting"
        )
    flags = np.vstack(rejected)
    m = flags.shape[0]
    rates = flags.mean(axis=0)
    ses = np.sqrt(rates * (1.0 - rates) / m)
    return McResult(
        replications=replications,
        per_alpha={a: float(r) for a, r in zip(alphas, rates)},
        standard_errors={a: float(s) for a, s in zip(alphas, ses)},
        failures=failures,
    )
