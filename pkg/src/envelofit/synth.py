"""Synthetic trial generator: warped-sinusoid smooth part plus GP transient.

The smooth component is a time-warped cosine with a slowly varying amplitude;
warp, magnitude and transient driver are all draws from squared-exponential
Gaussian processes on the sample grid.  Trials are bitwise reproducible from
the seed: the repo-wide RNG is ``numpy.random.default_rng`` (PCG64) and the
draw order is warp, magnitude, transient.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import (
    LengthMismatchError,
    NonPositiveParameterError,
    Signal,
    SpectrumNotPositiveError,
)

__all__ = [
    "GpParams",
    "TrialSpec",
    "Trial",
    "sample_gp",
    "make_smooth",
    "nonlinearity_q",
    "generate_trial",
]

DENSE_GP_LIMIT = 4096


@dataclass(frozen=True)
class GpParams:
    """Squared-exponential covariance ``c0 * exp(-dt^2 / c1) + c2 * I``.

    ``c1`` is a squared length-scale in seconds^2; ``c2`` is white jitter.
    """

    c0: float
    c1: float
    c2: float = 0.0

    def __post_init__(self):
        if not (self.c0 > 0 and self.c1 > 0 and self.c2 >= 0):
            raise NonPositiveParameterError(
                f"need c0 > 0, c1 > 0, c2 >= 0; got {self.c0}, {self.c1}, {self.c2}"
            )


@dataclass(frozen=True)
class TrialSpec:
    seed: int = 0
    fs_hz: float = 10.0
    duration_s: float = 200.0
    warp: GpParams = field(default_factory=lambda: GpParams(25.0, 500.0, 1e-3))
    mag: GpParams = field(default_factory=lambda: GpParams(25.0, 2500.0, 5e-4))
    transient: GpParams = field(default_factory=lambda: GpParams(0.1, 10.0, 1e-5))

    def __post_init__(self):
        if not (self.fs_hz > 0 and self.duration_s > 0):
            raise NonPositiveParameterError(
                f"fs_hz and duration_s must be positive, got {self.fs_hz}, {self.duration_s}"
            )

    @property
    def n(self) -> int:
        return int(round(self.duration_s * self.fs_hz))


@dataclass(frozen=True)
class Trial:
    smooth: Signal
    transient: Signal
    observation: Signal


def sample_gp(p: GpParams, n: int, fs: float,
              rng: int | np.random.Generator = 0) -> np.ndarray:
    """One draw from the zero-mean GP on the uniform grid ``t_i = i / fs``.

    ``rng`` is a seed or an existing generator.  Dense Cholesky; the ``c2``
    jitter keeps the factorization well posed at desk scale.
    """
    rng = np.random.default_rng(rng)
    if n < 1:
        raise NonPositiveParameterError(f"n must be >= 1, got {n}")
    if n > DENSE_GP_LIMIT:
        raise LengthMismatchError(
            f"dense GP sampling limited to n <= {DENSE_GP_LIMIT}, got {n}"
        )
    t = np.arange(n) / fs
    dt = t[:, None] - t[None, :]
    cov = p.c0 * np.exp(-(dt * dt) / p.c1) + p.c2 * np.eye(n)
    try:
        chol = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError as exc:
        raise SpectrumNotPositiveError(
            f"GP covariance factorization failed (c0={p.c0}, c1={p.c1}, c2={p.c2})"
        ) from exc
    return chol @ rng.standard_normal(n)


def make_smooth(s, m, fs: float) -> np.ndarray:
    """Warped cosine with modulated amplitude: ``cos(0.5*pi*(t + s)) * (0.05*m + 1)``."""
    s = np.asarray(s, dtype=float)
    m = np.asarray(m, dtype=float)
    if s.shape != m.shape:
        raise LengthMismatchError(f"warp/magnitude lengths differ: {s.shape} vs {m.shape}")
    t = np.arange(s.size) / fs
    return np.cos(0.5 * np.pi * (t + s)) * (0.05 * m + 1.0)


def nonlinearity_q(u):
    """Odd pointwise squashing: identity outside [-1, 1], signed square inside."""
    u = np.asarray(u, dtype=float)
    out = np.where(np.abs(u) > 1.0, u, np.sign(u) * u * u)
    return out if out.ndim else float(out)


def generate_trial(spec: TrialSpec) -> Trial:
    """Deterministic trial from the seed; observation = smooth + transient exactly."""
    rng = np.random.default_rng(spec.seed)
    n = spec.n
    s = sample_gp(spec.warp, n, spec.fs_hz, rng)
    m = sample_gp(spec.mag, n, spec.fs_hz, rng)
    f = sample_gp(spec.transient, n, spec.fs_hz, rng)
    smooth = make_smooth(s, m, spec.fs_hz)
    transient = nonlinearity_q(f)
    obs = smooth + transient
    return Trial(
        smooth=Signal(smooth, spec.fs_hz),
        transient=Signal(transient, spec.fs_hz),
        observation=Signal(obs, spec.fs_hz),
    )
