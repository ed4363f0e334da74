"""Shared domain types, error taxonomy and elementary metrics.

Everything downstream (kernel construction, the splitting solver, the
envelope pipeline) trades in the two value types defined here: ``Signal``,
a uniformly sampled real sequence with rate metadata, and ``BoxConstraint``,
per-sample lower/upper bounds where ``-inf`` / ``+inf`` mean "unbounded on
that side".
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ErrorKind",
    "EnvelofitError",
    "LengthMismatchError",
    "EmptySignalError",
    "InfeasibleBoundsError",
    "NonPositiveParameterError",
    "SpectrumNotPositiveError",
    "NoConvergenceError",
    "IoOrFormatError",
    "Signal",
    "BoxConstraint",
    "mse",
    "project_box",
]


class ErrorKind(enum.Enum):
    LENGTH_MISMATCH = "length_mismatch"
    EMPTY_SIGNAL = "empty_signal"
    INFEASIBLE_BOUNDS = "infeasible_bounds"
    NON_POSITIVE_PARAMETER = "non_positive_parameter"
    SPECTRUM_NOT_POSITIVE = "spectrum_not_positive"
    NO_CONVERGENCE = "no_convergence"
    IO_OR_FORMAT = "io_or_format"


class EnvelofitError(Exception):
    """Base class; every failure carries exactly one :class:`ErrorKind`."""

    kind: ErrorKind


class LengthMismatchError(EnvelofitError):
    kind = ErrorKind.LENGTH_MISMATCH


class EmptySignalError(EnvelofitError):
    kind = ErrorKind.EMPTY_SIGNAL


class InfeasibleBoundsError(EnvelofitError):
    kind = ErrorKind.INFEASIBLE_BOUNDS


class NonPositiveParameterError(EnvelofitError):
    kind = ErrorKind.NON_POSITIVE_PARAMETER


class SpectrumNotPositiveError(EnvelofitError):
    kind = ErrorKind.SPECTRUM_NOT_POSITIVE


class NoConvergenceError(EnvelofitError):
    kind = ErrorKind.NO_CONVERGENCE


class IoOrFormatError(EnvelofitError):
    kind = ErrorKind.IO_OR_FORMAT


def _frozen_array(x, name: str) -> np.ndarray:
    a = np.asarray(x, dtype=float)
    if a.ndim != 1:
        raise IoOrFormatError(f"{name} must be one-dimensional, got shape {a.shape}")
    a = a.copy()
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class Signal:
    """Uniformly sampled real sequence.

    Parameters
    ----------
    samples : array-like
        Finite real values, length >= 1.
    sample_rate_hz : float
        Positive sampling rate.
    t0 : float
        Start time in seconds.
    """

    samples: np.ndarray
    sample_rate_hz: float = 1.0
    t0: float = 0.0

    def __post_init__(self):
        a = _frozen_array(self.samples, "samples")
        if a.size < 1:
            raise EmptySignalError("signal must contain at least one sample")
        if not np.all(np.isfinite(a)):
            raise IoOrFormatError("signal samples must all be finite")
        if not (self.sample_rate_hz > 0):
            raise NonPositiveParameterError(
                f"sample_rate_hz must be positive, got {self.sample_rate_hz}"
            )
        object.__setattr__(self, "samples", a)

    def __len__(self) -> int:
        return self.samples.size

    @property
    def times(self) -> np.ndarray:
        """Sample instants in seconds."""
        return self.t0 + np.arange(len(self)) / self.sample_rate_hz

    def with_samples(self, samples) -> "Signal":
        """Same rate/origin, new sample values."""
        return Signal(samples, self.sample_rate_hz, self.t0)


@dataclass(frozen=True)
class BoxConstraint:
    """Per-sample interval bounds.

    ``lower[n] = -inf`` (resp. ``upper[n] = +inf``) marks the side as
    unbounded; no finite value can collide with the marker, so downstream
    case logic branches on ``isfinite`` exactly.
    """

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.asarray(self.lower, dtype=float).copy()
        hi = np.asarray(self.upper, dtype=float).copy()
        if lo.shape != hi.shape or lo.ndim != 1:
            raise LengthMismatchError(
                f"bound shapes differ: {lo.shape} vs {hi.shape}"
            )
        if np.any(np.isnan(lo)) or np.any(np.isnan(hi)):
            raise InfeasibleBoundsError("bounds must not contain NaN")
        if np.any(lo > hi):
            n = int(np.argmax(lo > hi))
            raise InfeasibleBoundsError(
                f"lower[{n}]={lo[n]} exceeds upper[{n}]={hi[n]}"
            )
        lo.flags.writeable = False
        hi.flags.writeable = False
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    def __len__(self) -> int:
        return self.lower.size

    @classmethod
    def interval(cls, n: int, lower: float, upper: float) -> "BoxConstraint":
        """Constant bounds broadcast to length ``n``."""
        return cls(np.full(n, lower), np.full(n, upper))


def mse(a: Signal, b: Signal) -> float:
    """Mean of squared sample differences."""
    if len(a) != len(b):
        raise LengthMismatchError(f"lengths differ: {len(a)} vs {len(b)}")
    d = a.samples - b.samples
    return float(np.mean(d * d))


def project_box(v, box: BoxConstraint) -> np.ndarray:
    """Clamp each entry of ``v`` into its interval; infinite bounds are inert."""
    v = np.asarray(v, dtype=float)
    if v.shape != box.lower.shape:
        raise LengthMismatchError(
            f"vector length {v.shape} does not match bounds {box.lower.shape}"
        )
    return np.clip(v, box.lower, box.upper)
