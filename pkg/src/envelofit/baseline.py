"""LTI comparators: windowed-sinc FIR filters with zero-delay application.

Linear time-invariant filtering is the natural baseline for the envelope
decomposition; a lowpass estimates the smooth component directly, a bandpass
targets the transient band.  Filters are odd-length (exact linear phase), and
application compensates the integer group delay so outputs align with the
input sample-for-sample.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.signal

from .core import LengthMismatchError, NonPositiveParameterError, Signal

__all__ = [
    "FirFilter",
    "design_fir",
    "filter_zero_delay",
    "lti_smooth_estimate",
    "default_baselines",
]

#: Default comparison curves: Hamming lowpass lengths used by the benchmark.
DEFAULT_BASELINE_LENGTHS = (101, 501, 1001, 2001)
DEFAULT_LOWPASS_CUTOFF_HZ = 0.45


@dataclass(frozen=True)
class FirFilter:
    taps: np.ndarray
    kind: str  # "lowpass" | "bandpass"
    cutoffs_hz: tuple[float, ...]
    window: str  # "hamming" | "rect"
    fs_hz: float

    @property
    def length(self) -> int:
        return self.taps.size

    @property
    def group_delay(self) -> int:
        return (self.taps.size - 1) // 2

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "cutoffs_hz": list(self.cutoffs_hz),
            "window": self.window,
            "length": self.length,
            "fs_hz": self.fs_hz,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FirFilter":
        return design_fir(
            d["kind"], tuple(d["cutoffs_hz"]), d["fs_hz"], d["length"], d["window"]
        )


_WINDOWS = {"hamming": "hamming", "rect": "boxcar"}


def design_fir(kind: str, cutoffs_hz, fs_hz: float, length: int,
               window: str = "hamming") -> FirFilter:
    """Windowed-sinc design, normalized to unit gain at DC (lowpass) or at
    the passband center (bandpass)."""
    cutoffs = tuple(float(c) for c in np.atleast_1d(cutoffs_hz))
    if fs_hz <= 0:
        raise NonPositiveParameterError(f"fs_hz must be > 0, got {fs_hz}")
    if length < 1 or length % 2 == 0:
        raise NonPositiveParameterError(f"length must be a positive odd integer, got {length}")
    if window not in _WINDOWS:
        raise NonPositiveParameterError(f"unknown window {window!r}")
    if kind == "lowpass":
        if len(cutoffs) != 1:
            raise NonPositiveParameterError("lowpass takes exactly one cutoff")
        pass_zero = True
    elif kind == "bandpass":
        if len(cutoffs) != 2 or not cutoffs[0] < cutoffs[1]:
            raise NonPositiveParameterError(
                f"bandpass needs two increasing cutoffs, got {cutoffs}"
            )
        pass_zero = False
    else:
        raise NonPositiveParameterError(f"unknown filter kind {kind!r}")
    if not all(0 < c < fs_hz / 2 for c in cutoffs):
        raise NonPositiveParameterError(
            f"cutoffs must lie in (0, fs/2) = (0, {fs_hz / 2}), got {cutoffs}"
        )
    if length == 1:
        taps = np.ones(1)
    else:
        taps = scipy.signal.firwin(
            length, cutoffs, window=_WINDOWS[window], pass_zero=pass_zero, fs=fs_hz
        )
    return FirFilter(
        taps=taps, kind=kind, cutoffs_hz=cutoffs, window=window, fs_hz=fs_hz
    )


def filter_zero_delay(f: FirFilter, x: Signal) -> Signal:
    """Convolve with symmetric edge extension and undo the group delay."""
    g = f.group_delay
    if len(x) <= g:
        raise LengthMismatchError(
            f"signal length {len(x)} must exceed filter group delay {g}"
        )
    if g == 0:
        return x.with_samples(f.taps[0] * x.samples)
    padded = np.pad(x.samples, g, mode="symmetric")
    out = scipy.signal.fftconvolve(padded, f.taps, mode="valid")
    return x.with_samples(out)


def lti_smooth_estimate(y: Signal, f: FirFilter) -> tuple[Signal, Signal]:
    """Smooth estimate = filter output; transient = remainder."""
    smooth = filter_zero_delay(f, y)
    transient = y.with_samples(y.samples - smooth.samples)
    return smooth, transient


def default_baselines(fs_hz: float,
                      lengths=DEFAULT_BASELINE_LENGTHS,
                      cutoff_hz: float = DEFAULT_LOWPASS_CUTOFF_HZ) -> list[FirFilter]:
    """The four Hamming lowpass comparison filters used by the benchmark."""
    return [design_fir("lowpass", (cutoff_hz,), fs_hz, n) for n in lengths]
