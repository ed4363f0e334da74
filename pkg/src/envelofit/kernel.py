"""Truncated squared-exponential Toeplitz covariance and its circulant embedding.

The covariance of the smoothness prior is a banded symmetric Toeplitz matrix
with first row ``r[0] = 1 + eps``, ``r[k] = exp(-k^2 / sigma^2)`` for lags up
to a half-width ``K`` set by the truncation threshold ``tau``.  Embedding that
band into an ``(N + K) x (N + K)`` circulant makes both the matrix-vector
product and the resolvent ``(I + alpha C)^-1`` diagonal in the Fourier basis,
so each costs one FFT pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.fft
import scipy.linalg

from .core import (
    LengthMismatchError,
    NonPositiveParameterError,
    SpectrumNotPositiveError,
)

__all__ = [
    "KernelSpec",
    "ToeplitzBand",
    "CirculantOperator",
    "band_half_width",
    "build_band",
    "embed_circulant",
    "apply_circulant",
    "apply_resolvent",
    "apply_toeplitz",
]

#: Resolvent denominators 1 + alpha*lambda_i below this are treated as singular.
SPECTRUM_FLOOR = 1e-12

#: Default truncation threshold / diagonal jitter (not pinned by the model;
#: see CLI help).
DEFAULT_TAU = 1e-3
DEFAULT_EPSILON = 0.0


@dataclass(frozen=True)
class KernelSpec:
    """Width ``sigma`` (in samples), truncation threshold ``tau``, jitter ``epsilon``."""

    sigma: float
    tau: float = DEFAULT_TAU
    epsilon: float = DEFAULT_EPSILON

    def __post_init__(self):
        if not (self.sigma > 0):
            raise NonPositiveParameterError(f"sigma must be > 0, got {self.sigma}")
        if not (0 < self.tau <= 1):
            raise NonPositiveParameterError(f"tau must be in (0, 1], got {self.tau}")
        if not (self.epsilon >= 0):
            raise NonPositiveParameterError(
                f"epsilon must be >= 0, got {self.epsilon}"
            )


@dataclass(frozen=True)
class ToeplitzBand:
    """First row of the banded covariance, out to half-width ``half_width``."""

    first_row: np.ndarray  # length half_width + 1
    half_width: int
    n: int

    def dense(self) -> np.ndarray:
        """Full N x N matrix; test/diagnostic use only."""
        col = np.zeros(self.n)
        col[: self.half_width + 1] = self.first_row
        return scipy.linalg.toeplitz(col)


@dataclass(frozen=True)
class CirculantOperator:
    """Spectral form of the minimal circulant extension of a ToeplitzBand."""

    size: int
    eigenvalues: np.ndarray  # real, length size

    def first_row(self) -> np.ndarray:
        """Recover the circulant's first row from the spectrum."""
        return scipy.fft.irfft(self._rfft_eigs(), n=self.size)

    def _rfft_eigs(self) -> np.ndarray:
        # eigenvalues are the full DFT of an even-symmetric real row, so the
        # rfft half-spectrum is just a prefix
        return self.eigenvalues[: self.size // 2 + 1]


def band_half_width(spec: KernelSpec) -> int:
    """Largest lag ``k`` with ``exp(-k^2 / sigma^2) >= tau``."""
    if spec.tau == 1.0:
        return 0
    k = int(math.floor(spec.sigma * math.sqrt(math.log(1.0 / spec.tau))))
    # guard the float boundary: the closed form can land one off
    while math.exp(-((k + 1) ** 2) / spec.sigma**2) >= spec.tau:
        k += 1
    while k > 0 and math.exp(-(k**2) / spec.sigma**2) < spec.tau:
        k -= 1
    return k


def build_band(spec: KernelSpec, n: int) -> ToeplitzBand:
    """Banded first row of the covariance for a length-``n`` signal."""
    if n < 1:
        raise NonPositiveParameterError(f"signal length must be >= 1, got {n}")
    k = band_half_width(spec)
    if k >= n:
        raise LengthMismatchError(
            f"kernel band half-width {k} does not fit signal length {n}; "
            f"reduce sigma or increase tau"
        )
    lags = np.arange(k + 1, dtype=float)
    row = np.exp(-(lags**2) / spec.sigma**2)
    row[0] = 1.0 + spec.epsilon
    return ToeplitzBand(first_row=row, half_width=k, n=n)


def embed_circulant(band: ToeplitzBand, size: int | None = None) -> CirculantOperator:
    """Circulant extension whose top-left N x N block equals the Toeplitz band.

    ``size=None`` gives the minimal extension ``M = N + K``.  Any larger size
    also embeds the band exactly (extra zeros in the first row) and may be
    chosen for FFT efficiency.
    """
    k = band.half_width
    m_min = band.n + k
    m = m_min if size is None else int(size)
    if m < m_min:
        raise LengthMismatchError(
            f"circulant size {m} below minimal embedding size {m_min}"
        )
    row = np.zeros(m)
    row[: k + 1] = band.first_row
    if k > 0:
        row[-k:] = band.first_row[1:][::-1]
    eig = scipy.fft.rfft(row)
    # even-symmetric row => real spectrum; discard round-off imaginary part
    half = eig.real
    if m % 2 == 0:
        full = np.concatenate([half, half[-2:0:-1]])
    else:
        full = np.concatenate([half, half[-1:0:-1]])
    full.flags.writeable = False
    return CirculantOperator(size=m, eigenvalues=full)


def _check_length(op: CirculantOperator, v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape != (op.size,):
        raise LengthMismatchError(
            f"vector length {v.shape} does not match circulant size {op.size}"
        )
    return v


def apply_circulant(op: CirculantOperator, v) -> np.ndarray:
    """Spectral matrix-vector product ``C~ v``."""
    v = _check_length(op, v)
    return scipy.fft.irfft(scipy.fft.rfft(v) * op._rfft_eigs(), n=op.size)


def apply_resolvent(
    op: CirculantOperator, alpha: float, v, *, clamp: bool = False
) -> np.ndarray:
    """Spectral solve ``(I + alpha C~)^-1 v``.

    With ``clamp=True`` near-singular spectral denominators are floored
    instead of raising; exploratory use only.
    """
    if alpha < 0:
        raise NonPositiveParameterError(f"alpha must be >= 0, got {alpha}")
    v = _check_length(op, v)
    denom = 1.0 + alpha * op.eigenvalues[: op.size // 2 + 1]
    if clamp:
        denom = np.maximum(denom, SPECTRUM_FLOOR)
    elif np.min(denom) <= SPECTRUM_FLOOR:
        raise SpectrumNotPositiveError(
            f"resolvent denominator min {np.min(denom):.3e} <= {SPECTRUM_FLOOR:.0e}; "
            f"kernel spectrum too negative for alpha={alpha}"
        )
    return scipy.fft.irfft(scipy.fft.rfft(v) / denom, n=op.size)


def apply_toeplitz(band: ToeplitzBand, z) -> np.ndarray:
    """Banded product ``C z`` (zero boundary, direct convolution over the band)."""
    z = np.asarray(z, dtype=float)
    if z.shape != (band.n,):
        raise LengthMismatchError(
            f"vector length {z.shape} does not match band size {band.n}"
        )
    kern = np.concatenate([band.first_row[1:][::-1], band.first_row])
    k = band.half_width
    return np.convolve(z, kern, mode="full")[k : k + band.n]
