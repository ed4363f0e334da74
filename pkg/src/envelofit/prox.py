"""Closed-form proximity and reflected-proximity maps for the dual splitting.

The dual objective couples a circulant quadratic with a separable piecewise
quadratic; this module implements the scalar proximity operator of that
piecewise term, its vectorized change-of-variables form ``prox_r``, and the
reflected map ``reflect_g`` used inside the iteration.  All maps are pure and
elementwise.

A note on case ordering: with thresholds ``c = lam*(y - (1 + alpha/lam)*a)``
and ``d = lam*(y - (1 + alpha/lam)*b)`` and ``a <= b``, we always have
``d <= c``, so the interior branch fires on ``d <= t <= c``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import BoxConstraint, InfeasibleBoundsError, LengthMismatchError

__all__ = ["ProxParams", "prox_scalar_q", "prox_r", "reflect_g"]


@dataclass(frozen=True)
class ProxParams:
    """Precomputed per-sample thresholds for the separable dual prox.

    ``c[n]`` is ``+inf`` where the lower bound is ``-inf``; ``d[n]`` is
    ``-inf`` where the upper bound is ``+inf``, so one-sided boxes simply
    disable the corresponding outer branch.
    """

    lam: float
    alpha: float
    y: np.ndarray
    box: BoxConstraint
    c: np.ndarray = field(init=False)
    d: np.ndarray = field(init=False)

    def __post_init__(self):
        if not (self.lam > 0 and self.alpha > 0):
            raise InfeasibleBoundsError(
                f"lam and alpha must be positive, got {self.lam}, {self.alpha}"
            )
        y = np.asarray(self.y, dtype=float)
        if y.shape != self.box.lower.shape:
            raise LengthMismatchError(
                f"y length {y.shape} does not match bounds {self.box.lower.shape}"
            )
        a, b = self.box.lower, self.box.upper
        scale = 1.0 + self.alpha / self.lam
        c = np.where(np.isfinite(a), self.lam * (y - scale * a), np.inf)
        d = np.where(np.isfinite(b), self.lam * (y - scale * b), -np.inf)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)


def prox_scalar_q(s: float, a: float, b: float, alpha: float) -> float:
    """Proximity operator of the scalar piecewise-quadratic penalty.

    Returns ``s - alpha*a`` below the interval, ``s / (1 + alpha)`` inside
    ``[(1+alpha)*a, (1+alpha)*b]``, and ``s - alpha*b`` above; infinite
    bounds drop the corresponding outer branch.
    """
    if a > b:
        raise InfeasibleBoundsError(f"need a <= b, got a={a}, b={b}")
    if np.isfinite(a) and s < (1.0 + alpha) * a:
        return s - alpha * a
    if np.isfinite(b) and s > (1.0 + alpha) * b:
        return s - alpha * b
    return s / (1.0 + alpha)


def prox_r(t, p: ProxParams) -> np.ndarray:
    """Vectorized prox of the dual data/constraint term at ``t``."""
    t = np.asarray(t, dtype=float)
    if t.shape != p.y.shape:
        raise LengthMismatchError(f"t length {t.shape} != {p.y.shape}")
    mid = (p.alpha * p.y + t) / (1.0 + p.alpha / p.lam)
    low = t + p.alpha * p.box.upper  # fires when t < d, i.e. b finite
    high = t + p.alpha * p.box.lower  # fires when t > c, i.e. a finite
    return np.select([t < p.d, t > p.c], [low, high], default=mid)


def reflect_g(t, t_tilde, p: ProxParams) -> tuple[np.ndarray, np.ndarray]:
    """Reflected prox ``(2 J - I)`` of the separable dual term.

    The tail block's prox is the zero map, so its reflection is plain
    negation: the second return value is ``-t_tilde``.
    """
    t = np.asarray(t, dtype=float)
    if t.shape != p.y.shape:
        raise LengthMismatchError(f"t length {t.shape} != {p.y.shape}")
    mid = (2.0 * p.alpha * p.y + (1.0 - p.alpha / p.lam) * t) / (
        1.0 + p.alpha / p.lam
    )
    low = t + 2.0 * p.alpha * p.box.upper
    high = t + 2.0 * p.alpha * p.box.lower
    v = np.select([t < p.d, t > p.c], [low, high], default=mid)
    return v, -np.asarray(t_tilde, dtype=float)
