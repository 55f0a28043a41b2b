"""Peak-position estimators for symmetric single-peak windows.

Three estimators share one window and one convention for positions:

* ``centroid``: amplitude-weighted mean of the sample positions.
* ``mim1``: repeatedly mirrors every sample about the current estimate,
  interpolates the spectrum at the mirrored position and takes the centroid
  of original plus mirrored points.
* ``mim2``: repeatedly picks the position minimising the squared mismatch
  between mirrored amplitudes and the spectrum interpolated at the mirrored
  positions, with the bracketing intervals frozen at the previous estimate.

Interpolation happens inside the selected window only. Mirrors falling
outside the window keep their own amplitude in ``mim1`` and are dropped in
``mim2``. Both iterations start at the window maximum, a grid point, so the
first mirrors land exactly on samples; ``mim2`` then takes the mean of the
two adjacent segment slopes instead of favouring one side.

The closed-form ``mim2`` step differentiates

    S(p) = sum_i (a_i (2p - x_i - x_j) + y_j - y_i)^2,   a_i = (y_{j+1} - y_j) / dx

which gives ``p = [sum a_i^2 (x_i + x_j) + sum a_i (y_i - y_j)] / (2 sum a_i^2)``.
Dropping the factor 2 in the denominator puts the estimate near twice the
peak position; ``mirrorpeak.checks.check_mim2_oracle`` checks the form in use against a
brute-force grid minimisation of ``residual_s``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateWindowError,
    FlatSpectrumError,
    InternalLogicError,
    NoOverlapError,
)
from .selection import Window, argmax_position
from .signal import Spectrum

__all__ = [
    "Interpolation",
    "IterationConfig",
    "PeakEstimate",
    "MirrorPoint",
    "OUT_OF_RANGE",
    "centroid",
    "mirror",
    "locate_interval",
    "lerp",
    "mirror_points",
    "mim1_step",
    "mim1",
    "mim2_step",
    "mim2",
    "residual_s",
    "ESTIMATORS",
]

GUARD = 1e-300
GRID_SLACK = 1e-9  # in units of dx


class Interpolation(enum.Enum):
    LINEAR = "linear"


class _OutOfRange:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "OUT_OF_RANGE"

    def __bool__(self):
        return False


OUT_OF_RANGE = _OutOfRange()


@dataclass(frozen=True)
class IterationConfig:
    tol: float = 1e-7
    max_iters: int = 100
    interpolation: Interpolation = Interpolation.LINEAR

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if self.interpolation is not Interpolation.LINEAR:
            raise NotImplementedError(f"{self.interpolation} interpolation")


@dataclass(frozen=True)
class PeakEstimate:
    """Result of an estimator run.

    ``history`` holds the iterates after each step; ``initial`` is the
    starting position, so ``history[0]`` is compared against it.
    """

    x_p: float
    iterations: int = 0
    converged: bool = True
    oscillating: bool = False
    history: tuple[float, ...] = ()
    initial: float | None = None


@dataclass(frozen=True)
class MirrorPoint:
    index: int
    x_mirror: float
    y_mirror: float
    interval: int | _OutOfRange
    y_interp: float | None


def centroid(window: Window) -> float:
    s = window.spectrum
    y = s.y
    total = float(np.sum(y))
    if abs(total) < GUARD:
        raise DegenerateWindowError("amplitudes sum to zero")
    return float(np.dot(s.x, y) / total)


def mirror(x_k, x_p):
    return 2.0 * x_p - x_k


def _grid_coordinate(spectrum: Spectrum, x):
    """Fractional grid index of ``x``, snapped to integers within the slack."""
    u = (np.asarray(x, dtype=float) - spectrum.x0) / spectrum.dx
    r = np.rint(u)
    return np.where(np.abs(u - r) <= GRID_SLACK, r, u)


def _brackets(spectrum: Spectrum, x):
    """Vectorised ``locate_interval``: (in_range mask, j, fractional offset)."""
    u = _grid_coordinate(spectrum, x)
    n = len(spectrum)
    inside = (u >= 0) & (u <= n - 1)
    j = np.clip(np.floor(u), 0, n - 2).astype(np.intp)
    return inside, j, u - j


def locate_interval(spectrum: Spectrum, x_prime: float):
    """Index ``j`` with ``x_j <= x_prime <= x_{j+1}``, or ``OUT_OF_RANGE``.

    A position exactly on a grid point takes the interval to its right,
    except at the last sample.
    """
    inside, j, _ = _brackets(spectrum, x_prime)
    return int(j) if inside else OUT_OF_RANGE


def lerp(spectrum: Spectrum, j: int, x_prime: float) -> float:
    n = len(spectrum)
    if not 0 <= j <= n - 2:
        raise InternalLogicError(f"interval {j} outside 0..{n - 2}")
    t = float(_grid_coordinate(spectrum, x_prime)) - j
    if not -GRID_SLACK <= t <= 1 + GRID_SLACK:
        raise InternalLogicError(f"{x_prime} is not inside interval {j}")
    y = spectrum.y
    return float(y[j] + (y[j + 1] - y[j]) * t)


def mirror_points(window: Window, x_p: float) -> list[MirrorPoint]:
    """Mirror and interpolating points of every window sample about ``x_p``."""
    s = window.spectrum
    out = []
    for i, (x_i, y_i) in enumerate(zip(s.x.tolist(), s.y.tolist())):
        xm = mirror(x_i, x_p)
        j = locate_interval(s, xm)
        yi = None if j is OUT_OF_RANGE else lerp(s, j, xm)
        out.append(MirrorPoint(i, xm, y_i, j, yi))
    return out


def mim1_step(window: Window, x_p_prev: float) -> float:
    s = window.spectrum
    x, y = s.x, s.y
    xm = mirror(x, x_p_prev)
    inside, j, t = _brackets(s, xm)
    # out-of-range mirrors keep the amplitude of the sample they came from
    ym = np.where(inside, y[j] + (y[j + 1] - y[j]) * t, y)
    total = float(np.sum(y) + np.sum(ym))
    if abs(total) < GUARD:
        raise DegenerateWindowError("combined amplitudes sum to zero")
    return float((np.dot(x, y) + np.dot(xm, ym)) / total)


def _mim2_terms(window: Window, x_p_prev: float):
    """Per-sample terms of the least-squares step for mirrors about ``x_p_prev``.

    A mirror sitting exactly on an interior sample has two bracketing
    segments; its slope is their average so that reflecting the window
    reflects the estimate.
    """
    s = window.spectrum
    x, y = s.x, s.y
    n = len(s)
    u = _grid_coordinate(s, mirror(x, x_p_prev))
    inside = (u >= 0) & (u <= n - 1)
    if not inside.any():
        raise NoOverlapError(f"no mirror about {x_p_prev} falls inside the window")
    x, y, u = x[inside], y[inside], u[inside]
    j = np.clip(np.floor(u), 0, n - 2).astype(np.intp)
    a = (s.y[j + 1] - s.y[j]) / s.dx
    on_grid = (u == j) & (j > 0)
    if on_grid.any():
        k = j[on_grid]
        a[on_grid] = (s.y[k + 1] - s.y[k - 1]) / (2.0 * s.dx)
    xj = s.x0 + j * s.dx
    return x, y, xj, s.y[j], a


def mim2_step(window: Window, x_p_prev: float) -> float:
    x, y, xj, yj, a = _mim2_terms(window, x_p_prev)
    a2 = a * a
    den = 2.0 * float(np.sum(a2))
    if den < GUARD:
        raise FlatSpectrumError("all bracketing segments are flat")
    return float((np.dot(a2, x + xj) + np.dot(a, y - yj)) / den)


def residual_s(window: Window, x_p, frozen_at: float | None = None):
    """Squared mismatch between interpolating and mirroring amplitudes.

    Returns ``(S, count)``. Without ``frozen_at`` only mirrors about ``x_p``
    that land inside the window count. With ``frozen_at`` the bracketing
    intervals (and the set of counted samples) come from mirrors about
    ``frozen_at`` and each segment is extended linearly (a mirror on an
    interior sample uses the mean slope of its two segments), which is the
    objective one ``mim2_step`` minimises. ``x_p`` may be an array in that
    case, and ``S`` is then an array too.
    """
    if frozen_at is not None:
        s = window.spectrum
        xs, ys = s.x.tolist(), s.y.tolist()
        p = np.asarray(x_p, dtype=float)
        S = np.zeros_like(p)
        count = 0
        for x_i, y_i in zip(xs, ys):
            xm = mirror(x_i, frozen_at)
            j = locate_interval(s, xm)
            if j is OUT_OF_RANGE:
                continue
            count += 1
            slope = (ys[j + 1] - ys[j]) / (xs[j + 1] - xs[j])
            if j > 0 and abs(xm - xs[j]) <= GRID_SLACK * s.dx:
                # mirror on an interior sample: average the slopes on both sides
                slope = 0.5 * (slope + (ys[j] - ys[j - 1]) / (xs[j] - xs[j - 1]))
            # line through the frozen segment, evaluated at the mirror about x_p
            y_interp = ys[j] + slope * (mirror(x_i, p) - xs[j])
            S = S + (y_interp - y_i) ** 2
        return (float(S) if S.ndim == 0 else S), count

    s = window.spectrum
    x, y = s.x, s.y
    xm = mirror(x, float(x_p))
    inside, j, t = _brackets(s, xm)
    if not inside.any():
        return 0.0, 0
    yi = y[j] + (y[j + 1] - y[j]) * t
    r = (yi - y)[inside]
    return float(np.dot(r, r)), int(inside.sum())


def _iterate(step, window: Window, cfg: IterationConfig) -> PeakEstimate:
    _, x0 = argmax_position(window.spectrum)
    history = []
    prev = x0
    for k in range(1, cfg.max_iters + 1):
        cur = step(window, prev)
        history.append(cur)
        if not math.isfinite(cur):
            raise DegenerateWindowError(f"non-finite iterate {cur}")
        if abs(cur - prev) < cfg.tol:
            return PeakEstimate(cur, k, True, False, tuple(history), x0)
        prev = cur

    x_p = history[-1]
    oscillating = False
    if len(history) >= 3 and abs(history[-1] - history[-3]) < cfg.tol:
        oscillating = True
        x_p = 0.5 * (history[-1] + history[-2])
    return PeakEstimate(x_p, cfg.max_iters, False, oscillating, tuple(history), x0)


def mim1(window: Window, cfg: IterationConfig | None = None) -> PeakEstimate:
    """Iterated mirror-and-centroid estimate, started at the window maximum."""
    return _iterate(mim1_step, window, cfg or IterationConfig())


def mim2(window: Window, cfg: IterationConfig | None = None) -> PeakEstimate:
    """Iterated least-squares mirror-matching estimate, started at the window maximum.

    A run that ends at ``max_iters`` cycling between two values is flagged
    ``oscillating`` and reports the mean of the last two iterates.
    """
    return _iterate(mim2_step, window, cfg or IterationConfig())


def _centroid_estimate(window: Window, cfg: IterationConfig | None = None) -> PeakEstimate:
    return PeakEstimate(centroid(window))


ESTIMATORS = {
    "centroid": _centroid_estimate,
    "mim1": mim1,
    "mim2": mim2,
}
