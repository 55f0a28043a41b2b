"""Ideal symmetric single-peak signals, uniform sampling and additive noise."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import InvalidRangeError, UndefinedSNRError

__all__ = [
    "ModelKind",
    "SignalModel",
    "NoiseConfig",
    "Spectrum",
    "evaluate",
    "sample",
    "add_noise",
    "snr_db",
    "sigma_n_for_snr",
]


class ModelKind(enum.Enum):
    GAUSSIAN = "gaussian"
    CUSTOM = "custom"


@dataclass(frozen=True)
class SignalModel:
    """Symmetric single-peak generator.

    ``sigma`` is the width parameter. For custom models it is informational
    only; the evaluator is called with positions and must be vectorised over
    numpy arrays.
    """

    kind: ModelKind
    amplitude: float
    mu: float
    sigma: float
    evaluator: Callable[[np.ndarray], np.ndarray] | None = field(default=None, compare=False)

    def __post_init__(self):
        if not self.amplitude > 0:
            raise ValueError(f"amplitude must be positive, got {self.amplitude}")
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if self.kind is ModelKind.CUSTOM and self.evaluator is None:
            raise ValueError("custom model needs an evaluator")

    @classmethod
    def gaussian(cls, amplitude: float = 1.0, mu: float = 5.0, sigma: float = 0.2) -> SignalModel:
        return cls(ModelKind.GAUSSIAN, amplitude, mu, sigma)

    @classmethod
    def custom(cls, evaluator, amplitude: float, mu: float, sigma: float) -> SignalModel:
        return cls(ModelKind.CUSTOM, amplitude, mu, sigma, evaluator)

    def __call__(self, x):
        return evaluate(self, x)


@dataclass(frozen=True)
class NoiseConfig:
    sigma_n: float
    seed: int = 0

    def __post_init__(self):
        if self.sigma_n < 0:
            raise ValueError(f"sigma_n must be non-negative, got {self.sigma_n}")


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Uniformly sampled signal: ``x[i] = x0 + i * dx``."""

    x0: float
    dx: float
    y: np.ndarray

    def __post_init__(self):
        y = np.array(self.y, dtype=float)
        y.setflags(write=False)
        object.__setattr__(self, "y", y)
        if y.ndim != 1:
            raise InvalidRangeError("amplitudes must be one-dimensional")
        if not self.dx > 0:
            raise InvalidRangeError(f"dx must be positive, got {self.dx}")
        if len(y) < 3:
            raise InvalidRangeError(f"a spectrum needs at least 3 samples, got {len(y)}")

    def __len__(self):
        return len(self.y)

    @property
    def x(self) -> np.ndarray:
        return self.x0 + np.arange(len(self.y)) * self.dx

    def position(self, i: float) -> float:
        return self.x0 + i * self.dx

    @property
    def x_last(self) -> float:
        return self.position(len(self.y) - 1)

    def with_y(self, y) -> Spectrum:
        return Spectrum(self.x0, self.dx, y)

    def __eq__(self, other):
        if not isinstance(other, Spectrum):
            return NotImplemented
        return self.x0 == other.x0 and self.dx == other.dx and np.array_equal(self.y, other.y)

    __hash__ = None


def evaluate(model: SignalModel, x):
    """Amplitude of ``model`` at position(s) ``x``."""
    if model.kind is ModelKind.GAUSSIAN:
        d = np.asarray(x, dtype=float) - model.mu
        out = model.amplitude * np.exp(-(d * d) / (2.0 * model.sigma**2))
    else:
        out = np.asarray(model.evaluator(np.asarray(x, dtype=float)), dtype=float)
    return float(out) if out.ndim == 0 else out


def sample(model: SignalModel, x_start: float, x_end: float, rate: float) -> Spectrum:
    """Sample ``model`` on ``x_start, x_start + 1/rate, ...`` up to ``x_end``."""
    if not x_end > x_start:
        raise InvalidRangeError(f"x_end ({x_end}) must exceed x_start ({x_start})")
    if not rate > 0:
        raise InvalidRangeError(f"rate must be positive, got {rate}")
    dx = 1.0 / rate
    n = math.floor((x_end - x_start) / dx + 1e-9) + 1
    if n < 3:
        raise InvalidRangeError(f"range [{x_start}, {x_end}] at rate {rate} gives {n} samples")
    x = x_start + np.arange(n) * dx
    return Spectrum(x_start, dx, evaluate(model, x))


def add_noise(spectrum: Spectrum, noise: NoiseConfig) -> Spectrum:
    """Add i.i.d. zero-mean Gaussian noise of std ``noise.sigma_n``; no clipping."""
    if noise.sigma_n == 0:
        return spectrum
    rng = np.random.default_rng(noise.seed)
    return spectrum.with_y(spectrum.y + rng.normal(0.0, noise.sigma_n, len(spectrum)))


def snr_db(amplitude: float, sigma_n: float) -> float:
    """Peak-amplitude SNR in decibels, ``20 log10(A / sigma_n)``."""
    if sigma_n <= 0:
        raise UndefinedSNRError(f"SNR is undefined for sigma_n={sigma_n}")
    if amplitude <= 0:
        raise ValueError(f"amplitude must be positive, got {amplitude}")
    return 20.0 * math.log10(amplitude / sigma_n)


def sigma_n_for_snr(amplitude: float, snr: float) -> float:
    return amplitude / 10.0 ** (snr / 20.0)
