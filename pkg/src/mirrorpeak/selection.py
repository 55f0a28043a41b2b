"""Threshold-based selection of the sample window around the observed maximum."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import EmptyWindowError, TooFewSamplesError
from .signal import Spectrum

__all__ = ["Window", "argmax_position", "select_window"]


@dataclass(frozen=True, eq=False)
class Window:
    """Inclusive index span ``[lo, hi]`` of ``source`` whose samples are all >= threshold."""

    source: Spectrum
    lo: int
    hi: int
    threshold: float

    def __post_init__(self):
        if not 0 <= self.lo <= self.hi < len(self.source):
            raise ValueError(f"bad window bounds [{self.lo}, {self.hi}] for {len(self.source)} samples")
        if self.hi - self.lo + 1 < 3:
            raise TooFewSamplesError(f"window [{self.lo}, {self.hi}] has fewer than 3 samples")

    @classmethod
    def whole(cls, spectrum: Spectrum) -> Window:
        """Window covering every sample of ``spectrum``."""
        return cls(spectrum, 0, len(spectrum) - 1, float(np.min(spectrum.y)))

    def __len__(self):
        return self.hi - self.lo + 1

    @cached_property
    def spectrum(self) -> Spectrum:
        """The selected samples as a spectrum of their own."""
        return Spectrum(self.source.position(self.lo), self.source.dx, self.y)

    @cached_property
    def x(self) -> np.ndarray:
        return self.source.x0 + np.arange(self.lo, self.hi + 1) * self.source.dx

    @cached_property
    def y(self) -> np.ndarray:
        return self.source.y[self.lo:self.hi + 1]

    def points(self):
        return zip(self.x.tolist(), self.y.tolist())


def _argmax(y: np.ndarray) -> tuple[int, float]:
    """Lower index of the maximum and the midpoint index of its tied run."""
    i = int(np.argmax(y))
    j = i
    while j + 1 < len(y) and y[j + 1] == y[i]:
        j += 1
    return i, (i + j) / 2.0


def argmax_position(spectrum: Spectrum) -> tuple[int, float]:
    """Index and position of the maximum sample.

    Ties between adjacent equal maxima resolve to the midpoint of the run; the
    returned index is the lowest of the run.
    """
    i, mid = _argmax(spectrum.y)
    return i, spectrum.position(mid)


def select_window(spectrum: Spectrum, threshold: float) -> Window:
    """Walk outward from the maximum while samples stay at or above ``threshold``."""
    y = spectrum.y
    peak, _ = _argmax(y)
    if y[peak] < threshold:
        raise EmptyWindowError(f"peak amplitude {y[peak]:.6g} is below threshold {threshold:.6g}")
    lo = peak
    while lo > 0 and y[lo - 1] >= threshold:
        lo -= 1
    hi = peak
    while hi < len(y) - 1 and y[hi + 1] >= threshold:
        hi += 1
    if hi - lo + 1 < 3:
        raise TooFewSamplesError(
            f"only {hi - lo + 1} samples at or above threshold {threshold:.6g}"
        )
    return Window(spectrum, lo, hi, threshold)
