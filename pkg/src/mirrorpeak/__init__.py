"""Peak-position estimation for symmetric single-peak sampled signals."""

__version__ = "0.1.0"

from .errors import PeakError
from .estimators import IterationConfig, PeakEstimate, centroid, mim1, mim2, residual_s
from .selection import Window, argmax_position, select_window
from .signal import NoiseConfig, SignalModel, Spectrum, add_noise, sample, snr_db

__all__ = [
    "PeakError",
    "IterationConfig",
    "PeakEstimate",
    "centroid",
    "mim1",
    "mim2",
    "residual_s",
    "Window",
    "argmax_position",
    "select_window",
    "NoiseConfig",
    "SignalModel",
    "Spectrum",
    "add_noise",
    "sample",
    "snr_db",
]
