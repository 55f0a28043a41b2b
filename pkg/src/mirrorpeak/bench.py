"""Monte Carlo precision studies over noise level, sampling rate and selection threshold.

Every trial draws its noise from a generator seeded by
``SeedSequence([master_seed, bits(rate), bits(sigma_n), t])``, where ``bits``
is the IEEE-754 bit pattern of the value. All estimators and all threshold
multipliers of a given (rate, sigma_n) cell see the same noisy spectrum in
trial ``t``, so their differences come from the method alone. Trials are
independent of execution order, and statistics are accumulated in trial
order, so serial and parallel runs agree exactly.
"""

from __future__ import annotations

import math
import struct
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import EmptyCellError, PeakError
from .estimators import ESTIMATORS, IterationConfig
from .selection import select_window
from .signal import NoiseConfig, SignalModel, add_noise, sample, sigma_n_for_snr, snr_db

__all__ = [
    "ExperimentSpec",
    "TrialStats",
    "trial_seed",
    "run_cell",
    "run_grid",
    "snr_sweep",
    "rate_sweep",
    "threshold_sweep",
    "snr_sweep_spec",
    "rate_sweep_spec",
    "threshold_sweep_spec",
    "CSV_COLUMNS",
]

ESTIMATOR_NAMES = ("centroid", "mim1", "mim2")
SNR_SIGMAS = (0.2, 0.15, 0.1, 0.05, 0.025, 0.01, 0.005)
DEFAULT_SEED = 20201
DEFAULT_TRIALS = 5000


def _default_multipliers():
    return tuple(round(0.1 + 0.2 * k, 10) for k in range(18))


@dataclass(frozen=True)
class ExperimentSpec:
    model: SignalModel = field(default_factory=SignalModel.gaussian)
    x_start: float = 0.0
    x_end: float = 10.0
    rates: tuple[float, ...] = (10,)
    sigma_n_levels: tuple[float, ...] = SNR_SIGMAS
    threshold_multipliers: tuple[float, ...] = (0.5,)
    trials: int = DEFAULT_TRIALS
    master_seed: int = DEFAULT_SEED
    estimators: tuple[str, ...] = ESTIMATOR_NAMES
    iteration: IterationConfig = field(default_factory=IterationConfig)

    def __post_init__(self):
        for name in ("rates", "sigma_n_levels", "threshold_multipliers", "estimators"):
            value = tuple(getattr(self, name))
            if not value:
                raise ValueError(f"{name} must not be empty")
            object.__setattr__(self, name, value)
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if any(m <= 0 for m in self.threshold_multipliers):
            raise ValueError("threshold multipliers must be positive")
        if any(s < 0 for s in self.sigma_n_levels):
            raise ValueError("noise levels must be non-negative")
        unknown = set(self.estimators) - set(ESTIMATORS)
        if unknown:
            raise ValueError(f"unknown estimators: {sorted(unknown)}")


@dataclass(frozen=True)
class TrialStats:
    estimator: str
    rate: float
    sigma_n: float
    threshold_multiplier: float
    trials: int
    n_ok: int
    n_failed: int
    mean: float
    bias: float
    std: float
    mean_iterations: float
    oscillation_rate: float
    median_iterations: float = 0.0
    snr_db: float = math.inf
    iteration_counts: tuple[int, ...] = field(default=(), repr=False)

    @property
    def key(self):
        return (self.rate, self.sigma_n, self.threshold_multiplier, self.estimator)


def _bits(value: float) -> int:
    return struct.unpack("<Q", struct.pack("<d", float(value)))[0]


def trial_seed(master_seed: int, rate: float, sigma_n: float, t: int) -> int:
    """64-bit noise seed for trial ``t`` of the (rate, sigma_n) cell."""
    ss = np.random.SeedSequence([master_seed % 2**64, _bits(rate), _bits(sigma_n), t])
    return int(ss.generate_state(1, np.uint64)[0])


def _simulate(spec: ExperimentSpec, rate: float, sigma_n: float, multipliers, estimators):
    """Run every trial of one (rate, sigma_n) cell; one record list per (multiplier, estimator)."""
    clean = sample(spec.model, spec.x_start, spec.x_end, rate)
    records = {(m, e): [] for m in multipliers for e in estimators}
    for t in range(spec.trials):
        noisy = add_noise(clean, NoiseConfig(sigma_n, trial_seed(spec.master_seed, rate, sigma_n, t)))
        for m in multipliers:
            try:
                window = select_window(noisy, m * sigma_n)
            except PeakError:
                for e in estimators:
                    records[m, e].append(None)
                continue
            for e in estimators:
                try:
                    records[m, e].append(ESTIMATORS[e](window, spec.iteration))
                except PeakError:
                    records[m, e].append(None)
    return records


def _aggregate(spec, rate, sigma_n, multiplier, estimator, results) -> TrialStats:
    ok = [r for r in results if r is not None]
    if not ok:
        raise EmptyCellError(
            f"all {spec.trials} trials failed for {estimator} at rate={rate}, "
            f"sigma_n={sigma_n}, multiplier={multiplier}"
        )
    x = np.array([r.x_p for r in ok])
    its = np.array([r.iterations for r in ok])
    mean = float(np.mean(x))
    return TrialStats(
        estimator=estimator,
        rate=rate,
        sigma_n=sigma_n,
        threshold_multiplier=multiplier,
        trials=spec.trials,
        n_ok=len(ok),
        n_failed=len(results) - len(ok),
        mean=mean,
        bias=mean - spec.model.mu,
        std=float(np.std(x, ddof=1)) if len(ok) > 1 else 0.0,
        mean_iterations=float(np.mean(its)),
        oscillation_rate=sum(r.oscillating for r in ok) / len(ok),
        median_iterations=float(np.median(its)),
        snr_db=snr_db(spec.model.amplitude, sigma_n) if sigma_n > 0 else math.inf,
        iteration_counts=tuple(int(i) for i in its),
    )


def _cell(args) -> list[TrialStats]:
    spec, rate, sigma_n = args
    records = _simulate(spec, rate, sigma_n, spec.threshold_multipliers, spec.estimators)
    return [
        _aggregate(spec, rate, sigma_n, m, e, records[m, e])
        for m in spec.threshold_multipliers
        for e in spec.estimators
    ]


def run_cell(spec: ExperimentSpec, rate: float, sigma_n: float, multiplier: float, estimator: str) -> TrialStats:
    records = _simulate(spec, rate, sigma_n, (multiplier,), (estimator,))
    return _aggregate(spec, rate, sigma_n, multiplier, estimator, records[multiplier, estimator])


def run_grid(spec: ExperimentSpec, workers: int = 1) -> list[TrialStats]:
    """Every (rate, sigma_n, multiplier, estimator) combination of ``spec``.

    Rows come back ordered by rate, then sigma_n, then multiplier, then
    estimator, whatever the worker count.
    """
    jobs = [(spec, r, s) for r in spec.rates for s in spec.sigma_n_levels]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_cell, jobs))
    else:
        chunks = [_cell(j) for j in jobs]
    return [row for chunk in chunks for row in chunk]


def snr_sweep_spec(**overrides) -> ExperimentSpec:
    return replace(ExperimentSpec(), **overrides)


def rate_sweep_spec(**overrides) -> ExperimentSpec:
    base = ExperimentSpec(rates=tuple(range(3, 11)), sigma_n_levels=(0.025,), threshold_multipliers=(0.5,))
    return replace(base, **overrides)


def threshold_sweep_spec(**overrides) -> ExperimentSpec:
    base = ExperimentSpec(
        rates=(10,),
        sigma_n_levels=(sigma_n_for_snr(1.0, 20.0),),
        threshold_multipliers=_default_multipliers(),
    )
    return replace(base, **overrides)


def snr_sweep(spec: ExperimentSpec | None = None, workers: int = 1) -> list[TrialStats]:
    """Precision against noise level (seven levels from 14 dB to 46 dB by default)."""
    return run_grid(spec or snr_sweep_spec(), workers)


def rate_sweep(spec: ExperimentSpec | None = None, workers: int = 1) -> list[TrialStats]:
    """Precision against sampling rate 3..10 at sigma_n = 0.025."""
    return run_grid(spec or rate_sweep_spec(), workers)


def threshold_sweep(spec: ExperimentSpec | None = None, workers: int = 1) -> list[TrialStats]:
    """Precision against threshold multiplier 0.1..3.5 at 20 dB SNR."""
    return run_grid(spec or threshold_sweep_spec(), workers)


CSV_COLUMNS = (
    "estimator",
    "rate",
    "sigma_n",
    "snr_db",
    "threshold_multiplier",
    "trials",
    "n_ok",
    "bias",
    "std",
    "mean_iterations",
    "oscillation_rate",
)


def to_row(stats: TrialStats) -> dict:
    return {c: getattr(stats, c) for c in CSV_COLUMNS}
