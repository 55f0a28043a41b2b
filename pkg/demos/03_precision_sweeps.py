"""
Precision against noise, sampling rate and threshold
====================================================

Small versions of the three Monte Carlo studies. The command line runs the
full 5000-trial versions and writes CSV files, e.g. ``mirrorpeak snr-sweep``.
"""

from mirrorpeak.bench import (
    rate_sweep,
    rate_sweep_spec,
    snr_sweep,
    snr_sweep_spec,
    threshold_sweep,
    threshold_sweep_spec,
)

TRIALS = 300


def show(rows, key):
    by = {}
    for r in rows:
        by.setdefault(getattr(r, key), {})[r.estimator] = r.std
    print(f"{key:>22} {'centroid':>10} {'mim1':>10} {'mim2':>10}")
    for k, stds in by.items():
        print(f"{k:>22.4g} " + " ".join(f"{stds[e]:>10.2e}" for e in ("centroid", "mim1", "mim2")))


###############################################################################
# Noise level: seven levels between 14 dB and 46 dB.
show(snr_sweep(snr_sweep_spec(trials=TRIALS)), "sigma_n")

###############################################################################
# Sampling rate 3..10 at sigma_n = 0.025.
show(rate_sweep(rate_sweep_spec(trials=TRIALS)), "rate")

###############################################################################
# Threshold multiplier at 20 dB (every other multiplier to keep this quick).
spec = threshold_sweep_spec(trials=TRIALS)
show(threshold_sweep(threshold_sweep_spec(trials=TRIALS, threshold_multipliers=spec.threshold_multipliers[::2])), "threshold_multiplier")
