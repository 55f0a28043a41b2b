"""
Estimating one peak
===================

Sample a Gaussian, add white noise, pick the window around the maximum and
compare the three estimators on the same window.
"""

import numpy as np

from mirrorpeak import NoiseConfig, SignalModel, add_noise, centroid, mim1, mim2, sample, select_window
from mirrorpeak.estimators import mirror_points

# A unit Gaussian centred at 5 with width 0.2, ten samples per unit.
model = SignalModel.gaussian(amplitude=1.0, mu=5.0, sigma=0.2)
clean = sample(model, 0.0, 10.0, rate=10)
print(f"{len(clean)} samples, dx = {clean.dx}")

# Noise at 32 dB; the window keeps samples above half the noise level.
sigma_n = 0.025
noisy = add_noise(clean, NoiseConfig(sigma_n, seed=3))
window = select_window(noisy, 0.5 * sigma_n)
print(f"window: x = {window.x[0]:.1f} .. {window.x[-1]:.1f} ({len(window)} samples)")

print(f"centroid   {centroid(window):.6f}")
for name, estimator in (("mim1", mim1), ("mim2", mim2)):
    est = estimator(window)
    print(f"{name:<10} {est.x_p:.6f}  after {est.iterations} iterations")

###############################################################################
# The iterates of the least-squares variant settle within a few steps.

est = mim2(window)
print("start", est.initial, "iterates", np.round(est.history, 8))

###############################################################################
# Mirroring every sample about the estimate: interpolated amplitudes on the
# other side should match the mirrored ones.

for p in mirror_points(window, est.x_p)[:4]:
    print(f"x'={p.x_mirror:.4f} y_mirror={p.y_mirror:+.4f} y_interp={p.y_interp}")

###############################################################################
# Any symmetric shape works; here a Lorentzian sampled at only 4 points per unit.

lorentz = SignalModel.custom(lambda x: 1.0 / (1.0 + ((x - 2.37) / 0.4) ** 2), 1.0, 2.37, 0.4)
sparse = add_noise(sample(lorentz, 0.0, 5.0, rate=4), NoiseConfig(0.01, seed=1))
w = select_window(sparse, 0.05)
print(f"lorentzian: centroid {centroid(w):.4f}  mim1 {mim1(w).x_p:.4f}  mim2 {mim2(w).x_p:.4f}  (true 2.37)")
