"""
Checking the least-squares step against brute force
===================================================

With the bracketing intervals frozen at the previous estimate, the squared
mismatch between mirrored and interpolated amplitudes is a quadratic in the
new position. Its closed-form minimiser has ``2 * sum(a^2)`` in the
denominator; a dense grid search confirms it and rejects the form without
the factor 2.
"""

import numpy as np

from mirrorpeak.checks import closed_forms, grid_argmin, random_windows
from mirrorpeak.estimators import mim2_step, residual_s

for window, prev in random_windows(5, seed=1):
    dx = window.source.dx
    best = grid_argmin(window, prev)
    forms = closed_forms(window, prev)
    print(
        f"grid argmin {best:.7f}  with factor 2 {forms['2*sum(a^2)']:.7f}  "
        f"without {forms['sum(a^2)']:.7f}  step error {abs(mim2_step(window, prev) - best) / dx:.1e} dx"
    )

###############################################################################
# The residual itself, scanned around the last window's estimate.

grid = np.linspace(best - 2 * dx, best + 2 * dx, 9)
S, n = residual_s(window, grid, frozen_at=prev)
for p, s in zip(grid, S):
    print(f"  p={p:.4f}  S={s:.3e}")
