"""Self-checks that tie the closed-form estimator steps to brute-force oracles."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .estimators import IterationConfig, _mim2_terms, centroid, mim1, mim1_step, mim2, mim2_step, residual_s
from .errors import PeakError
from .selection import Window, argmax_position, select_window
from .signal import NoiseConfig, SignalModel, add_noise, sample

GRID_HALF_WIDTH = 2.0  # in units of dx
GRID_RESOLUTION = 1e-5  # in units of dx


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def grid_argmin(window: Window, x_p_prev: float, center: float | None = None) -> float:
    """Minimiser of ``residual_s`` with intervals frozen at ``x_p_prev``, by dense grid search."""
    dx = window.source.dx
    c = x_p_prev if center is None else center
    n = int(round(2 * GRID_HALF_WIDTH / GRID_RESOLUTION))
    grid = c + (np.arange(n + 1) / n * 2.0 - 1.0) * GRID_HALF_WIDTH * dx
    S, count = residual_s(window, grid, frozen_at=x_p_prev)
    if count == 0:
        raise PeakError("no mirror falls inside the window")
    return float(grid[np.argmin(S)])


def closed_forms(window: Window, x_p_prev: float) -> dict[str, float]:
    """Both candidate stationary points: with and without the factor 2 in the denominator."""
    x, y, xj, yj, a = _mim2_terms(window, x_p_prev)
    num = float(np.sum(a * a * (x + xj)) + np.sum(a * (y - yj)))
    den = float(np.sum(a * a))
    return {"2*sum(a^2)": num / (2.0 * den), "sum(a^2)": num / den}


def random_windows(n: int, seed: int = 2024):
    """Yield ``(window, x_p_prev)`` pairs from noisy Gaussians at assorted rates and noise levels."""
    rng = np.random.default_rng(seed)
    made = 0
    while made < n:
        model = SignalModel.gaussian(
            amplitude=rng.uniform(0.5, 2.0), mu=rng.uniform(4.0, 6.0), sigma=rng.uniform(0.15, 0.4)
        )
        rate = int(rng.integers(3, 16))
        sigma_n = model.amplitude * rng.choice([0.005, 0.025, 0.05, 0.1])
        spec = add_noise(sample(model, 0.0, 10.0, rate), NoiseConfig(sigma_n, int(rng.integers(2**63))))
        try:
            w = select_window(spec, rng.uniform(0.3, 2.0) * sigma_n)
            _, start = argmax_position(w.spectrum)
            prev = start + rng.uniform(-0.5, 0.5) * spec.dx
            mim2_step(w, prev)
        except PeakError:
            continue
        yield w, prev
        made += 1


def check_mim2_oracle(n: int = 100, seed: int = 2024, step=mim2_step) -> tuple[CheckResult, str]:
    """Compare ``step`` against the frozen-interval grid argmin on ``n`` random windows.

    Also reports which denominator form the grid confirms.
    """
    worst = 0.0
    votes = {"2*sum(a^2)": 0, "sum(a^2)": 0}
    for window, prev in random_windows(n, seed):
        dx = window.source.dx
        best = grid_argmin(window, prev)
        worst = max(worst, abs(step(window, prev) - best) / dx)
        forms = closed_forms(window, prev)
        votes[min(forms, key=lambda k: abs(forms[k] - best))] += 1
    confirmed = max(votes, key=votes.get)
    ok = worst <= GRID_RESOLUTION
    detail = f"max |step - grid argmin| = {worst:.3g} dx; oracle confirms denominator {confirmed}"
    return CheckResult("mim2 step vs grid argmin", ok, detail), confirmed


def check_fixed_points(cfg: IterationConfig | None = None) -> list[CheckResult]:
    cfg = cfg or IterationConfig()
    spec = sample(SignalModel.gaussian(1.0, 5.0, 0.2), 0.0, 10.0, 10)
    w = select_window(spec, 0.0125)
    out = [
        CheckResult("centroid fixed point", abs(centroid(w) - 5.0) < 1e-9),
        CheckResult("mim1 step fixed point", abs(mim1_step(w, 5.0) - 5.0) < 1e-9),
        CheckResult("mim2 step fixed point", abs(mim2_step(w, 5.0) - 5.0) < 1e-9),
    ]
    for name, est in (("mim1", mim1), ("mim2", mim2)):
        e = est(w, cfg)
        ok = e.converged and e.iterations <= 2 and abs(e.x_p - 5.0) < 1e-9
        out.append(CheckResult(f"{name} noise-free convergence", ok, f"x_p={e.x_p!r}, iterations={e.iterations}"))
    return out


def run_selfcheck(n_oracle: int = 100, step=mim2_step) -> tuple[list[CheckResult], str]:
    oracle, confirmed = check_mim2_oracle(n_oracle, step=step)
    return [oracle, *check_fixed_points()], confirmed
