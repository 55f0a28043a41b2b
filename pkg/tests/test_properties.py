"""Equivariance and invariance of the estimators on randomised noisy windows."""

import numpy as np
import pytest
from hypothesis import given, reject, settings, strategies as st

from mirrorpeak.errors import PeakError
from mirrorpeak.estimators import IterationConfig, centroid, mim1, mim2, mirror
from mirrorpeak.selection import Window, select_window
from mirrorpeak.signal import NoiseConfig, SignalModel, Spectrum, add_noise, sample

CFG = IterationConfig(tol=1e-12, max_iters=200)
ESTIMATES = {
    "centroid": centroid,
    "mim1": lambda w: mim1(w, CFG).x_p,
    "mim2": lambda w: mim2(w, CFG).x_p,
}


@st.composite
def windows(draw):
    mu = draw(st.floats(3.0, 7.0))
    width = draw(st.floats(0.12, 0.5))
    rate = draw(st.integers(3, 15))
    sigma_n = draw(st.sampled_from([0.0, 0.005, 0.025, 0.1]))
    multiplier = draw(st.floats(0.3, 2.5))
    seed = draw(st.integers(0, 2**63 - 1))
    spec = add_noise(sample(SignalModel.gaussian(1.0, mu, width), 0.0, 10.0, rate), NoiseConfig(sigma_n, seed))
    threshold = multiplier * sigma_n if sigma_n else 0.05
    try:
        return select_window(spec, threshold)
    except PeakError:
        reject()


def as_window(spec: Spectrum) -> Window:
    return Window.whole(spec)


def agree(a, b, dx):
    return abs(a - b) <= 1e-6 * dx


@pytest.mark.parametrize("name", ESTIMATES)
@settings(max_examples=200, deadline=None)
@given(w=windows(), shift=st.floats(-50.0, 50.0))
def test_translation_equivariance(name, w, shift):
    est = ESTIMATES[name]
    base = w.spectrum
    moved = Spectrum(base.x0 + shift, base.dx, base.y)
    assert agree(est(as_window(moved)), est(as_window(base)) + shift, base.dx)


@pytest.mark.parametrize("name", ESTIMATES)
@settings(max_examples=200, deadline=None)
@given(w=windows(), scale=st.floats(0.01, 100.0))
def test_amplitude_scale_invariance(name, w, scale):
    est = ESTIMATES[name]
    base = w.spectrum
    scaled = base.with_y(base.y * scale)
    assert agree(est(as_window(scaled)), est(as_window(base)), base.dx)


@pytest.mark.parametrize("name", ESTIMATES)
@settings(max_examples=200, deadline=None)
@given(w=windows(), axis=st.floats(-20.0, 20.0))
def test_reflection_equivariance(name, w, axis):
    est = ESTIMATES[name]
    base = w.spectrum
    flipped = Spectrum(2 * axis - base.x_last, base.dx, base.y[::-1])
    assert agree(est(as_window(flipped)), 2 * axis - est(as_window(base)), base.dx)


@settings(max_examples=500)
@given(st.floats(-1e6, 1e6), st.floats(-1e6, 1e6))
def test_mirror_involution(x, p):
    assert mirror(mirror(x, p), p) == pytest.approx(x, abs=1e-9 * (1 + abs(x) + abs(p)))
