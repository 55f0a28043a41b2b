import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mirrorpeak.errors import EmptyWindowError, TooFewSamplesError
from mirrorpeak.selection import Window, argmax_position, select_window
from mirrorpeak.signal import Spectrum


def test_argmax_unique():
    assert argmax_position(Spectrum(2.0, 0.5, [0, 1, 0])) == (1, 2.5)


def test_argmax_tie_midpoint():
    i, x = argmax_position(Spectrum(2.0, 0.5, [0, 1, 1, 0]))
    assert i == 1
    assert x == pytest.approx(2.0 + 1.5 * 0.5)


def test_argmax_paper_gaussian(clean_spectrum):
    assert argmax_position(clean_spectrum) == (50, 5.0)


def test_select_rule():
    w = select_window(Spectrum(0.0, 1.0, [0.1, 0.6, 1.0, 0.7, 0.05]), 0.5)
    assert (w.lo, w.hi) == (1, 3)


def test_select_paper_window(clean_window):
    # A exp(-d^2 / 2 sigma^2) = 0.0125  ->  |d| <= 0.2 sqrt(2 ln 80) ~ 0.592
    half_width = 0.2 * np.sqrt(2 * np.log(1 / 0.0125))
    assert half_width == pytest.approx(0.592, abs=1e-3)
    assert len(clean_window) == 11
    np.testing.assert_allclose(clean_window.x[[0, -1]], [4.5, 5.5])
    assert clean_window.lo == 45 and clean_window.hi == 55


def test_threshold_equality_included():
    w = select_window(Spectrum(0.0, 1.0, [0.0, 0.5, 1.0, 0.5, 0.0]), 0.5)
    assert (w.lo, w.hi) == (1, 3)


def test_threshold_above_peak():
    with pytest.raises(EmptyWindowError):
        select_window(Spectrum(0.0, 1.0, [0.1, 0.6, 1.0, 0.7, 0.05]), 1.5)


def test_window_too_narrow():
    with pytest.raises(TooFewSamplesError):
        select_window(Spectrum(0.0, 1.0, [0.1, 0.2, 1.0, 0.9, 0.05]), 0.5)


def test_dip_stops_walk():
    w = select_window(Spectrum(0.0, 1.0, [0.9, 0.2, 0.8, 1.0, 0.8, 0.1]), 0.5)
    assert (w.lo, w.hi) == (2, 4)


def test_window_spectrum_view(clean_window):
    s = clean_window.spectrum
    assert s.x0 == pytest.approx(4.5)
    np.testing.assert_array_equal(s.y, clean_window.y)
    assert list(clean_window.points())[5] == pytest.approx((5.0, 1.0))


def test_whole_window():
    w = Window.whole(Spectrum(0.0, 1.0, [0.1, 0.2, 0.3]))
    assert (w.lo, w.hi, w.threshold) == (0, 2, 0.1)


def test_symmetric_window_on_grid(clean_spectrum):
    for threshold in (0.85, 0.5, 0.1, 0.0125, 1e-6):
        w = select_window(clean_spectrum, threshold)
        assert 50 - w.lo == w.hi - 50


amplitudes = st.lists(st.floats(-1.0, 1.0, allow_nan=False), min_size=3, max_size=40)


@settings(max_examples=300, deadline=None)
@given(amplitudes, st.floats(-1.0, 1.0), st.floats(0.0, 0.5))
def test_window_invariants_and_monotonicity(y, threshold, lower_by):
    spec = Spectrum(0.0, 1.0, y)
    try:
        w = select_window(spec, threshold)
    except (EmptyWindowError, TooFewSamplesError):
        return
    peak, _ = argmax_position(spec)
    assert w.lo <= peak <= w.hi
    assert np.all(w.y >= threshold)
    assert len(w) >= 3
    wider = select_window(spec, threshold - lower_by)
    assert wider.lo <= w.lo and wider.hi >= w.hi
