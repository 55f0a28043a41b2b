import numpy as np
import pytest

from mirrorpeak.selection import select_window
from mirrorpeak.signal import NoiseConfig, SignalModel, add_noise, sample


@pytest.fixture
def paper_gaussian():
    return SignalModel.gaussian(amplitude=1.0, mu=5.0, sigma=0.2)


@pytest.fixture
def clean_spectrum(paper_gaussian):
    return sample(paper_gaussian, 0.0, 10.0, 10)


@pytest.fixture
def clean_window(clean_spectrum):
    return select_window(clean_spectrum, 0.0125)


def noisy_window(seed, sigma_n=0.025, rate=10, multiplier=0.5, mu=5.0):
    model = SignalModel.gaussian(1.0, mu, 0.2)
    spec = add_noise(sample(model, 0.0, 10.0, rate), NoiseConfig(sigma_n, seed))
    return select_window(spec, multiplier * sigma_n)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
