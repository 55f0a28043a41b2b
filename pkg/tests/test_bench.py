import math

import pytest

from mirrorpeak.bench import (
    CSV_COLUMNS,
    ExperimentSpec,
    SNR_SIGMAS,
    rate_sweep_spec,
    run_cell,
    run_grid,
    snr_sweep,
    snr_sweep_spec,
    threshold_sweep_spec,
    to_row,
    trial_seed,
)
from mirrorpeak.errors import EmptyCellError
from mirrorpeak.signal import snr_db


@pytest.mark.parametrize("estimator", ["centroid", "mim1", "mim2"])
def test_noise_free_cell_is_exact(estimator):
    # zero noise gives a zero threshold, so the window spans the whole spectrum
    stats = run_cell(ExperimentSpec(trials=5), 10, 0.0, 1.0, estimator)
    assert stats.n_ok == 5
    assert abs(stats.bias) <= 1e-9
    assert stats.std <= 1e-9


def test_cell_is_deterministic():
    spec = ExperimentSpec(trials=30, master_seed=99)
    a = run_cell(spec, 10, 0.05, 0.5, "mim2")
    b = run_cell(spec, 10, 0.05, 0.5, "mim2")
    assert a == b
    c = run_cell(ExperimentSpec(trials=30, master_seed=100), 10, 0.05, 0.5, "mim2")
    assert a != c


def test_paired_trials_share_noise():
    spec = ExperimentSpec(trials=40, estimators=("centroid", "mim1"), sigma_n_levels=(0.05,))
    rows = run_grid(spec)
    alone = run_cell(spec, 10, 0.05, 0.5, "centroid")
    assert rows[0] == alone


def test_trial_seed_order_independent():
    seeds = [trial_seed(1, 10, 0.025, t) for t in range(5)]
    assert seeds == [trial_seed(1, 10, 0.025, t) for t in range(5)]
    assert len(set(seeds)) == 5
    assert trial_seed(1, 10, 0.025, 0) != trial_seed(1, 10, 0.05, 0)
    assert trial_seed(1, 9, 0.025, 0) != trial_seed(1, 10, 0.025, 0)


def test_failed_trials_counted():
    stats = run_cell(ExperimentSpec(trials=50), 4, 0.1, 3.5, "centroid")
    assert stats.n_ok + stats.n_failed == 50
    assert stats.n_failed > 0


def test_all_failed_raises():
    with pytest.raises(EmptyCellError):
        run_cell(ExperimentSpec(trials=3), 10, 0.01, 200.0, "mim1")


def test_spec_validation():
    with pytest.raises(ValueError):
        ExperimentSpec(trials=0)
    with pytest.raises(ValueError):
        ExperimentSpec(rates=())
    with pytest.raises(ValueError):
        ExperimentSpec(threshold_multipliers=(0.0,))
    with pytest.raises(ValueError):
        ExperimentSpec(estimators=("spline",))


def test_default_sweeps_shape():
    snr = snr_sweep_spec()
    assert snr.sigma_n_levels == SNR_SIGMAS and snr.rates == (10,) and snr.threshold_multipliers == (0.5,)
    assert snr.trials == 5000
    rate = rate_sweep_spec()
    assert rate.rates == tuple(range(3, 11)) and rate.sigma_n_levels == (0.025,)
    th = threshold_sweep_spec()
    assert th.sigma_n_levels[0] == pytest.approx(0.1)
    assert snr_db(1.0, th.sigma_n_levels[0]) == pytest.approx(20.0)
    assert th.threshold_multipliers[0] == pytest.approx(0.1)
    assert th.threshold_multipliers[-1] == pytest.approx(3.5)
    assert len(th.threshold_multipliers) == 18


def test_snr_sweep_rows():
    rows = snr_sweep(snr_sweep_spec(trials=20))
    assert len(rows) == 21
    assert {r.estimator for r in rows} == {"centroid", "mim1", "mim2"}
    for r in rows:
        assert r.n_ok + r.n_failed == r.trials == 20
        assert r.std >= 0
        assert r.snr_db == pytest.approx(snr_db(1.0, r.sigma_n))
        assert list(to_row(r)) == list(CSV_COLUMNS)
        if r.estimator == "centroid":
            assert r.mean_iterations == 0


def test_workers_agree_with_serial():
    spec = rate_sweep_spec(trials=15, rates=(4, 7))
    assert run_grid(spec, workers=2) == run_grid(spec, workers=1)


def test_snr_trend_small_run():
    rows = snr_sweep(snr_sweep_spec(trials=300, sigma_n_levels=(0.1, 0.01)))
    by = {(r.sigma_n, r.estimator): r.std for r in rows}
    for e in ("centroid", "mim1", "mim2"):
        assert by[0.01, e] < by[0.1, e]
    assert math.isfinite(by[0.01, "mim2"])
