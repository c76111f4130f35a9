"""Tests for the closed-loop experiment, baseline and horizon sweep."""
import numpy as np
import pytest

from src.config import RunConfig
from src.errors import RecordError
from src.estimation.control_set import expansion_margins
from src.export.protocol import metrics_to_dict
from src.sets.zonotope import contains_point, hull_bounds
from src.sim.experiment import (
    predict_with_control_set,
    run_experiment,
    simulate,
    sweep_horizons,
    worst_case_baseline,
)
from src.sim.metrics import compute_metrics
from src.sim.record import STAGES, RunRecord
from src.sim.scenario import generate_scenario

SHORT = RunConfig().with_overrides(iterations=20)


@pytest.fixture(scope="module")
def short_record():
    """One 20-iteration run shared by the read-only checks below."""
    return run_experiment(SHORT)


def test_run_records_every_iteration(short_record):
    """Iterations 1..N are recorded with a full tube and occupancy per step."""
    assert len(short_record) == 20
    assert [it.k for it in short_record.iterations] == list(range(1, 21))
    for it in short_record.iterations:
        assert len(it.tube.steps) == SHORT.prediction.horizon + 1
        assert [occ.step for occ in it.occupancy] == list(range(1, SHORT.prediction.horizon + 1))
        assert set(it.timings) == set(STAGES)
        assert it.t == pytest.approx(it.k * SHORT.scenario.sampling_time)


def test_run_keeps_truth_past_the_last_iteration(short_record):
    """Ground truth extends N_p steps beyond the last iteration."""
    assert len(short_record.truth_tail) == SHORT.prediction.horizon
    assert len(short_record.truth_positions()) == 20 + SHORT.prediction.horizon
    assert short_record.initial_measurement.k == 0


def test_run_control_sets_contain_their_window(short_record):
    """Each fitted set encloses the estimates it was fitted to."""
    for it in short_record.iterations:
        for sample in it.control_set.window:
            assert contains_point(it.control_set.zonotope, sample.as_array(), 1e-6)


def test_simulate_matches_full_run(short_record):
    """Simulation alone reproduces the truth and measurements of a full run with the same seed."""
    samples = simulate(SHORT)
    assert [s.k for s in samples] == list(range(1, 21))
    for sample, it in zip(samples, short_record.iterations):
        assert np.allclose(sample.truth.as_array(), it.truth.as_array())
        assert sample.measurement == it.measurement
        assert sample.estimate == it.estimate
        assert sample.label == it.label


def test_simulate_depends_on_seed():
    """Different seeds give different noise."""
    first = simulate(SHORT)
    second = simulate(SHORT.with_overrides(seed=7))
    assert first[-1].measurement != second[-1].measurement


def test_metrics_are_deterministic_for_a_seed(short_record):
    """Re-running with the same seed gives identical metrics."""
    again = run_experiment(SHORT)
    assert metrics_to_dict(compute_metrics(again, sensitivity=False)) == metrics_to_dict(
        compute_metrics(short_record, sensitivity=False)
    )


def test_worst_case_baseline_bounds_every_estimate(short_record):
    """The baseline box contains all control estimates of the run."""
    baseline = worst_case_baseline(short_record)
    for estimate in short_record.estimates():
        assert contains_point(baseline.zonotope, estimate.as_array(), 1e-9)
    assert baseline.zonotope.order <= 2


def test_worst_case_baseline_covers_every_control_set(short_record):
    """Each adaptive set's hull lies inside the baseline box."""
    low, high = hull_bounds(worst_case_baseline(short_record).zonotope)
    for it in short_record.iterations:
        set_low, set_high = hull_bounds(it.control_set.zonotope)
        assert np.all(low <= set_low + 1e-12)
        assert np.all(set_high <= high + 1e-12)


def test_worst_case_baseline_rejects_empty_record():
    """An empty record has nothing to bound."""
    config = RunConfig()
    path = generate_scenario(config.scenario)
    record = RunRecord(config, path, None, None)
    with pytest.raises(RecordError):
        worst_case_baseline(record)
    with pytest.raises(RecordError):
        sweep_horizons(record, [3])


def test_prediction_pass_under_fixed_set(short_record):
    """The baseline pass predicts once per iteration over the configured horizon."""
    baseline = worst_case_baseline(short_record)
    prediction = predict_with_control_set(short_record, baseline)
    assert len(prediction.tubes) == len(short_record)
    assert all(len(sets) == SHORT.prediction.horizon for sets in prediction.occupancy)
    assert all(t >= 0.0 for t in prediction.iteration_times)


def test_prediction_pass_with_shorter_horizon(short_record):
    """An explicit horizon overrides the configured one."""
    prediction = predict_with_control_set(short_record, worst_case_baseline(short_record), horizon=3)
    assert all(len(sets) == 3 for sets in prediction.occupancy)


def test_sweep_horizons_times_each_horizon(short_record):
    """One positive mean iteration time per requested horizon."""
    sweep = sweep_horizons(short_record, [3, 5])
    assert sorted(sweep) == [3, 5]
    assert all(seconds > 0.0 for seconds in sweep.values())


def test_run_control_sets_are_widened_by_filter_uncertainty(short_record):
    """Every fitted set is at least as wide as its covariance-scaled margins."""
    for it in short_record.iterations:
        low, high = hull_bounds(it.control_set.zonotope)
        margins = expansion_margins(SHORT.control_set, it.belief)
        assert np.all(0.5 * (high - low) >= np.array(margins) - 1e-12)
        assert margins[0] >= SHORT.control_set.expansion_sigma * it.belief.std[4] - 1e-12
