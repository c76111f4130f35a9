"""Tests for the augmented-state Extended Kalman Filter."""
import math

import numpy as np
import pytest

from src.config import FilterSettings, SensorNoise
from src.errors import DegenerateInnovationError, InvalidSetError
from src.estimation.ekf import (
    EkfBelief,
    EkfTracker,
    Measurement,
    NoiseConfig,
    estimated_control,
    initialize_belief,
    innovation,
    predict,
    update,
)
from src.model.kinematics import AugmentedState, ControlSample, ModelParams, VehicleState, step_nominal

PARAMS = ModelParams(0.2)


def test_noise_config_rejects_asymmetric_matrix():
    """Q must be symmetric."""
    q = np.eye(6)
    q[0, 1] = 0.5
    with pytest.raises(InvalidSetError):
        NoiseConfig(q, np.eye(3), np.eye(6))


def test_noise_config_rejects_negative_definite_matrix():
    """R must be positive semi-definite."""
    with pytest.raises(InvalidSetError):
        NoiseConfig(np.eye(6), -np.eye(3), np.eye(6))


def test_noise_config_from_settings_matches_sensor_noise():
    """R is the squared measurement sigmas."""
    noise = NoiseConfig.from_settings(FilterSettings(), SensorNoise())
    sensor = SensorNoise()
    assert np.allclose(np.diag(noise.r), [
        sensor.measurement_px ** 2, sensor.measurement_py ** 2, sensor.measurement_v ** 2,
    ])


def test_initialize_belief_seeds_heading_from_displacement():
    """Heading comes from the two first positions."""
    belief = initialize_belief(Measurement(0.0, 0.0, 5.0), Measurement(1.0, 1.0, 5.0, k=1), NoiseConfig.default())
    assert belief.mean.theta == pytest.approx(math.pi / 4)
    assert belief.mean.p_x == 1.0
    assert belief.mean.a == 0.0
    assert belief.mean.kappa == 0.0


def test_initialize_belief_without_displacement_uses_zero_heading():
    """Identical positions fall back to heading 0."""
    belief = initialize_belief(Measurement(2.0, 2.0, 0.0), Measurement(2.0, 2.0, 0.0, k=1), NoiseConfig.default())
    assert belief.mean.theta == 0.0


def test_predict_moves_mean_and_grows_covariance():
    """Time update follows the model and adds process noise."""
    noise = NoiseConfig.default()
    belief = EkfBelief(AugmentedState(0.0, 0.0, 0.0, 10.0, 0.0, 0.0), np.eye(6) * 0.1)
    prior = predict(belief, PARAMS, noise)
    assert prior.mean.p_x == pytest.approx(2.0)
    assert np.all(np.diag(prior.covariance) >= np.diag(belief.covariance))


def test_update_reduces_position_uncertainty():
    """A measurement shrinks the position variances."""
    noise = NoiseConfig.default()
    belief = EkfBelief(AugmentedState(0.0, 0.0, 0.0, 5.0, 0.0, 0.0), np.eye(6))
    posterior = update(belief, Measurement(0.1, -0.1, 5.1), noise)
    assert posterior.covariance[0, 0] < 1.0
    assert posterior.covariance[1, 1] < 1.0
    assert np.allclose(posterior.covariance, posterior.covariance.T)


def test_update_with_zero_innovation_keeps_mean():
    """Measuring exactly the predicted outputs leaves the mean unchanged."""
    noise = NoiseConfig.default()
    belief = EkfBelief(AugmentedState(3.0, 4.0, 0.2, 6.0, 0.5, 0.01), np.eye(6) * 0.5)
    measurement = Measurement(3.0, 4.0, 6.0)
    assert np.allclose(innovation(belief, measurement), 0.0)
    posterior = update(belief, measurement, noise)
    assert np.allclose(posterior.mean.as_array(), belief.mean.as_array())


def test_update_raises_on_singular_innovation():
    """Zero R with zero covariance cannot be inverted."""
    noise = NoiseConfig(np.zeros((6, 6)), np.zeros((3, 3)), np.zeros((6, 6)))
    belief = EkfBelief(AugmentedState(0.0, 0.0, 0.0, 1.0, 0.0, 0.0), np.zeros((6, 6)))
    with pytest.raises(DegenerateInnovationError):
        update(belief, Measurement(0.0, 0.0, 1.0), noise)


def test_estimated_control_reads_augmented_components():
    """The control estimate is the (a, kappa) part of the mean."""
    belief = EkfBelief(AugmentedState(0.0, 0.0, 0.0, 1.0, 0.7, -0.03), np.eye(6))
    assert estimated_control(belief) == ControlSample(0.7, -0.03)


def test_tracker_buffers_first_measurement():
    """No belief until the second measurement arrives."""
    tracker = EkfTracker(PARAMS, NoiseConfig.default())
    assert tracker.step(Measurement(0.0, 0.0, 5.0, k=0)) is None
    assert not tracker.ready
    assert tracker.step(Measurement(1.0, 0.0, 5.0, k=1)) is not None
    assert tracker.ready


def _run_tracker(control: ControlSample, steps: int, rng=None, speed: float = 6.0):
    """Feed a tracker measurements of a vehicle driving ``control``; noisy when ``rng`` is given."""
    state = VehicleState(0.0, 0.0, 0.0, speed)
    sensor = SensorNoise()
    tracker = EkfTracker(PARAMS, NoiseConfig.default())
    beliefs = []
    for k in range(steps):
        noise = rng.standard_normal(3) if rng is not None else np.zeros(3)
        belief = tracker.step(Measurement(
            state.p_x + sensor.measurement_px * noise[0],
            state.p_y + sensor.measurement_py * noise[1],
            state.v + sensor.measurement_v * noise[2],
            k,
        ))
        beliefs.append(belief)
        state = step_nominal(state, control, PARAMS)
    return tracker, beliefs


def test_tracker_converges_without_noise():
    """Exact measurements of a = 0.5, kappa = 0 recover the control within 50 steps."""
    tracker, beliefs = _run_tracker(ControlSample(0.5, 0.0), 50, speed=5.0)
    estimate = estimated_control(beliefs[-1])
    assert estimate.a == pytest.approx(0.5, abs=0.02)
    assert estimate.kappa == pytest.approx(0.0, abs=0.001)
    assert np.max(np.abs(tracker.last_innovation)) <= 1e-6


def test_tracker_is_consistent_on_noisy_constant_turn(rng):
    """The last 50 estimates average to the true control within 3 sigma of the filter's covariance."""
    true_control = ControlSample(0.3, 0.05)
    tracker, beliefs = _run_tracker(true_control, 100, rng)
    a_mean, kappa_mean = np.mean([estimated_control(b).as_array() for b in beliefs[-50:]], axis=0)
    sigma_a, sigma_kappa = tracker.belief.std[4:]
    assert abs(a_mean - true_control.a) <= 3.0 * sigma_a
    assert abs(kappa_mean - true_control.kappa) <= 3.0 * sigma_kappa
    assert a_mean == pytest.approx(0.3, abs=0.2)
    assert kappa_mean == pytest.approx(0.05, abs=0.04)


def test_covariance_stays_symmetric_over_many_cycles(rng):
    """A thousand noisy predict/update cycles keep P symmetric to 1e-10."""
    tracker, _ = _run_tracker(ControlSample(0.0, 0.05), 1000, rng)
    covariance = tracker.belief.covariance
    assert np.max(np.abs(covariance - covariance.T)) <= 1e-10
    assert np.min(np.linalg.eigvalsh(covariance)) >= -1e-9


def test_update_with_huge_measurement_noise_is_a_no_op():
    """With R = 1e12 I the measurement carries no information."""
    base = NoiseConfig.default()
    noise = NoiseConfig(base.q, 1e12 * np.eye(3), base.p0)
    belief = EkfBelief(AugmentedState(1.0, 2.0, 0.3, 6.0, 0.2, 0.01), base.p0.copy())
    posterior = update(belief, Measurement(4.0, -3.0, 9.0), noise)
    assert np.allclose(posterior.mean.as_array(), belief.mean.as_array(), rtol=0.0, atol=1e-9)
    assert np.allclose(posterior.covariance, belief.covariance, rtol=0.0, atol=1e-9)


def test_linear_regime_matches_kalman_filter():
    """With Q = 0, heading 0 and no curvature, P follows the linear Kalman recursion."""
    base = NoiseConfig.default()
    noise = NoiseConfig(np.zeros((6, 6)), base.r, base.p0)
    v, ts = 8.0, PARAMS.sampling_time
    f = np.eye(6)
    f[0, 3] = ts
    f[1, 2] = v * ts
    f[2, 5] = v * ts
    f[3, 4] = ts
    h = np.zeros((3, 6))
    h[0, 0] = h[1, 1] = h[2, 3] = 1.0

    belief = EkfBelief(AugmentedState(0.0, 0.0, 0.0, v, 0.0, 0.0), base.p0.copy())
    expected = base.p0.copy()
    for k in range(5):
        prior = predict(belief, PARAMS, noise)
        expected = f @ expected @ f.T
        assert np.allclose(prior.covariance, expected, rtol=1e-9, atol=1e-12)

        mean = prior.mean
        belief = update(prior, Measurement(mean.p_x, mean.p_y, mean.v, k), noise)
        gain = expected @ h.T @ np.linalg.inv(h @ expected @ h.T + base.r)
        expected = (np.eye(6) - gain @ h) @ expected
        assert np.allclose(belief.covariance, expected, rtol=1e-8, atol=1e-12)
