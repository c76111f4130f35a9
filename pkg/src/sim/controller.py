"""Surrounding-vehicle driver and sensor: pure pursuit, speed control, noise."""
import math
from dataclasses import dataclass

import numpy as np

from src.config import ControllerParams, SensorNoise
from src.estimation.ekf import Measurement
from src.model.kinematics import ControlSample, ModelParams, VehicleState, step_nominal
from src.sim.scenario import Path

# how far ahead of the previous progress index the nearest-point search looks
SEARCH_WINDOW = 80


@dataclass(frozen=True)
class DriveStep:
    """Result of one simulated driving step."""

    state: VehicleState
    control: ControlSample
    progress: int


def wrap_angle(angle: float) -> float:
    return math.atan2(math.sin(angle), math.cos(angle))


def nearest_index(path: Path, x: float, y: float, progress: int = 0) -> int:
    """Closest path sample at or after ``progress`` within the search window."""
    stop = min(len(path), progress + SEARCH_WINDOW)
    dx = path.x[progress:stop] - x
    dy = path.y[progress:stop] - y
    return progress + int(np.argmin(dx * dx + dy * dy))


def cross_track_error(path: Path, state: VehicleState, progress: int = 0) -> float:
    index = nearest_index(path, state.p_x, state.p_y, progress)
    return float(math.hypot(path.x[index] - state.p_x, path.y[index] - state.p_y))


def tracking_command(
    state: VehicleState, path: Path, params: ControllerParams, progress: int = 0
) -> tuple[ControlSample, int]:
    """Noise-free pure-pursuit curvature and proportional acceleration, clamped."""
    index = nearest_index(path, state.p_x, state.p_y, progress)
    lookahead = params.lookahead_base + params.lookahead_gain * max(state.v, 0.0)
    target = min(int(np.searchsorted(path.s, path.s[index] + lookahead)), len(path) - 1)
    dx, dy = path.x[target] - state.p_x, path.y[target] - state.p_y
    distance = math.hypot(dx, dy)
    if distance > 1e-9:
        alpha = wrap_angle(math.atan2(dy, dx) - state.theta)
        kappa = 2.0 * math.sin(alpha) / distance
    else:
        kappa = float(path.curvature[index])
    a = params.speed_gain * (float(path.speed[index]) - state.v)
    a = min(max(a, -params.a_max), params.a_max)
    kappa = min(max(kappa, -params.kappa_max), params.kappa_max)
    return ControlSample(a, kappa), index


def sv_step(
    state: VehicleState,
    path: Path,
    params: ControllerParams,
    noise: SensorNoise,
    model: ModelParams,
    rng: np.random.Generator,
    progress: int = 0,
) -> DriveStep:
    """Command, perturb with Gaussian actuation noise, and advance the vehicle."""
    command, index = tracking_command(state, path, params, progress)
    applied = ControlSample(
        command.a + noise.actuation_a * rng.standard_normal(),
        command.kappa + noise.actuation_kappa * rng.standard_normal(),
    )
    return DriveStep(step_nominal(state, applied, model), applied, index)


def observe(state: VehicleState, noise: SensorNoise, rng: np.random.Generator, k: int = 0) -> Measurement:
    """Position and speed with independent zero-mean Gaussian noise."""
    draws = rng.standard_normal(3)
    return Measurement(
        state.p_x + noise.measurement_px * draws[0],
        state.p_y + noise.measurement_py * draws[1],
        state.v + noise.measurement_v * draws[2],
        k,
    )


def start_state(path: Path) -> VehicleState:
    """At the path start, aligned with it, at the planned speed."""
    return VehicleState(float(path.x[0]), float(path.y[0]), float(path.heading[0]), float(path.speed[0]))
