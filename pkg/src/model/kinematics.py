"""Euler-discretized single-track kinematic model and its linearizations.

State (p_x, p_y, theta, v) is driven by acceleration a and curvature
kappa; the wheelbase is folded into kappa. The augmented form appends
(a, kappa) as random-walk states for estimation.
"""
import math
from dataclasses import dataclass

import numpy as np

from src.errors import InvalidSetError
from src.sets.interval import Interval, IntervalMatrix, interval_sin_cos

STATE_DIM = 4
CONTROL_DIM = 2
AUGMENTED_DIM = 6


def _require_finite(name: str, values) -> None:
    if not all(math.isfinite(v) for v in values):
        raise InvalidSetError(f"{name} entries must be finite, got {tuple(values)}")


@dataclass(frozen=True)
class VehicleState:
    """Pose and speed: p_x [m], p_y [m], theta [rad], v [m/s]."""

    p_x: float
    p_y: float
    theta: float
    v: float

    def __post_init__(self) -> None:
        _require_finite("VehicleState", (self.p_x, self.p_y, self.theta, self.v))

    def as_array(self) -> np.ndarray:
        return np.array([self.p_x, self.p_y, self.theta, self.v])

    @classmethod
    def from_array(cls, values) -> "VehicleState":
        return cls(*(float(x) for x in values[:STATE_DIM]))


@dataclass(frozen=True)
class ControlSample:
    """Control action: acceleration a [m/s^2] and curvature kappa [1/m]."""

    a: float
    kappa: float

    def __post_init__(self) -> None:
        _require_finite("ControlSample", (self.a, self.kappa))

    def as_array(self) -> np.ndarray:
        return np.array([self.a, self.kappa])

    @classmethod
    def from_array(cls, values) -> "ControlSample":
        return cls(float(values[0]), float(values[1]))


@dataclass(frozen=True)
class AugmentedState:
    """Vehicle state with the control actions appended as states."""

    p_x: float
    p_y: float
    theta: float
    v: float
    a: float
    kappa: float

    def __post_init__(self) -> None:
        _require_finite("AugmentedState", self.as_array())

    def as_array(self) -> np.ndarray:
        return np.array([self.p_x, self.p_y, self.theta, self.v, self.a, self.kappa])

    @classmethod
    def from_array(cls, values) -> "AugmentedState":
        return cls(*(float(x) for x in values[:AUGMENTED_DIM]))

    @classmethod
    def compose(cls, state: VehicleState, control: ControlSample) -> "AugmentedState":
        return cls(state.p_x, state.p_y, state.theta, state.v, control.a, control.kappa)

    @property
    def vehicle(self) -> VehicleState:
        return VehicleState(self.p_x, self.p_y, self.theta, self.v)

    @property
    def control(self) -> ControlSample:
        return ControlSample(self.a, self.kappa)


@dataclass(frozen=True)
class ModelParams:
    """Sampling interval T_s [s]."""

    sampling_time: float

    def __post_init__(self) -> None:
        if not self.sampling_time > 0:
            raise InvalidSetError(f"sampling time must be positive, got {self.sampling_time}")


def euler_step(state: np.ndarray, control: np.ndarray, ts: float) -> np.ndarray:
    """Array form of the Euler-forward update; accepts batches along axis 0."""
    p_x, p_y, theta, v = np.moveaxis(np.asarray(state, dtype=float), -1, 0)
    a, kappa = np.moveaxis(np.asarray(control, dtype=float), -1, 0)
    return np.stack([
        p_x + v * np.cos(theta) * ts,
        p_y + v * np.sin(theta) * ts,
        theta + v * kappa * ts,
        v + a * ts,
    ], axis=-1)


def step_nominal(state: VehicleState, control: ControlSample, params: ModelParams) -> VehicleState:
    """Advance the vehicle one sampling interval under a fixed control."""
    return VehicleState.from_array(euler_step(state.as_array(), control.as_array(), params.sampling_time))


def augmented_step(state: AugmentedState, params: ModelParams) -> AugmentedState:
    """Advance the augmented state; a and kappa are held (zero disturbance)."""
    vehicle = step_nominal(state.vehicle, state.control, params)
    return AugmentedState.compose(vehicle, state.control)


def augmented_jacobian(state: AugmentedState, params: ModelParams) -> np.ndarray:
    """Exact 6x6 Jacobian of the augmented Euler map."""
    ts = params.sampling_time
    sin_t, cos_t = math.sin(state.theta), math.cos(state.theta)
    v, kappa = state.v, state.kappa
    return np.array([
        [1.0, 0.0, -ts * v * sin_t, ts * cos_t, 0.0, 0.0],
        [0.0, 1.0, ts * v * cos_t, ts * sin_t, 0.0, 0.0],
        [0.0, 0.0, 1.0, ts * kappa, 0.0, ts * v],
        [0.0, 0.0, 0.0, 1.0, ts, 0.0],
        [0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
    ])


def interval_matrices(
    theta: Interval, v: Interval, kappa: Interval, params: ModelParams
) -> tuple[IntervalMatrix, IntervalMatrix]:
    """System and input interval matrices covering every linearization.

    Each entry encloses the corresponding Jacobian entry of the 4-state
    Euler map for all (theta, v, kappa) in the given intervals.
    """
    ts = params.sampling_time
    sin_t, cos_t = interval_sin_cos(theta)
    zero, one = Interval.point(0.0), Interval.point(1.0)

    rho_13 = -(v * sin_t) * ts
    rho_23 = (v * cos_t) * ts
    rho_14 = cos_t * ts
    rho_24 = sin_t * ts
    rho_34 = kappa * ts
    rho_b = v * ts

    system = IntervalMatrix.from_intervals([
        [one, zero, rho_13, rho_14],
        [zero, one, rho_23, rho_24],
        [zero, zero, one, rho_34],
        [zero, zero, zero, one],
    ])
    inputs = IntervalMatrix.from_intervals([
        [zero, zero],
        [zero, zero],
        [zero, rho_b],
        [Interval.point(ts), zero],
    ])
    return system, inputs
