"""Extended Kalman Filter on the augmented kinematic model."""
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.config import FilterSettings, SensorNoise
from src.errors import DegenerateInnovationError, InvalidSetError
from src.model.kinematics import (
    AUGMENTED_DIM,
    AugmentedState,
    ControlSample,
    ModelParams,
    augmented_jacobian,
    augmented_step,
)

logger = logging.getLogger(__name__)

PSD_FLOOR = -1e-9
# (p_x, p_y, v) rows of the augmented state
OBSERVATION_MATRIX = np.array([
    [1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 1.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
])
# singular-value ratio beyond which the innovation covariance is treated as singular
MAX_INNOVATION_CONDITION = 1e14


def _check_covariance(name: str, matrix: np.ndarray, size: int) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=float)
    if matrix.shape != (size, size):
        raise InvalidSetError(f"{name} must be {size}x{size}, got {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise InvalidSetError(f"{name} entries must be finite")
    scale = max(1.0, float(np.max(np.abs(matrix))))
    if not np.allclose(matrix, matrix.T, atol=1e-9 * scale, rtol=0.0):
        raise InvalidSetError(f"{name} must be symmetric")
    if np.linalg.eigvalsh(matrix).min() < PSD_FLOOR * scale:
        raise InvalidSetError(f"{name} must be positive semi-definite")
    return matrix


@dataclass(frozen=True)
class Measurement:
    """Observed position and speed at sample index k."""

    p_x: float
    p_y: float
    v: float
    k: int = 0

    def __post_init__(self) -> None:
        if not all(math.isfinite(x) for x in (self.p_x, self.p_y, self.v)):
            raise InvalidSetError(f"measurement entries must be finite, got {(self.p_x, self.p_y, self.v)}")

    def as_array(self) -> np.ndarray:
        return np.array([self.p_x, self.p_y, self.v])


class NoiseConfig:
    """Process (Q), measurement (R) and initial (P0) covariances."""

    def __init__(self, q, r, p0) -> None:
        self.q: np.ndarray = _check_covariance("Q", q, AUGMENTED_DIM)
        self.r: np.ndarray = _check_covariance("R", r, 3)
        self.p0: np.ndarray = _check_covariance("P0", p0, AUGMENTED_DIM)

    @classmethod
    def from_settings(cls, filter_settings: FilterSettings, sensor_noise: SensorNoise) -> "NoiseConfig":
        """Diagonal covariances; R matches the simulator's measurement noise."""
        q = np.diag([filter_settings.q_pose] * 4 + [filter_settings.q_a, filter_settings.q_kappa])
        r = np.diag([
            sensor_noise.measurement_px ** 2,
            sensor_noise.measurement_py ** 2,
            sensor_noise.measurement_v ** 2,
        ])
        return cls(q, r, np.diag(filter_settings.p0))

    @classmethod
    def default(cls) -> "NoiseConfig":
        return cls.from_settings(FilterSettings(), SensorNoise())

    def __repr__(self) -> str:
        return f"NoiseConfig(q={np.diag(self.q).tolist()}, r={np.diag(self.r).tolist()})"


class EkfBelief:
    """Gaussian belief over the augmented state."""

    def __init__(self, mean: AugmentedState, covariance) -> None:
        self.mean: AugmentedState = mean
        self.covariance: np.ndarray = _check_covariance("covariance", covariance, AUGMENTED_DIM)
        self.covariance.flags.writeable = False

    @property
    def std(self) -> np.ndarray:
        return np.sqrt(np.clip(np.diag(self.covariance), 0.0, None))

    def __repr__(self) -> str:
        return f"EkfBelief(mean={self.mean})"


def predict(belief: EkfBelief, params: ModelParams, noise: NoiseConfig) -> EkfBelief:
    """Time update: mean through the Euler map, covariance F P F^T + Q."""
    f = augmented_jacobian(belief.mean, params)
    covariance = f @ belief.covariance @ f.T + noise.q
    return EkfBelief(augmented_step(belief.mean, params), 0.5 * (covariance + covariance.T))


def innovation(belief: EkfBelief, measurement: Measurement) -> np.ndarray:
    return measurement.as_array() - OBSERVATION_MATRIX @ belief.mean.as_array()


def update(belief: EkfBelief, measurement: Measurement, noise: NoiseConfig) -> EkfBelief:
    """Measurement update with a Joseph-form covariance.

    Raises:
        DegenerateInnovationError: If the innovation covariance is singular
    """
    h = OBSERVATION_MATRIX
    p = belief.covariance
    s = h @ p @ h.T + noise.r
    if not np.all(np.isfinite(s)) or np.linalg.cond(s) > MAX_INNOVATION_CONDITION:
        raise DegenerateInnovationError("innovation covariance is not invertible; check R")
    try:
        gain = np.linalg.solve(s, h @ p).T
    except np.linalg.LinAlgError as e:
        raise DegenerateInnovationError(f"innovation covariance is not invertible: {e}") from e

    mean = belief.mean.as_array() + gain @ innovation(belief, measurement)
    joseph = np.eye(AUGMENTED_DIM) - gain @ h
    covariance = joseph @ p @ joseph.T + gain @ noise.r @ gain.T
    return EkfBelief(AugmentedState.from_array(mean), 0.5 * (covariance + covariance.T))


def estimated_control(belief: EkfBelief) -> ControlSample:
    return belief.mean.control


def initialize_belief(first: Measurement, second: Measurement, noise: NoiseConfig) -> EkfBelief:
    """Seed the filter from the first two measurements.

    Position and speed come from the latest measurement, heading from the
    displacement between the two; a and kappa start at zero.
    """
    dx, dy = second.p_x - first.p_x, second.p_y - first.p_y
    if math.hypot(dx, dy) > 0.0:
        theta = math.atan2(dy, dx)
    else:
        logger.warning("no displacement between first measurements; seeding heading at 0")
        theta = 0.0
    mean = AugmentedState(second.p_x, second.p_y, theta, second.v, 0.0, 0.0)
    return EkfBelief(mean, noise.p0)


class EkfTracker:
    """One filter per tracked vehicle: buffers the first measurement, then filters."""

    def __init__(self, params: ModelParams, noise: NoiseConfig) -> None:
        self.params = params
        self.noise = noise
        self.belief: Optional[EkfBelief] = None
        self.pending: Optional[Measurement] = None
        self.last_innovation: Optional[np.ndarray] = None

    @property
    def ready(self) -> bool:
        return self.belief is not None

    def step(self, measurement: Measurement) -> Optional[EkfBelief]:
        """Consume one measurement and return the current belief (None while seeding)."""
        if self.belief is None:
            if self.pending is None:
                self.pending = measurement
                return None
            self.belief = initialize_belief(self.pending, measurement, self.noise)
            self.pending = None
            logger.debug("filter initialized at k=%d: %s", measurement.k, self.belief.mean)
            return self.belief
        prior = predict(self.belief, self.params, self.noise)
        self.last_innovation = innovation(prior, measurement)
        self.belief = update(prior, measurement, self.noise)
        return self.belief
