"""Forward reachable tube of the 4-state kinematic model.

Centers follow the nonlinear model under the Control-Input set center;
generators are propagated through interval system/input matrices and the
resulting matrix family is enclosed by a single zonotope each step.
"""
import logging
from dataclasses import dataclass

import numpy as np

from src.config import Config, PredictionConfig
from src.errors import DimensionError, InvalidSetError
from src.estimation.control_set import ControlInputSet
from src.estimation.ekf import EkfBelief
from src.model.kinematics import (
    CONTROL_DIM,
    STATE_DIM,
    ControlSample,
    ModelParams,
    VehicleState,
    interval_matrices,
    step_nominal,
)
from src.sets.interval import hstack, interval_matrix_map
from src.sets.zonotope import (
    Zonotope,
    interval_hull,
    reduce_generators,
    remove_null_generators,
    zonotope_inclusion,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReachableTube:
    """Per-step state sets; ``steps[0]`` is the initial set."""

    steps: tuple[Zonotope, ...]
    horizon: int
    params: ModelParams

    def __post_init__(self) -> None:
        if len(self.steps) != self.horizon + 1:
            raise InvalidSetError(f"tube of horizon {self.horizon} needs {self.horizon + 1} steps")
        if any(step.dim != STATE_DIM for step in self.steps):
            raise DimensionError("every tube step must be 4-dimensional")


def initial_radii(belief: EkfBelief, sigma: float = Config.INITIAL_SIGMA, floor=Config.INITIAL_FLOOR) -> np.ndarray:
    """sigma-multiple of the EKF standard deviations of (p_x, p_y, theta, v), floored."""
    return np.maximum(sigma * belief.std[:STATE_DIM], np.asarray(floor, dtype=float))


def configured_radii(belief: EkfBelief, config: PredictionConfig) -> np.ndarray:
    """Initial-set half-widths for the configured mode (zero for a point set)."""
    if config.initial_set == "point":
        return np.zeros(STATE_DIM)
    return initial_radii(belief, config.initial_sigma, config.initial_floor)


def initial_set(belief: EkfBelief, pose_radii=None) -> Zonotope:
    """Axis box around the EKF mean pose; defaults to the floored 2-sigma box."""
    if pose_radii is None:
        pose_radii = initial_radii(belief)
    center = belief.mean.vehicle.as_array()
    return Zonotope.box(center, pose_radii)


def propagate_step(
    state_set: Zonotope,
    control_set: ControlInputSet,
    params: ModelParams,
    budget: int = Config.GENERATOR_BUDGET,
) -> Zonotope:
    """One step of the tube: nominal center, interval generator map, enclosure, reduction."""
    if state_set.dim != STATE_DIM:
        raise DimensionError(f"state set must be {STATE_DIM}-dim, got {state_set.dim}")
    inputs = control_set.zonotope
    if inputs.dim != CONTROL_DIM:
        raise DimensionError(f"control set must be {CONTROL_DIM}-dim, got {inputs.dim}")

    center = step_nominal(
        VehicleState.from_array(state_set.center),
        ControlSample.from_array(inputs.center),
        params,
    ).as_array()

    state_hull = interval_hull(state_set)
    input_hull = interval_hull(inputs)
    system, input_matrix = interval_matrices(state_hull[2], state_hull[3], input_hull[1], params)

    family = hstack(
        interval_matrix_map(system, state_set.generators),
        interval_matrix_map(input_matrix, inputs.generators),
    )
    enclosed = remove_null_generators(zonotope_inclusion(center, family))
    return reduce_generators(enclosed, budget)


def propagate(
    belief: EkfBelief,
    control_set: ControlInputSet,
    horizon: int,
    params: ModelParams,
    budget: int = Config.GENERATOR_BUDGET,
    pose_radii=None,
) -> ReachableTube:
    """Reachable tube over ``horizon`` steps holding the same Control-Input set."""
    if horizon < 1:
        raise InvalidSetError(f"horizon must be at least 1, got {horizon}")
    steps = [initial_set(belief, pose_radii)]
    for _ in range(horizon):
        steps.append(propagate_step(steps[-1], control_set, params, budget))
    return ReachableTube(tuple(steps), horizon, params)
