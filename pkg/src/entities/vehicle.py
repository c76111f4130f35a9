"""Surrounding-vehicle entity factory."""
import esper

from src.components.core import Observation, PathFollower, StageTimings, SurroundingVehicle, TrueState
from src.components.estimation import ControlHistory, FilterTrack
from src.components.prediction import Prediction, RunLog
from src.config import RunConfig
from src.estimation.control_set import ControlWindow, primitive_basis
from src.estimation.ekf import EkfTracker, NoiseConfig
from src.model.kinematics import ModelParams, VehicleState
from src.sim.controller import start_state
from src.sim.scenario import Path


def create_surrounding_vehicle(
    world: str, path: Path, config: RunConfig, state: VehicleState | None = None, name: str = "sv"
) -> int:
    """Create a tracked vehicle following ``path``.

    Args:
        world: The ECS world identifier
        path: Reference path driven by the vehicle
        config: Run configuration (controller, filter, window, basis)
        state: Starting state (defaults to the path start at planned speed)
        name: Label used in logs

    Returns:
        Entity ID of the created vehicle
    """
    esper.switch_world(world)
    entity = esper.create_entity()

    model = ModelParams(config.scenario.sampling_time)
    noise = NoiseConfig.from_settings(config.filter, config.scenario.noise)

    esper.add_component(entity, SurroundingVehicle(name))
    esper.add_component(entity, TrueState(state if state is not None else start_state(path)))
    esper.add_component(entity, PathFollower(path, config.controller))
    esper.add_component(entity, Observation())
    esper.add_component(entity, FilterTrack(EkfTracker(model, noise)))
    esper.add_component(entity, ControlHistory(
        ControlWindow(config.control_set.window),
        primitive_basis(config.control_set.generators),
    ))
    esper.add_component(entity, Prediction())
    esper.add_component(entity, StageTimings())
    esper.add_component(entity, RunLog())

    return entity
