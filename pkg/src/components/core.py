"""Core ECS components for tracked vehicles."""
from typing import Optional

from src.config import ControllerParams
from src.estimation.ekf import Measurement
from src.model.kinematics import ControlSample, VehicleState
from src.sim.scenario import Path


class SurroundingVehicle:
    """Marker component for a vehicle whose occupancy is predicted."""

    def __init__(self, name: str = "sv") -> None:
        self.name: str = name

    def __repr__(self) -> str:
        return f"SurroundingVehicle(name={self.name!r})"


class TrueState:
    """Simulated ground truth: current state and the control that produced it."""

    def __init__(self, state: VehicleState, control: Optional[ControlSample] = None, k: int = 0) -> None:
        self.state: VehicleState = state
        self.control: ControlSample = control if control is not None else ControlSample(0.0, 0.0)
        self.k: int = k

    def __repr__(self) -> str:
        return f"TrueState(k={self.k}, state={self.state})"


class PathFollower:
    """Reference path and tracking-controller progress."""

    def __init__(self, path: Path, params: ControllerParams, progress: int = 0) -> None:
        self.path: Path = path
        self.params: ControllerParams = params
        self.progress: int = progress

    @property
    def label(self) -> str:
        return self.path.labels[self.progress]

    def __repr__(self) -> str:
        return f"PathFollower(progress={self.progress}, label={self.label!r})"


class Observation:
    """Latest measurement of the vehicle."""

    def __init__(self, measurement: Optional[Measurement] = None) -> None:
        self.measurement: Optional[Measurement] = measurement

    def __repr__(self) -> str:
        return f"Observation(measurement={self.measurement})"


class StageTimings:
    """Wall-clock duration of each pipeline stage in the current iteration."""

    def __init__(self) -> None:
        self.durations: dict[str, float] = {}

    def record(self, stage: str, seconds: float) -> None:
        self.durations[stage] = self.durations.get(stage, 0.0) + seconds

    def reset(self) -> None:
        self.durations = {}

    def __repr__(self) -> str:
        return f"StageTimings(durations={self.durations!r})"
