"""Run records: everything one closed-loop experiment produced."""
from dataclasses import dataclass, field
from typing import Optional

from src.config import RunConfig
from src.estimation.control_set import ControlInputSet
from src.estimation.ekf import EkfBelief, Measurement
from src.model.kinematics import AugmentedState, ControlSample, VehicleState
from src.prediction.occupancy import OccupancySet
from src.prediction.reachability import ReachableTube
from src.sim.scenario import Path

STAGES = ("ekf", "control_set", "reachability", "occupancy")


@dataclass(eq=False)
class IterationRecord:
    """One pipeline iteration at sample index k."""

    k: int
    t: float
    truth: AugmentedState
    measurement: Measurement
    belief: EkfBelief
    estimate: ControlSample
    control_set: ControlInputSet
    tube: ReachableTube
    occupancy: list[OccupancySet]
    timings: dict[str, float]
    label: str = "straight"

    @property
    def iteration_time(self) -> float:
        return sum(self.timings.get(stage, 0.0) for stage in STAGES)


@dataclass(eq=False)
class RunRecord:
    """Closed-loop run: iterations plus the ground truth needed to score them."""

    config: RunConfig
    path: Path
    initial_truth: VehicleState
    initial_measurement: Measurement
    iterations: list[IterationRecord] = field(default_factory=list)
    truth_tail: list[VehicleState] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.iterations)

    def truth_positions(self) -> list[tuple[float, float]]:
        """True positions for iterations 0..n-1 followed by the tail states."""
        states = [it.truth.vehicle for it in self.iterations] + list(self.truth_tail)
        return [(s.p_x, s.p_y) for s in states]

    def estimates(self) -> list[ControlSample]:
        return [it.estimate for it in self.iterations]

    def find(self, k: int) -> Optional[IterationRecord]:
        return next((it for it in self.iterations if it.k == k), None)


@dataclass(frozen=True)
class TrajectorySample:
    """Truth, measurement and filter estimate at sample index k (no prediction)."""

    k: int
    t: float
    truth: AugmentedState
    measurement: Measurement
    estimate: Optional[ControlSample]
    label: str = "straight"

    @classmethod
    def from_iteration(cls, it: IterationRecord) -> "TrajectorySample":
        return cls(it.k, it.t, it.truth, it.measurement, it.estimate, it.label)
