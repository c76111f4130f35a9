"""Prediction-stage ECS components."""
from typing import Optional

from src.prediction.occupancy import OccupancySet
from src.prediction.reachability import ReachableTube
from src.sim.record import IterationRecord


class Prediction:
    """Latest reachable tube and occupancy sets."""

    def __init__(self) -> None:
        self.tube: Optional[ReachableTube] = None
        self.occupancy: list[OccupancySet] = []

    def __repr__(self) -> str:
        return f"Prediction(steps={len(self.occupancy)})"


class RunLog:
    """Iteration records accumulated by the recorder."""

    def __init__(self) -> None:
        self.iterations: list[IterationRecord] = []

    def __repr__(self) -> str:
        return f"RunLog(iterations={len(self.iterations)})"
