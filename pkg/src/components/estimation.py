"""Estimation-stage ECS components."""
from typing import Optional

from src.estimation.control_set import ControlInputSet, ControlWindow, GeneratorBasis
from src.estimation.ekf import EkfTracker
from src.model.kinematics import ControlSample


class FilterTrack:
    """EKF tracker and its latest control-action estimate."""

    def __init__(self, tracker: EkfTracker) -> None:
        self.tracker: EkfTracker = tracker
        self.estimate: Optional[ControlSample] = None

    def __repr__(self) -> str:
        return f"FilterTrack(ready={self.tracker.ready}, estimate={self.estimate})"


class ControlHistory:
    """Sliding window of estimates and the Control-Input set fitted to it."""

    def __init__(self, window: ControlWindow, basis: GeneratorBasis) -> None:
        self.window: ControlWindow = window
        self.basis: GeneratorBasis = basis
        self.control_set: Optional[ControlInputSet] = None

    def __repr__(self) -> str:
        return f"ControlHistory(samples={len(self.window)}, has_set={self.control_set is not None})"
