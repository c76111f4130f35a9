"""Reachability system: propagates the tube from the current belief."""
import time

import esper

from src.components.core import StageTimings
from src.components.estimation import ControlHistory, FilterTrack
from src.components.prediction import Prediction
from src.config import PredictionConfig
from src.model.kinematics import ModelParams
from src.prediction.reachability import configured_radii, propagate


class ReachabilitySystem(esper.Processor):
    """Builds the reachable tube under the latest Control-Input set."""

    def __init__(self, config: PredictionConfig, model: ModelParams):
        super().__init__()
        self.config = config
        self.model = model

    def process(self):
        for ent, (track, history, prediction, timings) in esper.get_components(
            FilterTrack, ControlHistory, Prediction, StageTimings
        ):
            belief = track.tracker.belief
            if belief is None or history.control_set is None:
                continue
            start = time.perf_counter()
            prediction.tube = propagate(
                belief, history.control_set, self.config.horizon, self.model,
                self.config.generator_budget, configured_radii(belief, self.config),
            )
            timings.record("reachability", time.perf_counter() - start)
