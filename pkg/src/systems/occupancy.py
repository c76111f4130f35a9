"""Occupancy system: extracts planar occupancy sets from the tube."""
import time

import esper

from src.components.core import StageTimings
from src.components.prediction import Prediction
from src.config import PredictionConfig
from src.prediction.occupancy import extract_occupancy


class OccupancySystem(esper.Processor):
    """Projects, simplifies and dilates each tube step."""

    def __init__(self, config: PredictionConfig):
        super().__init__()
        self.config = config

    def process(self):
        for ent, (prediction, timings) in esper.get_components(Prediction, StageTimings):
            if prediction.tube is None:
                continue
            start = time.perf_counter()
            prediction.occupancy = extract_occupancy(
                prediction.tube, self.config.dilation,
                self.config.occupancy_budget, self.config.dilation_growth,
            )
            timings.record("occupancy", time.perf_counter() - start)
