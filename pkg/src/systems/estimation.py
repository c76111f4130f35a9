"""Estimation system: EKF predict/update on every new measurement."""
import time

import esper

from src.components.core import Observation, StageTimings
from src.components.estimation import FilterTrack
from src.estimation.ekf import estimated_control


class EstimationSystem(esper.Processor):
    """Feeds measurements to each vehicle's tracker and exposes the control estimate."""

    def process(self):
        for ent, (observation, track, timings) in esper.get_components(Observation, FilterTrack, StageTimings):
            if observation.measurement is None:
                continue
            start = time.perf_counter()
            belief = track.tracker.step(observation.measurement)
            track.estimate = estimated_control(belief) if belief is not None else None
            timings.record("ekf", time.perf_counter() - start)
