"""Control-set system: slides the window and refits the Control-Input set."""
import time

import esper

from src.components.core import StageTimings
from src.components.estimation import ControlHistory, FilterTrack
from src.config import ControlSetConfig
from src.estimation.control_set import estimate_control_set, push_observation


class ControlSetSystem(esper.Processor):
    """Pushes the latest estimate and solves the enclosing LP."""

    def __init__(self, config: ControlSetConfig):
        super().__init__()
        self.config = config

    def process(self):
        for ent, (track, history, timings) in esper.get_components(FilterTrack, ControlHistory, StageTimings):
            if track.estimate is None:
                continue
            start = time.perf_counter()
            history.window = push_observation(history.window, track.estimate)
            history.control_set = estimate_control_set(
                history.window, history.basis, self.config, track.tracker.belief,
            )
            timings.record("control_set", time.perf_counter() - start)
