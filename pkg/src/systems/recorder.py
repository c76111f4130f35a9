"""Recorder system: snapshots every vehicle's pipeline outputs per iteration."""
import esper

from src.components.core import Observation, PathFollower, StageTimings, TrueState
from src.components.estimation import ControlHistory, FilterTrack
from src.components.prediction import Prediction, RunLog
from src.model.kinematics import AugmentedState
from src.sim.record import IterationRecord


class RecorderSystem(esper.Processor):
    """Appends an ``IterationRecord`` once all stages produced output, then resets timings."""

    def __init__(self, sampling_time: float):
        super().__init__()
        self.sampling_time = sampling_time

    def process(self):
        for ent, (truth, observation, track, history, prediction, timings, log) in esper.get_components(
            TrueState, Observation, FilterTrack, ControlHistory, Prediction, StageTimings, RunLog
        ):
            if prediction.tube is None or track.estimate is None:
                timings.reset()
                continue
            label = "straight"
            if esper.has_component(ent, PathFollower):
                label = esper.component_for_entity(ent, PathFollower).label
            log.iterations.append(IterationRecord(
                k=truth.k,
                t=truth.k * self.sampling_time,
                truth=AugmentedState.compose(truth.state, truth.control),
                measurement=observation.measurement,
                belief=track.tracker.belief,
                estimate=track.estimate,
                control_set=history.control_set,
                tube=prediction.tube,
                occupancy=list(prediction.occupancy),
                timings=dict(timings.durations),
                label=label,
            ))
            timings.reset()
