"""Closed-loop experiment, worst-case baseline and horizon sweep."""
import logging
import time
from dataclasses import dataclass

import esper
import numpy as np

from src.components.core import Observation, PathFollower, TrueState
from src.components.estimation import FilterTrack
from src.components.prediction import RunLog
from src.config import RunConfig
from src.entities.vehicle import create_surrounding_vehicle
from src.errors import RecordError
from src.estimation.control_set import (
    ControlInputSet,
    ControlWindow,
    estimate_control_set,
    primitive_basis,
    push_observation,
)
from src.model.kinematics import AugmentedState, ControlSample
from src.prediction.occupancy import OccupancySet, extract_occupancy
from src.prediction.reachability import ReachableTube, configured_radii, propagate
from src.sets.zonotope import Zonotope, hull_bounds
from src.sim.controller import sv_step
from src.sim.engine import PredictionEngine
from src.sim.record import RunRecord, TrajectorySample
from src.sim.scenario import generate_scenario

logger = logging.getLogger(__name__)


def run_experiment(config: RunConfig | None = None) -> RunRecord:
    """Simulate the vehicle and run the full pipeline every sampling interval.

    One priming measurement is taken at k = 0; iterations 1..N each drive,
    measure, filter, fit the Control-Input set, propagate and extract
    occupancy. Ground truth continues N_p steps past the last iteration.
    """
    config = config or RunConfig()
    path = generate_scenario(config.scenario)
    engine = PredictionEngine(config)
    try:
        vehicle = create_surrounding_vehicle(engine.world_name, path, config)
        truth = esper.component_for_entity(vehicle, TrueState)
        observation = esper.component_for_entity(vehicle, Observation)
        follower = esper.component_for_entity(vehicle, PathFollower)

        initial_truth = truth.state
        engine.prime()
        initial_measurement = observation.measurement

        for _ in range(config.scenario.iterations):
            engine.update()

        tail = []
        state, progress = truth.state, follower.progress
        for _ in range(config.prediction.horizon):
            step = sv_step(
                state, path, config.controller, config.scenario.noise,
                engine.model, engine.rng, progress,
            )
            state, progress = step.state, step.progress
            tail.append(state)

        iterations = esper.component_for_entity(vehicle, RunLog).iterations
    finally:
        engine.close()

    logger.info("run finished: %d iterations, seed %d", len(iterations), config.scenario.seed)
    return RunRecord(config, path, initial_truth, initial_measurement, iterations, tail)


def simulate(config: RunConfig | None = None) -> list[TrajectorySample]:
    """Drive, measure and filter for N iterations without the set-based stages.

    Consumes the run RNG in the same order as ``run_experiment``, so the
    trajectory matches the one a full run with the same seed produces.
    """
    config = config or RunConfig()
    path = generate_scenario(config.scenario)
    engine = PredictionEngine(config, predict=False)
    samples = []
    try:
        vehicle = create_surrounding_vehicle(engine.world_name, path, config)
        truth = esper.component_for_entity(vehicle, TrueState)
        observation = esper.component_for_entity(vehicle, Observation)
        follower = esper.component_for_entity(vehicle, PathFollower)
        track = esper.component_for_entity(vehicle, FilterTrack)

        engine.prime()
        for _ in range(config.scenario.iterations):
            engine.update()
            samples.append(TrajectorySample(
                k=truth.k,
                t=truth.k * config.scenario.sampling_time,
                truth=AugmentedState.compose(truth.state, truth.control),
                measurement=observation.measurement,
                estimate=track.estimate,
                label=follower.label,
            ))
    finally:
        engine.close()

    logger.info("simulated %d samples, seed %d", len(samples), config.scenario.seed)
    return samples


def worst_case_baseline(record: RunRecord) -> ControlInputSet:
    """Fixed bounding box over every Control-Input set of the run.

    Each set encloses its window of estimates, so the box covers every
    observed control as well as each adaptive set.

    Raises:
        RecordError: If the record has no iterations
    """
    if len(record) == 0:
        raise RecordError("cannot build a baseline from an empty record")
    bounds = [hull_bounds(it.control_set.zonotope) for it in record.iterations]
    low = np.min([lo for lo, _ in bounds], axis=0)
    high = np.max([hi for _, hi in bounds], axis=0)
    center = 0.5 * (low + high)
    zonotope = Zonotope.box(center, 0.5 * (high - low))
    return ControlInputSet(zonotope, (), ControlSample.from_array(center), tuple(record.estimates()))


@dataclass(eq=False)
class PredictionPass:
    """Tubes and occupancy sets of a re-run prediction, one entry per iteration."""

    tubes: list[ReachableTube]
    occupancy: list[list[OccupancySet]]
    iteration_times: list[float]



def predict_with_control_set(record: RunRecord, control_set: ControlInputSet, horizon: int | None = None) -> PredictionPass:
    """Second prediction pass from the recorded beliefs under a fixed Control-Input set."""
    config = record.config
    horizon = horizon or config.prediction.horizon
    params = record.iterations[0].tube.params if record.iterations else None
    tubes, occupancy, times = [], [], []
    for it in record.iterations:
        start = time.perf_counter()
        tube = propagate(
            it.belief, control_set, horizon, params,
            config.prediction.generator_budget, configured_radii(it.belief, config.prediction),
        )
        sets = extract_occupancy(
            tube, config.prediction.dilation, config.prediction.occupancy_budget,
            config.prediction.dilation_growth,
        )
        times.append(time.perf_counter() - start)
        tubes.append(tube)
        occupancy.append(sets)
    return PredictionPass(tubes, occupancy, times)


def sweep_horizons(record: RunRecord, horizons) -> dict[int, float]:
    """Mean per-iteration time (EKF + LP + reachability + occupancy) for each horizon.

    The recorded EKF time is reused; the remaining stages are re-run on the
    recorded control estimates and beliefs.
    """
    if len(record) == 0:
        raise RecordError("cannot sweep horizons over an empty record")
    config = record.config
    ekf_time = float(np.mean([it.timings.get("ekf", 0.0) for it in record.iterations]))
    basis = primitive_basis(config.control_set.generators)
    params = record.iterations[0].tube.params
    results: dict[int, float] = {}
    for horizon in horizons:
        window = ControlWindow(config.control_set.window)
        total = 0.0
        for it in record.iterations:
            start = time.perf_counter()
            window = push_observation(window, it.estimate)
            control_set = estimate_control_set(window, basis, config.control_set, it.belief)
            tube = propagate(
                it.belief, control_set, horizon, params,
                config.prediction.generator_budget, configured_radii(it.belief, config.prediction),
            )
            extract_occupancy(
                tube, config.prediction.dilation, config.prediction.occupancy_budget,
                config.prediction.dilation_growth,
            )
            total += time.perf_counter() - start
        results[int(horizon)] = ekf_time + total / len(record)
        logger.debug("horizon %d: %.3f ms per iteration", horizon, 1e3 * results[int(horizon)])
    return results
