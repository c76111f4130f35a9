"""Evaluation metrics: control containment, occupancy success, areas, timing."""
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from src.config import Config
from src.estimation.control_set import ControlInputSet
from src.model.kinematics import ControlSample
from src.prediction.occupancy import OccupancySet, dilation_at, simplify_occupancy
from src.sets.zonotope import contains_point, contains_points, hull_bounds
from src.sim.record import STAGES, RunRecord
from src.sim.state import ContainmentClass


@dataclass
class BaselineReport:
    """Occupancy success and area of the fixed bounding-box Control-Input set."""

    step_success_rates: list[float]
    overall_rate: float
    mean_areas: list[float]
    control_set_bounds: dict[str, list[float]]


@dataclass
class MetricsReport:
    """Aggregated results of one run (rates in percent, areas in m^2, times in s)."""

    iterations: int
    horizon: int
    control_containment_rate: float
    containment_counts: dict[str, int]
    step_success_rates: list[float]
    overall_rate: float
    mean_areas: list[float]
    mean_stage_times: dict[str, float] = field(default_factory=dict)
    mean_iteration_time: float = 0.0
    baseline: Optional[BaselineReport] = None
    dilation_sensitivity: dict[str, dict] = field(default_factory=dict)

    @property
    def occupancy_sets(self) -> int:
        return self.iterations * self.horizon


def classify_containment(
    control_set: ControlInputSet, sample: ControlSample, tol: float = Config.CONTAINMENT_TOL
) -> ContainmentClass:
    """Inside the set, or outside it along a, kappa or both (judged on the hull)."""
    if contains_point(control_set.zonotope, sample.as_array(), tol):
        return ContainmentClass.INSIDE
    low, high = hull_bounds(control_set.zonotope)
    out_a = not (low[0] - tol <= sample.a <= high[0] + tol)
    out_kappa = not (low[1] - tol <= sample.kappa <= high[1] + tol)
    if out_a and out_kappa:
        return ContainmentClass.OUTSIDE_BOTH
    if out_kappa:
        return ContainmentClass.OUTSIDE_KAPPA
    if out_a:
        return ContainmentClass.OUTSIDE_A
    # outside the zonotope but inside its bounding box
    return ContainmentClass.OUTSIDE_BOTH


def containment_sequence(record: RunRecord, tol: float = Config.CONTAINMENT_TOL) -> list[ContainmentClass]:
    """Class of each next estimate with respect to the current set (n - 1 entries)."""
    its = record.iterations
    return [classify_containment(its[i].control_set, its[i + 1].estimate, tol) for i in range(len(its) - 1)]


def occupancy_hits(
    occupancy: list[list[OccupancySet]], truth: list[tuple[float, float]], tol: float = Config.CONTAINMENT_TOL
) -> np.ndarray:
    """Boolean matrix (iteration, step): true position at k + j inside occupancy step j."""
    n = len(occupancy)
    horizon = len(occupancy[0]) if n else 0
    hits = np.zeros((n, horizon), dtype=bool)
    for i, sets in enumerate(occupancy):
        for j, occ in enumerate(sets, start=1):
            # truth[i] is the state at iteration i, so step j targets truth[i + j]
            if i + j >= len(truth):
                continue
            hits[i, j - 1] = contains_points(occ.zonotope, np.array([truth[i + j]]), tol)[0]
    return hits


def _rates(hits: np.ndarray) -> tuple[list[float], float]:
    per_step = [100.0 * float(x) for x in hits.mean(axis=0)] if hits.size else []
    overall = float(np.mean(per_step)) if per_step else 0.0
    return per_step, overall


def _mean_areas(occupancy: list[list[OccupancySet]]) -> list[float]:
    if not occupancy:
        return []
    areas = np.array([[occ.area for occ in sets] for sets in occupancy])
    return [float(x) for x in areas.mean(axis=0)]


def dilation_sensitivity(record: RunRecord, dilations=Config.SENSITIVITY_DILATIONS) -> dict[str, dict]:
    """Occupancy success and mean last-step area when re-extracted with other dilations."""
    prediction = record.config.prediction
    truth = record.truth_positions()
    results = {}
    for radius in dilations:
        occupancy = []
        for it in record.iterations:
            sets = []
            for step in range(1, it.tube.horizon + 1):
                radii = dilation_at(step, (radius, radius), prediction.dilation_growth)
                zonotope = simplify_occupancy(it.tube.steps[step], radii, prediction.occupancy_budget)
                sets.append(OccupancySet.from_zonotope(zonotope, step))
            occupancy.append(sets)
        per_step, overall = _rates(occupancy_hits(occupancy, truth, prediction.containment_tol))
        areas = _mean_areas(occupancy)
        results[f"{radius:g}"] = {
            "step_success_rates": per_step,
            "overall_rate": overall,
            "last_step_area": areas[-1] if areas else 0.0,
        }
    return results


def compute_metrics(
    record: RunRecord,
    truth: list[tuple[float, float]] | None = None,
    baseline_pass=None,
    baseline_set: ControlInputSet | None = None,
    sensitivity: bool = True,
) -> MetricsReport:
    """Score a run against ground truth.

    Args:
        record: Completed run
        truth: True positions per iteration plus tail (defaults to the record's)
        baseline_pass: Optional prediction pass under the worst-case set
        baseline_set: The worst-case set itself, reported with the baseline
        sensitivity: Also re-extract occupancy at the sensitivity dilations
    """
    tol = record.config.prediction.containment_tol
    truth = truth if truth is not None else record.truth_positions()
    classes = containment_sequence(record, tol)
    counts = {c.value: sum(1 for x in classes if x is c) for c in ContainmentClass}
    containment_rate = 100.0 * counts[ContainmentClass.INSIDE.value] / len(classes) if classes else 0.0

    occupancy = [it.occupancy for it in record.iterations]
    per_step, overall = _rates(occupancy_hits(occupancy, truth, tol))

    stage_times = {
        stage: float(np.mean([it.timings.get(stage, 0.0) for it in record.iterations])) if len(record) else 0.0
        for stage in STAGES
    }

    baseline = None
    if baseline_pass is not None:
        base_steps, base_overall = _rates(occupancy_hits(baseline_pass.occupancy, truth, tol))
        bounds = {}
        if baseline_set is not None:
            low, high = hull_bounds(baseline_set.zonotope)
            bounds = {"a": [float(low[0]), float(high[0])], "kappa": [float(low[1]), float(high[1])]}
        baseline = BaselineReport(base_steps, base_overall, _mean_areas(baseline_pass.occupancy), bounds)

    return MetricsReport(
        iterations=len(record),
        horizon=record.config.prediction.horizon,
        control_containment_rate=containment_rate,
        containment_counts=counts,
        step_success_rates=per_step,
        overall_rate=overall,
        mean_areas=_mean_areas(occupancy),
        mean_stage_times=stage_times,
        mean_iteration_time=float(sum(stage_times.values())),
        baseline=baseline,
        dilation_sensitivity=dilation_sensitivity(record) if sensitivity else {},
    )
