"""JSON schemas for sets, tubes and metrics."""
import json
from typing import Any

import numpy as np

from src.errors import InvalidSetError
from src.estimation.control_set import ControlInputSet
from src.model.kinematics import ControlSample
from src.prediction.reachability import ReachableTube
from src.sets.zonotope import Zonotope
from src.sim.metrics import BaselineReport, MetricsReport


def zonotope_to_dict(z: Zonotope) -> dict:
    """``{"center": [...], "generators": [[...], ...]}`` with generators as a column list."""
    return {
        "center": [float(x) for x in z.center],
        "generators": [[float(x) for x in column] for column in z.generators.T],
    }


def zonotope_from_dict(data: dict) -> Zonotope:
    """Parse the zonotope schema.

    Raises:
        InvalidSetError: If a field is missing or the generator columns have the wrong length
    """
    if "center" not in data:
        raise InvalidSetError("zonotope missing required field 'center'")
    center = np.asarray(data["center"], dtype=float)
    columns = data.get("generators", [])
    if any(len(column) != center.shape[0] for column in columns):
        raise InvalidSetError(f"every generator must have {center.shape[0]} entries")
    generators = np.array(columns, dtype=float).T if columns else np.zeros((center.shape[0], 0))
    return Zonotope(center, generators)


def control_set_to_dict(control_set: ControlInputSet, k: int | None = None) -> dict:
    data = {} if k is None else {"k": k}
    data.update(zonotope_to_dict(control_set.zonotope))
    data["alphas"] = [float(x) for x in control_set.alphas]
    data["window"] = [[s.a, s.kappa] for s in control_set.window]
    return data


def control_set_from_dict(data: dict) -> ControlInputSet:
    zonotope = zonotope_from_dict(data)
    window = tuple(ControlSample(float(a), float(kappa)) for a, kappa in data.get("window", []))
    return ControlInputSet(
        zonotope,
        tuple(float(x) for x in data.get("alphas", [])),
        ControlSample.from_array(zonotope.center),
        window,
    )


def tube_to_list(tube: ReachableTube, t0: float = 0.0) -> list[dict]:
    """One zonotope object per tube step, tagged with step index and timestamp."""
    sampling_time = tube.params.sampling_time
    return [
        {"step": step, "t": t0 + step * sampling_time, **zonotope_to_dict(z)}
        for step, z in enumerate(tube.steps)
    ]


def _baseline_to_dict(baseline: BaselineReport) -> dict:
    return {
        "step_success_rates": baseline.step_success_rates,
        "overall_rate": baseline.overall_rate,
        "mean_areas": baseline.mean_areas,
        "last_step_area": baseline.mean_areas[-1] if baseline.mean_areas else 0.0,
        "control_set_bounds": baseline.control_set_bounds,
    }


def metrics_to_dict(report: MetricsReport) -> dict:
    """Deterministic part of a report; wall-clock times are serialized by ``timing_to_dict``."""
    data: dict[str, Any] = {
        "iterations": report.iterations,
        "horizon": report.horizon,
        "occupancy_sets": report.occupancy_sets,
        "control_containment_rate": report.control_containment_rate,
        "containment_counts": report.containment_counts,
        "step_success_rates": report.step_success_rates,
        "overall_rate": report.overall_rate,
        "mean_areas": report.mean_areas,
    }
    if report.baseline is not None:
        data["baseline"] = _baseline_to_dict(report.baseline)
    if report.dilation_sensitivity:
        data["dilation_sensitivity"] = report.dilation_sensitivity
    return data


def timing_to_dict(report: MetricsReport) -> dict:
    return {
        "horizon": report.horizon,
        "mean_stage_times": report.mean_stage_times,
        "mean_iteration_time": report.mean_iteration_time,
    }


def dumps(data) -> str:
    """Stable JSON text used for every record file."""
    return json.dumps(data, indent=2) + "\n"
