"""Record directories: CSV/JSON files written by ``simulate``/``run`` and read back
by ``evaluate``/``export-plots``."""
import csv
import json
import logging
from pathlib import Path as FilePath
from typing import Iterable, Optional, Sequence

from src.errors import OutputError, RecordError
from src.export.protocol import (
    control_set_from_dict,
    control_set_to_dict,
    dumps,
    metrics_to_dict,
    timing_to_dict,
)
from src.model.kinematics import ControlSample
from src.sets.zonotope import hull_bounds
from src.sim.metrics import MetricsReport, classify_containment
from src.sim.record import RunRecord, TrajectorySample
from src.sim.scenario import Path

logger = logging.getLogger(__name__)

TRAJECTORY_FILE = "trajectory.csv"
MEASUREMENTS_FILE = "measurements.csv"
PATH_FILE = "path.csv"
OCCUPANCY_FILE = "occupancy.csv"
CONTROL_SETS_FILE = "control_sets.json"
CONFIG_FILE = "config.json"
METRICS_FILE = "metrics.json"
TIMING_FILE = "timing.json"
TIMING_SWEEP_FILE = "timing_sweep.json"
EVALUATION_FILE = "evaluation.json"
PLOTS_DIR = "plots"

TRAJECTORY_HEADER = (
    "k", "t", "px", "py", "theta", "v", "a_true", "kappa_true",
    "z_px", "z_py", "z_v", "a_est", "kappa_est", "label",
)
MEASUREMENT_HEADER = ("k", "t", "z_px", "z_py", "z_v")
OCCUPANCY_HEADER = ("step", "k", "vertex_index", "x", "y")
PATH_HEADER = ("index", "s", "x", "y", "heading", "curvature", "speed", "label")


def ensure_directory(directory) -> FilePath:
    """Create ``directory`` (and parents) or raise ``OutputError``."""
    directory = FilePath(directory)
    try:
        directory.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise OutputError(f"cannot create output directory {directory}: {e}") from e
    return directory


def write_text(path: FilePath, text: str) -> FilePath:
    try:
        path.write_text(text)
    except OSError as e:
        raise OutputError(f"cannot write {path}: {e}") from e
    return path


def write_csv(path: FilePath, header: Sequence[str], rows: Iterable[Sequence]) -> FilePath:
    try:
        with open(path, "w", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as e:
        raise OutputError(f"cannot write {path}: {e}") from e
    return path


def read_csv(directory, name: str) -> list[dict[str, str]]:
    path = FilePath(directory) / name
    if not path.is_file():
        raise RecordError(f"record file missing: {path}")
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def read_json(directory, name: str):
    path = FilePath(directory) / name
    if not path.is_file():
        raise RecordError(f"record file missing: {path}")
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise RecordError(f"record file {path} is not valid JSON: {e}") from e


def _optional(value) -> object:
    return "" if value is None else value


def _trajectory_row(sample: TrajectorySample) -> tuple:
    truth, z, est = sample.truth, sample.measurement, sample.estimate
    return (
        sample.k, sample.t, truth.p_x, truth.p_y, truth.theta, truth.v, truth.a, truth.kappa,
        z.p_x, z.p_y, z.v,
        _optional(est.a if est else None), _optional(est.kappa if est else None),
        sample.label,
    )


def write_trajectory(directory, samples: Sequence[TrajectorySample]) -> list[FilePath]:
    """Trajectory and measurement CSVs, one row per iteration."""
    directory = ensure_directory(directory)
    return [
        write_csv(directory / TRAJECTORY_FILE, TRAJECTORY_HEADER, (_trajectory_row(s) for s in samples)),
        write_csv(
            directory / MEASUREMENTS_FILE, MEASUREMENT_HEADER,
            ((s.k, s.t, s.measurement.p_x, s.measurement.p_y, s.measurement.v) for s in samples),
        ),
    ]


def write_path(directory, path: Path) -> FilePath:
    rows = (
        (i, path.s[i], path.x[i], path.y[i], path.heading[i], path.curvature[i], path.speed[i], path.labels[i])
        for i in range(len(path))
    )
    return write_csv(ensure_directory(directory) / PATH_FILE, PATH_HEADER, rows)


def occupancy_rows(record: RunRecord, steps: Optional[set[int]] = None) -> list[tuple]:
    """``step,k,vertex_index,x,y`` rows for every (or each selected) iteration."""
    rows = []
    for it in record.iterations:
        if steps is not None and it.k not in steps:
            continue
        for occ in it.occupancy:
            for index, (x, y) in enumerate(occ.polygon):
                rows.append((occ.step, it.k, index, float(x), float(y)))
    return rows


def write_run(
    directory,
    record: RunRecord,
    report: MetricsReport,
    sweep: Optional[dict[int, float]] = None,
) -> list[FilePath]:
    """Write every file of a run record; returns the written paths."""
    directory = ensure_directory(directory)
    samples = [TrajectorySample.from_iteration(it) for it in record.iterations]
    written = write_trajectory(directory, samples)
    written.append(write_path(directory, record.path))
    written.append(write_csv(directory / OCCUPANCY_FILE, OCCUPANCY_HEADER, occupancy_rows(record)))
    control_sets = [control_set_to_dict(it.control_set, it.k) for it in record.iterations]
    written.append(write_text(directory / CONTROL_SETS_FILE, dumps(control_sets)))
    written.append(write_text(directory / CONFIG_FILE, dumps(record.config.to_dict())))
    written.append(write_text(directory / METRICS_FILE, dumps(metrics_to_dict(report))))
    written.append(write_text(directory / TIMING_FILE, dumps(timing_to_dict(report))))
    if sweep is not None:
        sweep_data = {str(horizon): seconds for horizon, seconds in sorted(sweep.items())}
        written.append(write_text(directory / TIMING_SWEEP_FILE, dumps(sweep_data)))
    logger.info("wrote %d files to %s", len(written), directory)
    return written


def load_evaluation(directory) -> dict:
    """Metrics, timing and (if present) the horizon sweep of a record directory.

    Raises:
        RecordError: If the directory or a required file is missing
    """
    directory = FilePath(directory)
    if not directory.is_dir():
        raise RecordError(f"record directory missing: {directory}")
    evaluation = {
        "metrics": read_json(directory, METRICS_FILE),
        "timing": read_json(directory, TIMING_FILE),
    }
    if (directory / TIMING_SWEEP_FILE).is_file():
        evaluation["timing_sweep"] = read_json(directory, TIMING_SWEEP_FILE)
    return evaluation


def containment_tolerance(directory) -> float:
    """Containment tolerance the record was evaluated with."""
    config = read_json(directory, CONFIG_FILE)
    try:
        return float(config["prediction"]["containment_tol"])
    except (KeyError, TypeError, ValueError) as e:
        raise RecordError(f"{CONFIG_FILE} has no usable prediction.containment_tol: {e}") from e


def export_plots(directory, steps: Optional[Sequence[int]] = None) -> list[FilePath]:
    """Write the plot-data bundles into ``<directory>/plots``.

    Bundles: reference path with the true trace, observed control actions with
    the Control-Input set bounds, containment classification of each next
    observation, and occupancy polygons (only for ``steps`` when given).

    Raises:
        RecordError: If a record file is missing
    """
    directory = FilePath(directory)
    if not directory.is_dir():
        raise RecordError(f"record directory missing: {directory}")
    trajectory = read_csv(directory, TRAJECTORY_FILE)
    path_rows = read_csv(directory, PATH_FILE)
    occupancy = read_csv(directory, OCCUPANCY_FILE)
    control_sets = [control_set_from_dict(entry) for entry in read_json(directory, CONTROL_SETS_FILE)]
    tol = containment_tolerance(directory)
    plots = ensure_directory(directory / PLOTS_DIR)

    trace = [("reference", r["index"], r["x"], r["y"], r["label"]) for r in path_rows]
    trace += [("truth", r["k"], r["px"], r["py"], r["label"]) for r in trajectory]
    trace += [("measurement", r["k"], r["z_px"], r["z_py"], r["label"]) for r in trajectory]

    actions = []
    for row, control_set in zip(trajectory, control_sets):
        low, high = hull_bounds(control_set.zonotope)
        actions.append((
            row["k"], row["t"], row["label"], row["a_est"], row["kappa_est"],
            row["a_true"], row["kappa_true"],
            float(low[0]), float(high[0]), float(low[1]), float(high[1]),
        ))

    containment = []
    for i in range(len(control_sets) - 1):
        following = trajectory[i + 1]
        sample = ControlSample(float(following["a_est"]), float(following["kappa_est"]))
        label = classify_containment(control_sets[i], sample, tol)
        containment.append((following["k"], sample.a, sample.kappa, label.value))

    selected = None if steps is None else {int(k) for k in steps}
    polygons = [
        (r["k"], r["step"], r["vertex_index"], r["x"], r["y"])
        for r in occupancy
        if selected is None or int(r["k"]) in selected
    ]

    written = [
        write_csv(plots / "path_trace.csv", ("source", "index", "x", "y", "label"), trace),
        write_csv(
            plots / "control_actions.csv",
            ("k", "t", "label", "a_est", "kappa_est", "a_true", "kappa_true",
             "a_min", "a_max", "kappa_min", "kappa_max"),
            actions,
        ),
        write_csv(plots / "containment.csv", ("k", "a_est", "kappa_est", "class"), containment),
        write_csv(plots / "occupancy_polygons.csv", ("k", "step", "vertex_index", "x", "y"), polygons),
    ]
    logger.info("exported %d plot bundles to %s", len(written), plots)
    return written

