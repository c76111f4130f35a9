"""Tests for record files and JSON schemas."""
import csv
import json
from collections import Counter

import numpy as np
import pytest

from src.config import RunConfig
from src.errors import InvalidSetError, OutputError, RecordError
from src.export.protocol import (
    control_set_from_dict,
    control_set_to_dict,
    dumps,
    metrics_to_dict,
    tube_to_list,
    zonotope_from_dict,
    zonotope_to_dict,
)
from src.export.records import (
    CONFIG_FILE,
    CONTROL_SETS_FILE,
    METRICS_FILE,
    OCCUPANCY_HEADER,
    PATH_FILE,
    TIMING_FILE,
    TIMING_SWEEP_FILE,
    TRAJECTORY_FILE,
    TRAJECTORY_HEADER,
    containment_tolerance,
    ensure_directory,
    export_plots,
    load_evaluation,
    write_run,
)
from src.sets.zonotope import Zonotope
from src.sim.experiment import run_experiment, sweep_horizons
from src.sim.metrics import compute_metrics

SHORT = RunConfig().with_overrides(iterations=8, horizon=4)


@pytest.fixture(scope="module")
def short_record():
    return run_experiment(SHORT)


@pytest.fixture
def record_dir(tmp_path, short_record):
    """A written record directory with a horizon sweep."""
    directory = tmp_path / "record"
    report = compute_metrics(short_record, sensitivity=False)
    write_run(directory, short_record, report, sweep_horizons(short_record, [3, 4]))
    return directory


def _rows(path):
    with open(path, newline="") as f:
        return list(csv.reader(f))


def test_zonotope_to_dict_lists_generator_columns():
    """Generators are serialized column by column."""
    data = zonotope_to_dict(Zonotope([1.0, 2.0], [[1.0, 0.5], [0.0, 0.5]]))
    assert data == {"center": [1.0, 2.0], "generators": [[1.0, 0.0], [0.5, 0.5]]}
    assert np.allclose(zonotope_from_dict(data).generators, [[1.0, 0.5], [0.0, 0.5]])


def test_zonotope_from_dict_without_generators_is_a_point():
    """A missing generator list parses as a point."""
    z = zonotope_from_dict({"center": [0.0, 1.0]})
    assert z.order == 0


def test_zonotope_from_dict_rejects_bad_input():
    """Missing centers and ragged generators are invalid."""
    with pytest.raises(InvalidSetError):
        zonotope_from_dict({"generators": [[1.0, 0.0]]})
    with pytest.raises(InvalidSetError):
        zonotope_from_dict({"center": [0.0, 0.0], "generators": [[1.0]]})


def test_control_set_dict_keeps_provenance(short_record):
    """Control sets carry k, alphas and the window they were fitted to."""
    it = short_record.iterations[-1]
    data = control_set_to_dict(it.control_set, it.k)
    assert data["k"] == it.k
    assert len(data["alphas"]) == SHORT.control_set.generators
    assert len(data["window"]) == min(it.k, SHORT.control_set.window)
    parsed = control_set_from_dict(json.loads(dumps(data)))
    assert np.allclose(parsed.zonotope.generators, it.control_set.zonotope.generators)
    assert parsed.window == it.control_set.window


def test_tube_to_list_tags_steps(short_record):
    """Each tube step carries its index and timestamp."""
    it = short_record.iterations[0]
    entries = tube_to_list(it.tube, it.t)
    assert [e["step"] for e in entries] == list(range(SHORT.prediction.horizon + 1))
    assert entries[2]["t"] == pytest.approx(it.t + 2 * SHORT.scenario.sampling_time)
    assert len(entries[0]["center"]) == 4


def test_write_run_writes_record_files(record_dir, short_record):
    """Trajectory, path, occupancy, control sets, config, metrics and timing are written."""
    trajectory = _rows(record_dir / TRAJECTORY_FILE)
    assert tuple(trajectory[0]) == TRAJECTORY_HEADER
    assert len(trajectory) == len(short_record) + 1
    assert len(_rows(record_dir / PATH_FILE)) == len(short_record.path) + 1
    occupancy = _rows(record_dir / "occupancy.csv")
    assert tuple(occupancy[0]) == OCCUPANCY_HEADER
    assert {int(row[0]) for row in occupancy[1:]} == set(range(1, SHORT.prediction.horizon + 1))
    assert len(json.loads((record_dir / CONTROL_SETS_FILE).read_text())) == len(short_record)
    assert json.loads((record_dir / CONFIG_FILE).read_text())["prediction"]["horizon"] == 4


def test_metrics_file_is_deterministic_part_of_report(record_dir, short_record):
    """metrics.json holds no wall-clock times."""
    metrics = json.loads((record_dir / METRICS_FILE).read_text())
    assert metrics == json.loads(dumps(metrics_to_dict(compute_metrics(short_record, sensitivity=False))))
    assert "mean_stage_times" not in metrics
    timing = json.loads((record_dir / TIMING_FILE).read_text())
    assert set(timing) == {"horizon", "mean_stage_times", "mean_iteration_time"}


def test_load_evaluation_includes_sweep(record_dir):
    """The sweep file is loaded when present."""
    evaluation = load_evaluation(record_dir)
    assert set(evaluation) == {"metrics", "timing", "timing_sweep"}
    assert sorted(evaluation["timing_sweep"]) == ["3", "4"]


def test_load_evaluation_missing_files(tmp_path):
    """Missing directories and files are record errors."""
    with pytest.raises(RecordError):
        load_evaluation(tmp_path / "absent")
    with pytest.raises(RecordError):
        load_evaluation(tmp_path)


def test_load_evaluation_without_sweep(record_dir):
    """Records without a sweep evaluate without one."""
    (record_dir / TIMING_SWEEP_FILE).unlink()
    assert "timing_sweep" not in load_evaluation(record_dir)


def test_export_plots_writes_bundles(record_dir, short_record):
    """Four plot bundles are written under plots/."""
    written = export_plots(record_dir)
    assert sorted(p.name for p in written) == [
        "containment.csv", "control_actions.csv", "occupancy_polygons.csv", "path_trace.csv",
    ]
    assert len(_rows(record_dir / "plots" / "containment.csv")) == len(short_record)
    actions = _rows(record_dir / "plots" / "control_actions.csv")
    for row in actions[1:]:
        a_min, a_max = float(row[7]), float(row[8])
        assert a_min <= a_max


def test_export_plots_filters_polygons_by_step(record_dir):
    """Only the requested iterations' polygons are exported."""
    export_plots(record_dir, steps=[2, 5])
    polygons = _rows(record_dir / "plots" / "occupancy_polygons.csv")
    assert {int(row[0]) for row in polygons[1:]} == {2, 5}


def test_export_plots_needs_control_sets(record_dir):
    """Simulation-only directories cannot be plotted."""
    (record_dir / CONTROL_SETS_FILE).unlink()
    with pytest.raises(RecordError):
        export_plots(record_dir)


def test_ensure_directory_reports_unwritable_location(tmp_path):
    """A path below a regular file cannot be created."""
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(OutputError):
        ensure_directory(blocker / "sub")


def test_exported_containment_matches_metrics(record_dir):
    """The plotted classification counts agree with metrics.json."""
    export_plots(record_dir)
    counts = Counter(row[3] for row in _rows(record_dir / "plots" / "containment.csv")[1:])
    metrics = json.loads((record_dir / METRICS_FILE).read_text())
    assert {label: counts.get(label, 0) for label in metrics["containment_counts"]} == metrics["containment_counts"]


def test_export_plots_uses_the_record_tolerance(record_dir):
    """A record evaluated with a loose tolerance exports every observation as inside."""
    config_path = record_dir / CONFIG_FILE
    config = json.loads(config_path.read_text())
    config["prediction"]["containment_tol"] = 1e6
    config_path.write_text(json.dumps(config))
    assert containment_tolerance(record_dir) == 1e6
    export_plots(record_dir)
    rows = _rows(record_dir / "plots" / "containment.csv")[1:]
    assert rows
    assert {row[3] for row in rows} == {"inside"}


def test_export_plots_needs_config(record_dir):
    """Without config.json the containment tolerance is unknown."""
    (record_dir / CONFIG_FILE).unlink()
    with pytest.raises(RecordError):
        export_plots(record_dir)
