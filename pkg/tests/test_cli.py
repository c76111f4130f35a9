"""Tests for the command-line interface."""
import argparse
import json

import pytest

from src.cli import _int_list, build_parser, main


def _lines(path):
    return path.read_text().splitlines()


def test_int_list_accepts_lists_and_ranges():
    """Both 3,4,5 and 3-5 parse to the same horizons."""
    assert _int_list("3,4,5") == [3, 4, 5]
    assert _int_list("3-5") == [3, 4, 5]
    with pytest.raises(argparse.ArgumentTypeError):
        _int_list("a-b")


def test_parser_maps_run_flags():
    """--np, --out and a bare --sweep-horizons parse into the run namespace."""
    args = build_parser().parse_args(["run", "--np", "3", "--out", "x", "--sweep-horizons"])
    assert args.horizon == 3
    assert args.output_dir == "x"
    assert args.sweep_horizons == list(range(3, 11))


def test_simulate_writes_trajectory(tmp_path):
    """simulate writes one trajectory row per iteration."""
    out = tmp_path / "sim"
    assert main(["simulate", "--iterations", "10", "--out", str(out)]) == 0
    assert len(_lines(out / "trajectory.csv")) == 11
    assert len(_lines(out / "measurements.csv")) == 11


def test_run_evaluate_and_export(tmp_path, capsys):
    """run writes a record that evaluate and export-plots can read."""
    out = tmp_path / "run"
    assert main(["run", "--iterations", "10", "--np", "3", "--out", str(out)]) == 0
    metrics = json.loads((out / "metrics.json").read_text())
    assert len(metrics["step_success_rates"]) == 3

    capsys.readouterr()
    assert main(["evaluate", str(out), "--format", "json"]) == 0
    evaluation = json.loads(capsys.readouterr().out)
    assert evaluation["metrics"] == metrics
    assert (out / "evaluation.json").is_file()

    assert main(["evaluate", str(out)]) == 0
    assert "Successful rate" in capsys.readouterr().out

    assert main(["export-plots", str(out), "--steps", "2,3"]) == 0
    assert (out / "plots" / "occupancy_polygons.csv").is_file()


def test_run_with_baseline_and_sweep(tmp_path):
    """--baseline and --sweep-horizons add their results to the record."""
    out = tmp_path / "run"
    assert main([
        "run", "--iterations", "8", "--np", "3", "--baseline", "--sweep-horizons", "3,4", "--out", str(out),
    ]) == 0
    metrics = json.loads((out / "metrics.json").read_text())
    assert len(metrics["baseline"]["step_success_rates"]) == 3
    assert sorted(json.loads((out / "timing_sweep.json").read_text())) == ["3", "4"]


def test_run_multiple_seeds(tmp_path):
    """--seeds writes one record per seed under the output directory."""
    out = tmp_path / "seeds"
    assert main(["run", "--iterations", "5", "--np", "2", "--seeds", "1,2", "--out", str(out)]) == 0
    assert (out / "seed_1" / "metrics.json").is_file()
    assert (out / "seed_2" / "metrics.json").is_file()
    config = json.loads((out / "seed_2" / "config.json").read_text())
    assert config["scenario"]["seed"] == 2


def test_evaluate_missing_record_exits_4(tmp_path, capsys):
    """A missing record directory is exit code 4."""
    assert main(["evaluate", str(tmp_path / "absent")]) == 4
    assert "error" in capsys.readouterr().err


def test_invalid_config_exits_2(tmp_path, capsys):
    """Config errors are exit code 2 and name the line."""
    config = tmp_path / "bad.toml"
    config.write_text("[scenario]\nseed = 1\n[wheels]\ncount = 4\n")
    assert main(["simulate", "--config", str(config), "--out", str(tmp_path / "o")]) == 2
    assert "line 3" in capsys.readouterr().err


def test_impossible_geometry_exits_2(tmp_path):
    """A corner radius that does not fit the block is exit code 2."""
    config = tmp_path / "corner.toml"
    config.write_text("[scenario]\ncorner_radius = 30.0\n")
    assert main(["simulate", "--config", str(config), "--out", str(tmp_path / "o")]) == 2


def test_unwritable_output_exits_3(tmp_path):
    """An output path below a regular file is exit code 3."""
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["simulate", "--iterations", "3", "--out", str(blocker / "sub")]) == 3
