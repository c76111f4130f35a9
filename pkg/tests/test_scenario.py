"""Tests for grid scenario generation."""
import math

import numpy as np
import pytest

from src.config import ScenarioConfig
from src.errors import ConfigError, GeometryError
from src.sim.scenario import LEFT, RIGHT, STRAIGHT, Segment, generate_scenario, plan_segments


def test_plan_segments_for_default_turns():
    """Six turns give six quarter arcs between straights and a final runout."""
    config = ScenarioConfig()
    segments = plan_segments(config)
    arcs = [s for s in segments if s.kind != STRAIGHT]
    assert [s.kind for s in arcs] == list(config.turns)
    assert all(s.length == pytest.approx(0.5 * math.pi * config.corner_radius) for s in arcs)
    assert segments[0] == Segment(STRAIGHT, 0.5 * config.block_size - config.corner_radius)
    assert segments[-1].kind == STRAIGHT
    assert segments[-1].length == pytest.approx(config.runout)


def test_plan_segments_straight_through_intersections():
    """Going straight merges the blocks into one segment."""
    config = ScenarioConfig(turns=(STRAIGHT, STRAIGHT))
    segments = plan_segments(config)
    assert len(segments) == 1
    assert segments[0].length == pytest.approx(0.5 * config.block_size + config.block_size + config.runout)


def test_corner_radius_larger_than_half_block_is_rejected():
    """2 r > block size cannot be built."""
    with pytest.raises(GeometryError):
        generate_scenario(ScenarioConfig(block_size=40.0, corner_radius=25.0))


def test_unknown_turn_is_a_config_error():
    """Only left, right and straight are valid turns."""
    with pytest.raises(ConfigError):
        ScenarioConfig(turns=("left", "u-turn"))


def test_path_labels_cover_every_maneuver(default_path):
    """Dense samples carry straight, left and right labels."""
    assert set(default_path.labels) == {STRAIGHT, LEFT, RIGHT}
    assert len(default_path.labels) == len(default_path)
    assert default_path.segments[0] == 0


def test_left_turns_have_positive_curvature(default_path):
    """Left arcs curve at +1/r, right arcs at -1/r, straights at 0."""
    labels = np.array(default_path.labels)
    radius = ScenarioConfig().corner_radius
    assert np.allclose(default_path.curvature[labels == LEFT], 1.0 / radius)
    assert np.allclose(default_path.curvature[labels == RIGHT], -1.0 / radius)
    assert np.allclose(default_path.curvature[labels == STRAIGHT], 0.0)


def test_path_is_continuous_and_dense(default_path):
    """Consecutive samples are at most one resolution step apart."""
    gaps = np.hypot(np.diff(default_path.x), np.diff(default_path.y))
    assert gaps.max() <= ScenarioConfig().resolution + 1e-9
    assert np.all(np.diff(default_path.s) >= 0)
    assert default_path.length == pytest.approx(default_path.s[-1])


def test_balanced_turns_end_with_initial_heading(default_path):
    """Three lefts and three rights return to heading 0."""
    assert default_path.heading[-1] == pytest.approx(0.0, abs=1e-9)
    assert default_path.x[0] == 0.0 and default_path.y[0] == 0.0


def test_waypoints_are_segment_endpoints(default_path):
    """One waypoint per segment plus the start."""
    assert default_path.waypoints.shape == (len(plan_segments(ScenarioConfig())) + 1, 2)
    assert np.allclose(default_path.waypoints[-1], [default_path.x[-1], default_path.y[-1]])


def test_speed_profile_respects_corner_speed_and_deceleration(default_path):
    """Arcs run at corner speed and the profile never brakes harder than planned."""
    config = ScenarioConfig()
    labels = np.array(default_path.labels)
    speed = default_path.speed
    assert np.allclose(speed[labels != STRAIGHT], config.corner_speed)
    assert speed.max() <= config.cruise_speed
    ds = np.diff(default_path.s)
    assert np.all(speed[:-1] ** 2 <= speed[1:] ** 2 + 2.0 * config.planned_decel * ds + 1e-9)
