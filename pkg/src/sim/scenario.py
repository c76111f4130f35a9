"""Grid scenario generation: straights joined by arc-blended 90 degree turns."""
import math
from dataclasses import dataclass

import numpy as np

from src.config import ScenarioConfig
from src.errors import GeometryError

STRAIGHT = "straight"
LEFT = "left"
RIGHT = "right"


@dataclass(frozen=True, eq=False)
class Path:
    """Dense reference path with key waypoints and a target speed profile.

    ``waypoints`` holds segment endpoints; the remaining arrays are the
    dense samples (arc length ``s``, pose, curvature, target speed) with a
    maneuver label and segment index per sample.
    """

    waypoints: np.ndarray
    x: np.ndarray
    y: np.ndarray
    heading: np.ndarray
    curvature: np.ndarray
    s: np.ndarray
    speed: np.ndarray
    labels: tuple[str, ...]
    segments: np.ndarray

    def __len__(self) -> int:
        return self.x.shape[0]

    @property
    def length(self) -> float:
        return float(self.s[-1])

    def points(self) -> np.ndarray:
        return np.column_stack([self.x, self.y])


@dataclass(frozen=True)
class Segment:
    kind: str
    length: float
    radius: float = 0.0


def plan_segments(config: ScenarioConfig) -> list[Segment]:
    """Turn sequence to straight/arc segments.

    Intersections are ``block_size`` apart and the vehicle starts half a
    block before the first one. Turns start ``corner_radius`` before an
    intersection and end ``corner_radius`` after it.
    """
    block, radius = config.block_size, config.corner_radius
    if 2.0 * radius > block:
        raise GeometryError(f"corner radius {radius} m does not fit a {block} m block")
    segments: list[Segment] = []
    straight = 0.0
    to_next = 0.5 * block
    for turn in config.turns:
        if turn == STRAIGHT:
            straight += to_next
            to_next = block
            continue
        if to_next < radius:
            raise GeometryError(f"corner radius {radius} m does not fit before the next intersection")
        straight += to_next - radius
        if straight > 0:
            segments.append(Segment(STRAIGHT, straight))
        segments.append(Segment(turn, 0.5 * math.pi * radius, radius))
        straight = 0.0
        to_next = block - radius
    segments.append(Segment(STRAIGHT, straight + config.runout))
    return segments


def _speed_profile(kinds: list[str], s: np.ndarray, config: ScenarioConfig) -> np.ndarray:
    """Cruise on straights, corner speed on arcs, ramped down before corners."""
    speed = np.where(np.array(kinds) == STRAIGHT, config.cruise_speed, config.corner_speed)
    speed = np.minimum(speed, config.cruise_speed)
    for i in range(len(speed) - 2, -1, -1):
        ds = s[i + 1] - s[i]
        speed[i] = min(speed[i], math.sqrt(speed[i + 1] ** 2 + 2.0 * config.planned_decel * ds))
    return speed


def generate_scenario(config: ScenarioConfig) -> Path:
    """Build the dense reference path for a grid turn sequence.

    Raises:
        GeometryError: If the corner radius does not fit the block size
    """
    segments = plan_segments(config)
    x, y, heading = 0.0, 0.0, 0.0
    waypoints = [(x, y)]
    xs, ys, hs, ks, kinds, seg_ids = [], [], [], [], [], []

    for index, segment in enumerate(segments):
        count = max(1, int(math.ceil(segment.length / config.resolution)))
        fractions = np.arange(count) / count
        if segment.kind == STRAIGHT:
            dist = fractions * segment.length
            xs.append(x + dist * math.cos(heading))
            ys.append(y + dist * math.sin(heading))
            hs.append(np.full(count, heading))
            ks.append(np.zeros(count))
            x += segment.length * math.cos(heading)
            y += segment.length * math.sin(heading)
        else:
            sign = 1.0 if segment.kind == LEFT else -1.0
            r = segment.radius
            cx = x - sign * r * math.sin(heading)
            cy = y + sign * r * math.cos(heading)
            angles = heading + sign * fractions * 0.5 * math.pi
            xs.append(cx + sign * r * np.sin(angles))
            ys.append(cy - sign * r * np.cos(angles))
            hs.append(angles)
            ks.append(np.full(count, sign / r))
            heading += sign * 0.5 * math.pi
            x = cx + sign * r * math.sin(heading)
            y = cy - sign * r * math.cos(heading)
        kinds.extend([segment.kind] * count)
        seg_ids.extend([index] * count)
        waypoints.append((x, y))

    # closing sample at the path end
    xs.append(np.array([x]))
    ys.append(np.array([y]))
    hs.append(np.array([heading]))
    ks.append(np.array([0.0]))
    kinds.append(segments[-1].kind)
    seg_ids.append(len(segments) - 1)

    px, py = np.concatenate(xs), np.concatenate(ys)
    s = np.concatenate([[0.0], np.cumsum(np.hypot(np.diff(px), np.diff(py)))])
    return Path(
        waypoints=np.array(waypoints),
        x=px,
        y=py,
        heading=np.concatenate(hs),
        curvature=np.concatenate(ks),
        s=s,
        speed=_speed_profile(kinds, s, config),
        labels=tuple(kinds),
        segments=np.array(seg_ids),
    )
