"""Occupancy sets: planar projections of the reachable tube."""
from dataclasses import dataclass

import numpy as np

from src.errors import DimensionError
from src.prediction.reachability import ReachableTube
from src.sets.zonotope import (
    Zonotope,
    dilate,
    merge_parallel_generators,
    project,
    reduce_generators,
    remove_null_generators,
)

POSITION_DIMS = (0, 1)


def polygonize(z: Zonotope) -> np.ndarray:
    """Boundary vertices of a planar zonotope in counterclockwise order.

    Generators are flipped into the upper half-plane and sorted by angle;
    walking them twice from the lowest point traces the boundary.
    """
    if z.dim != 2:
        raise DimensionError(f"polygonize needs a 2-dim zonotope, got {z.dim}")
    z = merge_parallel_generators(z)
    if z.order == 0:
        return z.center.reshape(1, 2).copy()
    generators = z.generators.copy()
    flip = (generators[1] < 0) | ((generators[1] == 0) & (generators[0] < 0))
    generators[:, flip] *= -1.0
    if z.order == 1:
        g = generators[:, 0]
        return np.array([z.center - g, z.center + g])
    order = np.argsort(np.arctan2(generators[1], generators[0]), kind="stable")
    generators = generators[:, order]
    start = z.center - generators.sum(axis=1)
    steps = np.hstack([2.0 * generators, -2.0 * generators]).T
    vertices = start + np.cumsum(steps, axis=0)
    # the walk ends back at ``start``; rotate so it comes first
    return np.roll(vertices, 1, axis=0)


def polygon_area(vertices) -> float:
    """Shoelace area of an ordered vertex list (0 for points and segments)."""
    vertices = np.asarray(vertices, dtype=float)
    if vertices.shape[0] < 3:
        return 0.0
    x, y = vertices[:, 0], vertices[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


@dataclass(frozen=True, eq=False)
class OccupancySet:
    """Planar set the vehicle is expected to occupy at prediction step ``step``."""

    zonotope: Zonotope
    step: int
    polygon: np.ndarray

    @classmethod
    def from_zonotope(cls, zonotope: Zonotope, step: int) -> "OccupancySet":
        return cls(zonotope, step, polygonize(zonotope))

    @property
    def area(self) -> float:
        return polygon_area(self.polygon)


def dilation_at(step: int, dilation, growth: float = 0.0) -> np.ndarray:
    """Dilation radii at prediction step ``step`` (1-based) under a linear schedule."""
    return np.asarray(dilation, dtype=float) + growth * (step - 1)


def simplify_occupancy(state_set: Zonotope, radii, budget: int) -> Zonotope:
    """Project onto position, drop null and merge parallel generators, reduce, dilate."""
    planar = project(state_set, POSITION_DIMS)
    planar = merge_parallel_generators(remove_null_generators(planar))
    planar = reduce_generators(planar, budget)
    return remove_null_generators(dilate(planar, radii))


def extract_occupancy(
    tube: ReachableTube, dilation, budget: int, growth: float = 0.0
) -> list[OccupancySet]:
    """One occupancy set per prediction step 1..N_p."""
    occupancy = []
    for step in range(1, tube.horizon + 1):
        zonotope = simplify_occupancy(tube.steps[step], dilation_at(step, dilation, growth), budget)
        occupancy.append(OccupancySet.from_zonotope(zonotope, step))
    return occupancy
