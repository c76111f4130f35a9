"""Zonotopes: center vector plus a matrix of generator columns."""
import itertools
import logging

import numpy as np
from scipy.optimize import linprog

from src.config import Config
from src.errors import DimensionError, InvalidSetError
from src.sets.interval import Interval, IntervalMatrix

logger = logging.getLogger(__name__)


class Zonotope:
    """Centrally symmetric set {c + G xi : xi in [-1, 1]^m}.

    Instances are immutable; every operation returns a new zonotope.
    """

    __array_priority__ = 1000  # so ``ndarray @ zonotope`` defers to __rmatmul__

    def __init__(self, center, generators=None) -> None:
        center = np.asarray(center, dtype=float).reshape(-1)
        if generators is None:
            generators = np.zeros((center.shape[0], 0))
        generators = np.asarray(generators, dtype=float)
        if generators.ndim == 1:
            generators = generators.reshape(-1, 1)
        if generators.ndim != 2 or generators.shape[0] != center.shape[0]:
            raise DimensionError(
                f"generator matrix must have {center.shape[0]} rows, got shape {generators.shape}"
            )
        if not (np.all(np.isfinite(center)) and np.all(np.isfinite(generators))):
            raise InvalidSetError("zonotope entries must be finite")
        center.flags.writeable = False
        generators.flags.writeable = False
        self.center: np.ndarray = center
        self.generators: np.ndarray = generators

    @classmethod
    def point(cls, center) -> "Zonotope":
        return cls(center)

    @classmethod
    def box(cls, center, radii) -> "Zonotope":
        """Axis-aligned box with the given half-widths."""
        return dilate(cls(center), radii)

    @property
    def dim(self) -> int:
        return self.center.shape[0]

    @property
    def order(self) -> int:
        """Number of generator columns."""
        return self.generators.shape[1]

    def __add__(self, other: "Zonotope") -> "Zonotope":
        return minkowski_sum(self, other)

    def __rmatmul__(self, matrix) -> "Zonotope":
        return linear_map(matrix, self)

    def __repr__(self) -> str:
        return f"Zonotope(dim={self.dim}, order={self.order}, center={self.center.tolist()})"


def interval_hull(z: Zonotope) -> list[Interval]:
    """Tightest axis-aligned box around the zonotope, one interval per coordinate."""
    radius = np.abs(z.generators).sum(axis=1)
    return [Interval(float(c - r), float(c + r)) for c, r in zip(z.center, radius)]


def hull_bounds(z: Zonotope) -> tuple[np.ndarray, np.ndarray]:
    """Interval hull as (lower, upper) arrays."""
    radius = np.abs(z.generators).sum(axis=1)
    return z.center - radius, z.center + radius


def linear_map(matrix, z: Zonotope) -> Zonotope:
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    if matrix.shape[1] != z.dim:
        raise DimensionError(f"cannot apply {matrix.shape} map to {z.dim}-dim zonotope")
    return Zonotope(matrix @ z.center, matrix @ z.generators)


def minkowski_sum(first: Zonotope, second: Zonotope) -> Zonotope:
    if first.dim != second.dim:
        raise DimensionError(f"cannot add {first.dim}-dim and {second.dim}-dim zonotopes")
    return Zonotope(first.center + second.center, np.hstack([first.generators, second.generators]))


def zonotope_inclusion(center, family: IntervalMatrix) -> Zonotope:
    """Single zonotope enclosing {c + M xi : M in family}.

    Generators are the midpoint matrix plus a diagonal of row-summed radii;
    zero-radius rows contribute no column.
    """
    center = np.asarray(center, dtype=float).reshape(-1)
    if family.shape[0] != center.shape[0]:
        raise DimensionError(f"center has dimension {center.shape[0]}, family has {family.shape[0]} rows")
    row_radius = family.rad.sum(axis=1)
    diagonal = np.diag(row_radius)[:, row_radius > 0]
    return Zonotope(center, np.hstack([family.mid, diagonal]))


def project(z: Zonotope, dims) -> Zonotope:
    dims = list(dims)
    for d in dims:
        if not 0 <= d < z.dim:
            raise DimensionError(f"projection index {d} out of range for {z.dim}-dim zonotope")
    return Zonotope(z.center[dims], z.generators[dims, :])


def remove_null_generators(z: Zonotope, tol: float = Config.NULL_GENERATOR_TOL) -> Zonotope:
    keep = np.linalg.norm(z.generators, axis=0) > tol
    return Zonotope(z.center, z.generators[:, keep])


def _canonical_direction(column: np.ndarray) -> np.ndarray:
    """Unit direction with the sign fixed by its largest-magnitude entry."""
    unit = column / np.linalg.norm(column)
    pivot = int(np.argmax(np.abs(unit)))
    return -unit if unit[pivot] < 0 else unit


def merge_parallel_generators(z: Zonotope, angle_tol: float = Config.PARALLEL_ANGLE_TOL) -> Zonotope:
    """Combine generators sharing a direction (up to sign) into one column.

    The merged column has the norm of the summed norms, so exactly parallel
    merges leave the set unchanged.
    """
    z = remove_null_generators(z)
    directions: list[np.ndarray] = []
    norms: list[float] = []
    for column in z.generators.T:
        direction = _canonical_direction(column)
        norm = float(np.linalg.norm(column))
        for i, existing in enumerate(directions):
            # sin of the angle between unit vectors, sign-insensitive
            cosine = min(1.0, abs(float(existing @ direction)))
            if np.sqrt(max(0.0, 1.0 - cosine * cosine)) <= angle_tol:
                norms[i] += norm
                break
        else:
            directions.append(direction)
            norms.append(norm)
    if not directions:
        return z
    merged = np.column_stack([d * n for d, n in zip(directions, norms)])
    return Zonotope(z.center, merged)


def reduce_generators(z: Zonotope, budget: int) -> Zonotope:
    """Box the least influential generators so at most ``budget`` remain.

    Influence is the Euclidean norm; the ``budget - n`` largest generators
    are kept and the rest are replaced by the axis-aligned generators of
    their interval hull, which over-approximates their contribution.
    """
    if budget < z.dim:
        raise InvalidSetError(f"generator budget {budget} is below the dimension {z.dim}")
    if z.order <= budget:
        return z
    norms = np.linalg.norm(z.generators, axis=0)
    # stable descending sort: ties keep index order
    ranked = np.argsort(-norms, kind="stable")
    keep_count = budget - z.dim
    kept = np.sort(ranked[:keep_count])
    boxed = ranked[keep_count:]
    box_radius = np.abs(z.generators[:, boxed]).sum(axis=1)
    box = np.diag(box_radius)[:, box_radius > 0]
    logger.debug("reduced %d generators to %d (+%d box)", z.order, keep_count, box.shape[1])
    return Zonotope(z.center, np.hstack([z.generators[:, kept], box]))


def dilate(z: Zonotope, radii) -> Zonotope:
    """Minkowski sum with an axis-aligned box of half-widths ``radii``."""
    radii = np.asarray(radii, dtype=float).reshape(-1)
    if radii.shape[0] != z.dim:
        raise DimensionError(f"dilation has {radii.shape[0]} radii for a {z.dim}-dim zonotope")
    if np.any(radii < 0):
        raise InvalidSetError(f"dilation radii must be non-negative, got {radii.tolist()}")
    box = np.diag(radii)[:, radii > 0]
    return Zonotope(z.center, np.hstack([z.generators, box]))


def halfspace_representation(z: Zonotope) -> tuple[np.ndarray, np.ndarray]:
    """Facet normals N and offsets d with z = {x : |N (x - c)| <= d}.

    Normals are generalized cross products of (n-1)-subsets of generator
    directions. Requires a full-dimensional zonotope.
    """
    n = z.dim
    if n == 1:
        return np.ones((1, 1)), np.array([np.abs(z.generators).sum()])
    reduced = merge_parallel_generators(z)
    generators = reduced.generators
    if generators.shape[1] < n or np.linalg.matrix_rank(generators) < n:
        raise InvalidSetError("halfspace representation requires a full-dimensional zonotope")
    units = generators / np.linalg.norm(generators, axis=0)
    normals = []
    for subset in itertools.combinations(range(units.shape[1]), n - 1):
        block = units[:, subset]
        normal = np.array([
            (-1) ** i * np.linalg.det(np.delete(block, i, axis=0)) for i in range(n)
        ])
        length = np.linalg.norm(normal)
        if length > Config.NULL_GENERATOR_TOL:
            normals.append(normal / length)
    normals = np.array(normals)
    offsets = np.abs(normals @ generators).sum(axis=1)
    return normals, offsets


def _tolerance_box(z: Zonotope, tol: float) -> Zonotope:
    return dilate(z, np.full(z.dim, tol)) if tol > 0 else z


def contains_points(z: Zonotope, points, tol: float = Config.CONTAINMENT_TOL) -> np.ndarray:
    """Vectorized membership of many points in z, with infinity-norm slack ``tol``.

    Uses the halfspace representation of z dilated by ``tol``; falls back to
    one feasibility program per point when that set is not full-dimensional.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.shape[1] != z.dim:
        raise DimensionError(f"points have dimension {points.shape[1]}, zonotope has {z.dim}")
    if tol < 0:
        raise InvalidSetError(f"containment tolerance must be non-negative, got {tol}")
    slack = _tolerance_box(z, tol)
    try:
        normals, offsets = halfspace_representation(slack)
    except InvalidSetError:
        return np.array([_contains_point_lp(z, p, tol) for p in points], dtype=bool)
    projections = np.abs((points - z.center) @ normals.T)
    margin = 1e-12 * (1.0 + offsets)
    return np.all(projections <= offsets + margin, axis=1)


def _contains_point_lp(z: Zonotope, point: np.ndarray, tol: float) -> bool:
    """Feasibility of c + G xi within tol of point, xi in [-1, 1]^m."""
    if z.order == 0:
        return bool(np.max(np.abs(z.center - point)) <= tol)
    offset = point - z.center
    a_ub = np.vstack([z.generators, -z.generators])
    b_ub = np.concatenate([offset + tol, -offset + tol])
    result = linprog(
        np.zeros(z.order), A_ub=a_ub, b_ub=b_ub,
        bounds=[(-1.0, 1.0)] * z.order, method="highs",
    )
    return result.status == 0


def contains_point(z: Zonotope, point, tol: float = Config.CONTAINMENT_TOL) -> bool:
    """True iff some xi in [-1, 1]^m puts c + G xi within ``tol`` of ``point``.

    Two-dimensional zonotopes are decided exactly by their polygon
    halfspaces; higher dimensions solve a small feasibility program.
    """
    point = np.asarray(point, dtype=float).reshape(-1)
    if point.shape[0] != z.dim:
        raise DimensionError(f"point has dimension {point.shape[0]}, zonotope has {z.dim}")
    if tol < 0:
        raise InvalidSetError(f"containment tolerance must be non-negative, got {tol}")
    if z.dim <= 2:
        return bool(contains_points(z, point[None, :], tol)[0])
    return _contains_point_lp(z, point, tol)


def sample_points(z: Zonotope, count: int, rng: np.random.Generator) -> np.ndarray:
    """Points c + G xi with xi uniform on [-1, 1]^m (covers z, not uniform over it)."""
    xi = rng.uniform(-1.0, 1.0, size=(count, z.order))
    return z.center + xi @ z.generators.T
