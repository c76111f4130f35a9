"""Scalar intervals and interval matrices."""
import math
from dataclasses import dataclass

import numpy as np

from src.errors import DimensionError, InvalidSetError

HALF_PI = 0.5 * math.pi
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Interval:
    """Closed real range [lo, hi]."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise InvalidSetError(f"interval bounds must be finite, got [{self.lo}, {self.hi}]")
        if self.lo > self.hi:
            raise InvalidSetError(f"interval requires lo <= hi, got [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, value: float) -> "Interval":
        return cls(float(value), float(value))

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def rad(self) -> float:
        return 0.5 * (self.hi - self.lo)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, value: float, tol: float = 0.0) -> bool:
        return self.lo - tol <= value <= self.hi + tol

    def __add__(self, other: "Interval | float") -> "Interval":
        if isinstance(other, Interval):
            return Interval(self.lo + other.lo, self.hi + other.hi)
        return Interval(self.lo + other, self.hi + other)

    __radd__ = __add__

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __mul__(self, other: "Interval | float") -> "Interval":
        if isinstance(other, Interval):
            products = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
            return Interval(min(products), max(products))
        a, b = self.lo * other, self.hi * other
        return Interval(min(a, b), max(a, b))

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"Interval([{self.lo}, {self.hi}])"


def _has_critical_point(lo: float, hi: float, phase: float) -> bool:
    """True if phase + 2*k*pi lies in [lo, hi] for some integer k."""
    k = math.ceil((lo - phase) / TWO_PI)
    return phase + k * TWO_PI <= hi


def interval_sin_cos(interval: Interval) -> tuple[Interval, Interval]:
    """Exact ranges of sin and cos over an interval of radians.

    Endpoint values are widened to +-1 whenever an extremum of the
    function lies inside the interval.
    """
    lo, hi = interval.lo, interval.hi
    if hi - lo >= TWO_PI:
        full = Interval(-1.0, 1.0)
        return full, full

    sin_lo, sin_hi = sorted((math.sin(lo), math.sin(hi)))
    if _has_critical_point(lo, hi, HALF_PI):
        sin_hi = 1.0
    if _has_critical_point(lo, hi, -HALF_PI):
        sin_lo = -1.0

    cos_lo, cos_hi = sorted((math.cos(lo), math.cos(hi)))
    if _has_critical_point(lo, hi, 0.0):
        cos_hi = 1.0
    if _has_critical_point(lo, hi, math.pi):
        cos_lo = -1.0

    return Interval(sin_lo, sin_hi), Interval(cos_lo, cos_hi)


class IntervalMatrix:
    """Matrix of intervals stored as elementwise lower/upper bound arrays."""

    def __init__(self, lo, hi) -> None:
        lo = np.atleast_2d(np.asarray(lo, dtype=float))
        hi = np.atleast_2d(np.asarray(hi, dtype=float))
        if lo.shape != hi.shape or lo.ndim != 2:
            raise DimensionError(f"bound arrays must share a 2-d shape, got {lo.shape} and {hi.shape}")
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
            raise InvalidSetError("interval matrix entries must be finite")
        if np.any(lo > hi):
            raise InvalidSetError("interval matrix requires lo <= hi entrywise")
        lo.flags.writeable = False
        hi.flags.writeable = False
        self.lo: np.ndarray = lo
        self.hi: np.ndarray = hi

    @classmethod
    def point(cls, matrix) -> "IntervalMatrix":
        """Degenerate (zero-radius) interval matrix."""
        matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
        return cls(matrix, matrix.copy())

    @classmethod
    def from_intervals(cls, grid: list[list[Interval]]) -> "IntervalMatrix":
        lo = [[entry.lo for entry in row] for row in grid]
        hi = [[entry.hi for entry in row] for row in grid]
        return cls(lo, hi)

    @property
    def shape(self) -> tuple[int, int]:
        return self.lo.shape

    @property
    def mid(self) -> np.ndarray:
        return 0.5 * (self.lo + self.hi)

    @property
    def rad(self) -> np.ndarray:
        return 0.5 * (self.hi - self.lo)

    def __getitem__(self, index: tuple[int, int]) -> Interval:
        return Interval(float(self.lo[index]), float(self.hi[index]))

    def contains(self, matrix, tol: float = 0.0) -> bool:
        """True if a real matrix lies entrywise inside the bounds."""
        matrix = np.asarray(matrix, dtype=float)
        if matrix.shape != self.shape:
            raise DimensionError(f"expected shape {self.shape}, got {matrix.shape}")
        return bool(np.all(matrix >= self.lo - tol) and np.all(matrix <= self.hi + tol))

    def __repr__(self) -> str:
        return f"IntervalMatrix(shape={self.shape})"


def hstack(*matrices: IntervalMatrix) -> IntervalMatrix:
    """Concatenate interval matrices column-wise."""
    return IntervalMatrix(
        np.hstack([m.lo for m in matrices]),
        np.hstack([m.hi for m in matrices]),
    )


def interval_matrix_map(a: IntervalMatrix, g) -> IntervalMatrix:
    """Interval product of an interval matrix with a real matrix.

    Entry (i, j) encloses sum_k A_ik * G_kj for every A in the family.
    """
    g = np.atleast_2d(np.asarray(g, dtype=float))
    rows, inner = a.shape
    if g.shape[0] != inner:
        raise DimensionError(f"cannot map {a.shape} interval matrix onto {g.shape} matrix")
    if g.shape[1] == 0:
        empty = np.zeros((rows, 0))
        return IntervalMatrix(empty, empty.copy())
    low_terms = a.lo[:, :, None] * g[None, :, :]
    high_terms = a.hi[:, :, None] * g[None, :, :]
    lo = np.minimum(low_terms, high_terms).sum(axis=1)
    hi = np.maximum(low_terms, high_terms).sum(axis=1)
    return IntervalMatrix(lo, hi)
