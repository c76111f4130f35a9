"""Sliding-window Control-Input set fitted by linear programming.

The window of recent control estimates is enclosed by the zonotope with
fixed unit generator directions whose scaling factors have minimal sum;
two axis-aligned generators, sized from the filter's control
uncertainty, are then appended as a safety margin.
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from src.config import ControlSetConfig
from src.errors import InfeasibleProgramError, InvalidSetError
from src.estimation.ekf import EkfBelief
from src.model.kinematics import STATE_DIM, ControlSample
from src.sets.zonotope import Zonotope

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ControlWindow:
    """The last ``size`` control samples, oldest first."""

    size: int
    samples: tuple[ControlSample, ...] = ()

    def __post_init__(self) -> None:
        if self.size < 1:
            raise InvalidSetError(f"window size must be at least 1, got {self.size}")
        if len(self.samples) > self.size:
            raise InvalidSetError(f"window holds {len(self.samples)} samples but size is {self.size}")

    def __len__(self) -> int:
        return len(self.samples)

    def as_array(self) -> np.ndarray:
        return np.array([s.as_array() for s in self.samples]).reshape(-1, 2)


def push_observation(window: ControlWindow, sample: ControlSample) -> ControlWindow:
    """Append a sample, evicting the oldest once the window is full."""
    samples = (window.samples + (sample,))[-window.size:]
    return ControlWindow(window.size, samples)


@dataclass(frozen=True, eq=False)
class GeneratorBasis:
    """Unit generator directions as columns of a 2 x n_g array."""

    directions: np.ndarray

    @property
    def count(self) -> int:
        return self.directions.shape[1]


def primitive_basis(count: int) -> GeneratorBasis:
    """Angularly equispaced unit directions at i*pi/n_g.

    The +-1 generator coefficients cover the opposite half-circle.
    """
    if count < 2:
        raise InvalidSetError(f"at least 2 generators are needed to span the plane, got {count}")
    angles = np.arange(count) * math.pi / count
    directions = np.vstack([np.cos(angles), np.sin(angles)])
    # exact zeros keep axis-aligned directions clean
    directions[np.abs(directions) < 1e-15] = 0.0
    directions.flags.writeable = False
    return GeneratorBasis(directions)


@dataclass(frozen=True, eq=False)
class LpFit:
    """Optimal center and scaling factors (alphas live in scaled coordinates)."""

    center: ControlSample
    alphas: np.ndarray
    objective: float

    def __iter__(self):
        return iter((self.center, self.alphas))


def fit_zonotope(samples, basis: GeneratorBasis, scaling=(1.0, 1.0)) -> LpFit:
    """Minimal-sum-of-alphas zonotope enclosing every sample.

    Variables are the center c (2), the scaling factors alpha (n_g) and the
    per-sample coefficients delta (n_g * N) with
    u_j = c + sum_i delta_ij g_i and -alpha_i <= delta_ij <= alpha_i.
    Samples are divided by ``scaling`` before solving.

    Raises:
        InfeasibleProgramError: If the solver does not report an optimum
    """
    points = np.array([s.as_array() if isinstance(s, ControlSample) else s for s in samples], dtype=float)
    points = points.reshape(-1, 2)
    if points.shape[0] == 0:
        raise InvalidSetError("cannot fit a Control-Input set to an empty window")
    scale = np.asarray(scaling, dtype=float)
    scaled = points / scale
    n_samples, n_gen = scaled.shape[0], basis.count
    n_delta = n_gen * n_samples
    n_vars = 2 + n_gen + n_delta

    def delta_index(i: int, j: int) -> int:
        return 2 + n_gen + j * n_gen + i

    a_eq = np.zeros((2 * n_samples, n_vars))
    b_eq = scaled.reshape(-1)
    for j in range(n_samples):
        for axis in range(2):
            row = 2 * j + axis
            a_eq[row, axis] = 1.0
            for i in range(n_gen):
                a_eq[row, delta_index(i, j)] = basis.directions[axis, i]

    a_ub = np.zeros((2 * n_delta, n_vars))
    for j in range(n_samples):
        for i in range(n_gen):
            row = 2 * (j * n_gen + i)
            a_ub[row, delta_index(i, j)] = 1.0
            a_ub[row, 2 + i] = -1.0
            a_ub[row + 1, delta_index(i, j)] = -1.0
            a_ub[row + 1, 2 + i] = -1.0
    b_ub = np.zeros(2 * n_delta)

    cost = np.zeros(n_vars)
    cost[2:2 + n_gen] = 1.0
    bounds = [(None, None)] * 2 + [(0.0, None)] * n_gen + [(None, None)] * n_delta

    result = linprog(cost, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq, bounds=bounds, method="highs")
    if result.status != 0:
        raise InfeasibleProgramError(f"Control-Input LP failed (status {result.status}): {result.message}")

    center = ControlSample.from_array(result.x[:2] * scale)
    alphas = np.maximum(result.x[2:2 + n_gen], 0.0)
    logger.debug("control-set LP over %d samples: objective %.6g", n_samples, result.fun)
    return LpFit(center, alphas, float(result.fun))


@dataclass(frozen=True, eq=False)
class ControlInputSet:
    """Zonotope over (a, kappa) with its provenance."""

    zonotope: Zonotope
    alphas: tuple[float, ...]
    center: ControlSample
    window: tuple[ControlSample, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.zonotope.dim != 2:
            raise InvalidSetError(f"Control-Input set must be 2-dim, got {self.zonotope.dim}")


def expand_control_set(
    center: ControlSample,
    alphas,
    basis: GeneratorBasis,
    g_u1=(0.0, 0.0),
    g_u2=(0.0, 0.0),
    scaling=(1.0, 1.0),
    window=(),
) -> ControlInputSet:
    """Assemble H_u = [alpha_i g_i | g_u1 | g_u2] in physical units.

    Columns with zero alpha are dropped; zero expansion columns are kept out too.
    """
    alphas = np.asarray(alphas, dtype=float).reshape(-1)
    if alphas.shape[0] != basis.count:
        raise InvalidSetError(f"expected {basis.count} alphas, got {alphas.shape[0]}")
    if np.any(alphas < 0):
        raise InvalidSetError("alphas must be non-negative")
    scale = np.asarray(scaling, dtype=float)[:, None]
    active = alphas > 0
    scaled_columns = scale * basis.directions[:, active] * alphas[active]
    expansion = np.column_stack([np.asarray(g_u1, dtype=float), np.asarray(g_u2, dtype=float)])
    expansion = expansion[:, np.linalg.norm(expansion, axis=0) > 0]
    zonotope = Zonotope(center.as_array(), np.hstack([scaled_columns, expansion]))
    return ControlInputSet(zonotope, tuple(float(a) for a in alphas), center, tuple(window))


def expansion_margins(config: ControlSetConfig, belief: EkfBelief | None = None) -> tuple[float, float]:
    """Half-widths (eps_a, eps_kappa) of the expansion generators.

    The fixed margins are a floor; with a belief they widen to
    ``expansion_sigma`` standard deviations of the filter's (a, kappa).
    """
    margins = np.asarray(config.expansion, dtype=float)
    if belief is not None and config.expansion_sigma > 0:
        margins = np.maximum(margins, config.expansion_sigma * belief.std[STATE_DIM:])
    return float(margins[0]), float(margins[1])


def estimate_control_set(
    window: ControlWindow,
    basis: GeneratorBasis,
    config: ControlSetConfig,
    belief: EkfBelief | None = None,
) -> ControlInputSet:
    """Fit and expand the Control-Input set for the current window.

    With fewer than two samples the set is the newest sample dilated by
    the expansion generators.
    """
    if len(window) == 0:
        raise InvalidSetError("cannot estimate a Control-Input set from an empty window")
    eps_a, eps_kappa = expansion_margins(config, belief)
    g_u1, g_u2 = (eps_a, 0.0), (0.0, eps_kappa)
    if len(window) < 2:
        return expand_control_set(
            window.samples[-1], np.zeros(basis.count), basis, g_u1, g_u2,
            scaling=config.scaling, window=window.samples,
        )
    center, alphas = fit_zonotope(window.samples, basis, config.scaling)
    return expand_control_set(center, alphas, basis, g_u1, g_u2, scaling=config.scaling, window=window.samples)
