"""Conformal eigen-measure of the weighted transfer action on depth-N cells."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from tmlab.config import get_settings
from tmlab.errors import ConvergenceError, OutOfRangeError
from tmlab.interval_map.potential import ModifiedPotential, build_w

logger = logging.getLogger(__name__)


@dataclass
class ConformalMeasure:
    """Cell weights with nu(shift B) = eigenvalue * integral over B of exp(gamma W) d nu.

    Attributes:
        depth: Cell depth N
        weights: Mass of every depth-N cell, summing to one
        eigenvalue: Dominant eigenvalue of the adjoint action
        gamma1: Inverse temperature used
        iterations: Power-iteration steps taken
        delta: Final L1 change between successive iterates
        residual: Largest conformality defect over depth-N cells
    """

    depth: int
    weights: np.ndarray
    eigenvalue: float
    gamma1: float
    iterations: int
    delta: float
    residual: float

    @property
    def log_eigenvalue(self) -> float:
        return math.log(self.eigenvalue)

    @property
    def eigenvalue_gap(self) -> float:
        """|eigenvalue - 1|; zero pressure at gamma1 makes it vanish."""
        return abs(self.eigenvalue - 1.0)

    def parent_weights(self) -> np.ndarray:
        """Masses of the depth-(N-1) cells."""
        return self.weights[0::2] + self.weights[1::2]

    def to_dict(self) -> dict:
        return {
            "depth": self.depth,
            "eigenvalue": self.eigenvalue,
            "eigenvalue_gap": self.eigenvalue_gap,
            "gamma1": self.gamma1,
            "iterations": self.iterations,
            "delta": self.delta,
            "residual": self.residual,
            "max_cell_weight": float(self.weights.max()),
        }


def _power_iteration(
    w: ModifiedPotential,
    gamma: float,
    iterations: int,
    tol: float,
) -> ConformalMeasure:
    size = w.size
    damping = np.exp(-gamma * w.values)
    weights = np.full(size, 1.0 / size)
    eigenvalue = 1.0
    delta = math.inf
    step = 0

    for step in range(1, iterations + 1):
        # a depth-N cell maps onto the depth-(N-1) cell of its index mod 2**(N-1)
        pulled = damping * np.tile(weights[0::2] + weights[1::2], 2)
        eigenvalue = float(pulled.sum())
        pulled /= eigenvalue
        delta = float(np.abs(pulled - weights).sum())
        weights = pulled
        if delta < tol:
            break
    else:
        raise ConvergenceError(f"conformal measure at gamma={gamma:g} after {iterations} iterations", delta=delta)

    parents = np.tile(weights[0::2] + weights[1::2], 2)
    residual = float(np.abs(parents - eigenvalue * weights / damping).max())
    return ConformalMeasure(
        depth=w.depth,
        weights=weights,
        eigenvalue=eigenvalue,
        gamma1=gamma,
        iterations=step,
        delta=delta,
        residual=residual,
    )


def conformal_measure(
    w: ModifiedPotential,
    gamma1: float,
    iterations: int | None = None,
    tol: float | None = None,
) -> ConformalMeasure:
    """Fixed point of the adjoint of the exp(-gamma1 W) weighted transfer action.

    Power iteration from the uniform measure, normalized to mass one at
    every step.

    Raises:
        OutOfRangeError: If gamma1 is negative
        ConvergenceError: If the L1 change stays above ``tol`` for ``iterations`` steps
    """
    if gamma1 < 0:
        raise OutOfRangeError("gamma1 must be nonnegative")
    settings = get_settings()
    iterations = settings.CONFORMAL_MAX_ITER if iterations is None else iterations
    tol = settings.CONFORMAL_TOL if tol is None else tol
    nu = _power_iteration(w, gamma1, iterations, tol)
    logger.info("[ConformalMeasure] converged", extra=nu.to_dict())
    return nu


def depth_drift(
    a: float,
    depth: int,
    gamma1: float,
    iterations: int | None = None,
) -> float:
    """|log eigenvalue at depth N - log eigenvalue at depth N/2| for the potential with exponent ``a``."""
    if depth < 2:
        raise OutOfRangeError("depth drift needs depth >= 2")
    fine = conformal_measure(build_w(a, depth), gamma1, iterations=iterations)
    coarse = conformal_measure(build_w(a, depth // 2), gamma1, iterations=iterations)
    drift = abs(fine.log_eigenvalue - coarse.log_eigenvalue)
    logger.debug("[ConformalMeasure] depth drift", extra={"a": a, "depth": depth, "drift": drift})
    return drift


def cell_slopes(nu: ConformalMeasure, w: ModifiedPotential) -> np.ndarray:
    """Expansion factor of the induced interval map on every cell: eigenvalue * exp(gamma1 W)."""
    return nu.eigenvalue * np.exp(nu.gamma1 * w.values)


def pressure_profile(
    w: ModifiedPotential,
    gamma1: float,
    ts: list[float],
    offset: float = 0.0,
    iterations: int | None = None,
) -> list[float]:
    """Depth-N pressure of t * (gamma1 W + offset) at every t.

    With ``offset`` the log eigenvalue at gamma1 this is the pressure of
    -t log f'_a for the interval map built at gamma1.
    """
    out = []
    for t in ts:
        nu = conformal_measure(w, t * gamma1, iterations=iterations)
        out.append(nu.log_eigenvalue - t * offset)
    return out
