"""Pressure curves over a gamma grid."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from tmlab.config import get_settings
from tmlab.errors import LabError, OutOfRangeError
from tmlab.potentials.models import DistancePower, Potential
from tmlab.thermo.pressure import PressurePoint, TransitionResult, refine_transition
from tmlab.thermo.return_system import ReturnSystem

logger = logging.getLogger(__name__)

CURVE_HEADER = ["gamma", "z_star", "z_c", "pressure", "nmax", "stability_delta"]

_TOLERANCE = 1e-9


@dataclass
class PressureCurve:
    """Per-gamma roots, critical exponents and pressures.

    ``lower`` and ``upper`` hold the pressures at gamma (1 + epsilon0) and
    gamma (1 - epsilon0) when a perturbation allowance was requested.
    """

    gamma_grid: list[float]
    points: list[PressurePoint]
    transition: TransitionResult | None = None
    lower: list[float] | None = None
    upper: list[float] | None = None
    failures: list[str] = field(default_factory=list)

    @property
    def z_star(self) -> list[float | None]:
        return [p.z_star for p in self.points]

    @property
    def z_c(self) -> list[float]:
        return [p.z_c for p in self.points]

    @property
    def pressure(self) -> list[float]:
        return [p.pressure for p in self.points]

    def monotonicity_violations(self) -> list[str]:
        """Grid steps where a found root increases with gamma."""
        found = [(p.gamma, p.z_star) for p in self.points if p.z_star is not None]
        return [
            f"z* rises from {z0:.6g} at gamma={g0:g} to {z1:.6g} at gamma={g1:g}"
            for (g0, z0), (g1, z1) in zip(found, found[1:])
            if z1 > z0 + _TOLERANCE
        ]

    def convexity_violations(self) -> list[str]:
        """Interior grid points where the pressure lies above its chord."""
        out = []
        pts = self.points
        for left, mid, right in zip(pts, pts[1:], pts[2:]):
            t = (mid.gamma - left.gamma) / (right.gamma - left.gamma)
            chord = (1 - t) * left.pressure + t * right.pressure
            if mid.pressure > chord + 1e-6:
                out.append(f"pressure {mid.pressure:.6g} above chord {chord:.6g} at gamma={mid.gamma:g}")
        return out

    def positivity_violations(self) -> list[str]:
        """Grid points with zero pressure that are followed by a positive one.

        The pressure is positive below the transition and zero from there on.
        """
        out = []
        for i, p in enumerate(self.points):
            if p.pressure > 0.0:
                continue
            later = next((q for q in self.points[i + 1 :] if q.pressure > 0.0), None)
            if later is not None:
                out.append(f"pressure zero at gamma={p.gamma:g} but {later.pressure:.6g} at gamma={later.gamma:g}")
        return out

    def rows(self) -> list[list]:
        return [[p.gamma, p.z_star, p.z_c, p.pressure, p.n_max, p.stability_delta] for p in self.points]

    def to_dict(self) -> dict:
        return {
            "gamma_grid": list(self.gamma_grid),
            "points": [p.to_dict() for p in self.points],
            "transition": self.transition.to_dict() if self.transition else None,
            "lower": self.lower,
            "upper": self.upper,
            "failures": list(self.failures),
        }


def _sweep(rs: ReturnSystem, potential: Potential, gammas: list[float], threads: int | None) -> tuple[list, list]:
    # deferred, tmlab.workers imports tmlab.thermo
    from tmlab.workers import PressureWorker, SweepRunner, gamma_key

    result = SweepRunner(PressureWorker(rs, potential), threads=threads).run(gammas)
    points = [result.outputs.get(gamma_key(g)) for g in gammas]
    failures = [e["error"] for batch in result.batch_results for e in batch.errors] + result.errors
    return points, failures


def pressure_curve(
    rs: ReturnSystem,
    potential: Potential,
    gamma_grid: list[float],
    threads: int | None = None,
    epsilon0: float | None = None,
    locate: bool = True,
) -> PressureCurve:
    """Pressure at every gamma of an ascending grid.

    When the pressure of a distance potential drops to zero between two
    grid points the bracket is refined by bisection in gamma.
    """
    grid = [float(g) for g in gamma_grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise OutOfRangeError("gamma grid must be strictly ascending")
    epsilon0 = get_settings().EPSILON0 if epsilon0 is None else epsilon0

    points, failures = _sweep(rs, potential, grid, threads)
    if any(p is None for p in points):
        raise LabError(f"pressure sweep failed: {failures}")
    curve = PressureCurve(gamma_grid=grid, points=points, failures=failures)

    if locate and isinstance(potential, DistancePower):
        for left, right in zip(points, points[1:]):
            if left.pressure > 0.0 and right.pressure <= 0.0:
                curve.transition = refine_transition(rs, potential, left.gamma, right.gamma)
                break

    if epsilon0 > 0.0:
        low, _ = _sweep(rs, potential, [g * (1.0 + epsilon0) for g in grid], threads)
        high, _ = _sweep(rs, potential, [g * (1.0 - epsilon0) for g in grid], threads)
        curve.lower = [p.pressure if p else None for p in low]
        curve.upper = [p.pressure if p else None for p in high]

    # roots only decrease in gamma for nonnegative potentials
    violations = curve.monotonicity_violations() if isinstance(potential, DistancePower) else []
    for message in violations:
        logger.warning(f"[PressureCurve] {message}")
    logger.info(
        "[PressureCurve] done",
        extra={"points": len(grid), "n_max": rs.n_max, "transition": curve.transition is not None},
    )
    return curve
