"""Partition values, critical exponents and pressure of the induced system.

For locally constant potentials the induced transfer operator applied to
the indicator of [J] is the scalar power series

    Z(z) = sum_n a_n(gamma) exp(-n z),

and the pressure is the root of Z(z) = 1 to the right of the critical
exponent z_c, the exponential growth rate of a_n.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq
from scipy.special import logsumexp

from tmlab.config import get_settings
from tmlab.potentials.models import DistancePower, Potential
from tmlab.thermo.coefficients import log_return_coefficients
from tmlab.thermo.return_system import ReturnSystem

logger = logging.getLogger(__name__)

_MAX_BRACKET_STEPS = 64


@dataclass
class TailEstimate:
    """Critical exponent estimate from the tail of log a_n.

    Attributes:
        value: The estimate (floored at zero when the potential is a distance power)
        slope: Least-squares slope of log a_n over n in [N/2, N]
        delta: |slope - slope over [3N/4, N]|
    """

    value: float
    slope: float
    delta: float


def _slope(log_a: np.ndarray, first: int) -> float | None:
    n = np.arange(1, len(log_a) + 1)[first - 1 :]
    y = log_a[first - 1 :]
    finite = np.isfinite(y)
    if finite.sum() < 2:
        return None
    return float(np.polyfit(n[finite], y[finite], 1)[0])


def tail_estimate(log_a: np.ndarray, floor_at_zero: bool = False) -> TailEstimate:
    """Slope of log a_n over the window [N/2, N] with a window-halving delta.

    A tail without two finite values gives ``-inf``.
    """
    size = len(log_a)
    slope = _slope(log_a, max(1, size // 2))
    if slope is None:
        return TailEstimate(value=-math.inf, slope=-math.inf, delta=math.inf)
    short = _slope(log_a, max(1, (3 * size) // 4))
    delta = abs(slope - short) if short is not None else math.inf
    value = max(slope, 0.0) if floor_at_zero else slope
    return TailEstimate(value=value, slope=slope, delta=delta)


def log_partition(log_a: np.ndarray, z: float, log_ratio: float | None = None) -> float:
    """log Z(z), optionally closing the series with a geometric tail of ratio exp(log_ratio).

    The tail assumes a_{N+k} = a_N exp(k log_ratio) and is infinite when
    that ratio times exp(-z) reaches one.
    """
    n = np.arange(1, len(log_a) + 1)
    finite = np.isfinite(log_a)
    head = logsumexp(log_a[finite] - n[finite] * z) if finite.any() else -math.inf
    if log_ratio is None or not np.isfinite(log_a[-1]):
        return float(head)
    log_q = log_ratio - z
    if log_q >= 0.0:
        return math.inf
    tail = log_a[-1] - len(log_a) * z + log_q - math.log(-math.expm1(log_q))
    return float(np.logaddexp(head, tail))


def partition_value(rs: ReturnSystem, potential: Potential, gamma: float, z: float) -> float:
    """Z(z) = sum_{n <= N} a_n exp(-n z), without tail closure."""
    return math.exp(log_partition(log_return_coefficients(rs, potential, gamma), z))


@dataclass
class RootResult:
    z_star: float | None
    tail: TailEstimate
    diagnostics: list[str] = field(default_factory=list)


def root_from_coefficients(
    log_a: np.ndarray,
    floor_at_zero: bool = False,
    margin: float | None = None,
) -> RootResult:
    """Solve Z(z) = 1 on [z_c + margin, hi] with the tail-closed series.

    ``hi`` starts at log 2 + 1 and is pushed out until Z(hi) < 1. No root
    is reported when Z(z_c + margin) < 1.
    """
    margin = get_settings().ROOT_MARGIN if margin is None else margin
    tail = tail_estimate(log_a, floor_at_zero)
    if not math.isfinite(tail.value):
        return RootResult(None, tail, ["no finite coefficients in the tail window"])

    log_ratio = tail.slope

    def f(z: float) -> float:
        return log_partition(log_a, z, log_ratio)

    lo = tail.value + margin
    if f(lo) < 0.0:
        return RootResult(None, tail, [f"Z(z_c + margin) < 1 at z = {lo:.6g}"])
    hi = max(math.log(2.0) + 1.0, lo + 1.0)
    for _ in range(_MAX_BRACKET_STEPS):
        if f(hi) < 0.0:
            break
        hi = lo + 2.0 * (hi - lo)
    else:
        return RootResult(None, tail, [f"no upper bracket below z = {hi:.6g}"])
    return RootResult(brentq(f, lo, hi, xtol=1e-13), tail)


@dataclass
class PressurePoint:
    """One gamma of a pressure curve.

    ``stability_delta`` is |z*(N) - z*(N/2)| when both roots exist and the
    window delta of the z_c estimate otherwise.
    """

    gamma: float
    z_star: float | None
    z_c: float
    zc_delta: float
    pressure: float
    stability_delta: float
    n_max: int
    diagnostics: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "gamma": self.gamma,
            "z_star": self.z_star,
            "z_c": self.z_c,
            "zc_delta": self.zc_delta,
            "pressure": self.pressure,
            "stability_delta": self.stability_delta,
            "n_max": self.n_max,
            "diagnostics": list(self.diagnostics),
        }


def zc_estimate(rs: ReturnSystem, potential: Potential, gamma: float) -> TailEstimate:
    """Critical exponent of the induced series; distance potentials are floored at 0."""
    return tail_estimate(log_return_coefficients(rs, potential, gamma), isinstance(potential, DistancePower))


def pressure_root(rs: ReturnSystem, potential: Potential, gamma: float) -> float | None:
    """Root of Z(z) = 1 right of z_c, or ``None`` past the transition."""
    return pressure_point(rs, potential, gamma).z_star


def pressure_point(rs: ReturnSystem, potential: Potential, gamma: float) -> PressurePoint:
    """Root, critical exponent and pressure at one gamma, with the N/2 self-consistency shift.

    Without a root the pressure falls back to max(z_c, 0). For distance
    potentials z_c is floored at 0, which puts the zero branch beyond the
    transition at pressure 0.
    """
    log_a = log_return_coefficients(rs, potential, gamma)
    floor = isinstance(potential, DistancePower)
    full = root_from_coefficients(log_a, floor)
    half = root_from_coefficients(log_a[: max(rs.n_max // 2, 2)], floor)
    z_star = full.z_star
    z_c = full.tail.value
    if z_star is not None and half.z_star is not None:
        stability = abs(z_star - half.z_star)
    else:
        stability = full.tail.delta
    pressure = max(z_star, 0.0) if z_star is not None else max(z_c, 0.0)
    point = PressurePoint(
        gamma=gamma,
        z_star=z_star,
        z_c=z_c,
        zc_delta=full.tail.delta,
        pressure=pressure,
        stability_delta=stability,
        n_max=rs.n_max,
        diagnostics=list(full.diagnostics),
    )
    if z_star is not None and z_star < z_c - 0.02:
        point.diagnostics.append(f"root {z_star:.6g} below z_c {z_c:.6g}")
    for message in point.diagnostics:
        logger.warning(f"[Pressure] {message}", extra={"gamma": gamma, "n_max": rs.n_max})
    return point


@dataclass
class TransitionResult:
    """Bracket [lo, hi] with positive pressure at lo and zero pressure at hi."""

    lo: float
    hi: float
    evaluations: int
    half_bracket: tuple[float, float] | None = None

    def to_dict(self) -> dict:
        return {
            "lo": self.lo,
            "hi": self.hi,
            "evaluations": self.evaluations,
            "half_bracket": list(self.half_bracket) if self.half_bracket else None,
        }


def _is_zero(rs: ReturnSystem, potential: Potential, gamma: float, truncate: int | None) -> bool:
    log_a = log_return_coefficients(rs, potential, gamma)
    if truncate is not None:
        log_a = log_a[:truncate]
    floor = isinstance(potential, DistancePower)
    result = root_from_coefficients(log_a, floor)
    if result.z_star is not None:
        return result.z_star <= 0.0
    return result.tail.value <= 0.0


def _bisect(rs, potential, lo: float, hi: float, rel_width: float, truncate: int | None) -> tuple[float, float, int]:
    count = 0
    while hi - lo > rel_width * hi:
        mid = 0.5 * (lo + hi)
        count += 1
        if _is_zero(rs, potential, mid, truncate):
            hi = mid
        else:
            lo = mid
    return lo, hi, count


def refine_transition(
    rs: ReturnSystem,
    potential: Potential,
    lo: float,
    hi: float,
    rel_width: float | None = None,
) -> TransitionResult:
    """Bisect a bracket (positive pressure at lo, zero at hi) to relative width ``rel_width``.

    The same bisection on the first N/2 coefficients is reported as
    ``half_bracket``.
    """
    rel_width = get_settings().TRANSITION_REL_WIDTH if rel_width is None else rel_width
    a, b, count = _bisect(rs, potential, lo, hi, rel_width, None)
    half = max(rs.n_max // 2, 2)
    half_bracket = None
    if _is_zero(rs, potential, hi, half) and not _is_zero(rs, potential, lo, half):
        half_lo, half_hi, half_count = _bisect(rs, potential, lo, hi, rel_width, half)
        half_bracket = (half_lo, half_hi)
        count += half_count
    logger.info(
        "[Transition] bracket refined",
        extra={"lo": a, "hi": b, "half_bracket": half_bracket, "evaluations": count},
    )
    return TransitionResult(lo=a, hi=b, evaluations=count, half_bracket=half_bracket)


def locate_transition(
    rs: ReturnSystem,
    potential: Potential,
    gamma_start: float = 1.0,
    max_doublings: int = 12,
    rel_width: float | None = None,
) -> TransitionResult | None:
    """Double gamma until the pressure vanishes, then bisect.

    Returns ``None`` when the pressure stays positive up to
    ``gamma_start * 2**max_doublings``.
    """
    lo, hi = 0.0, gamma_start
    for _ in range(max_doublings + 1):
        if _is_zero(rs, potential, hi, None):
            return refine_transition(rs, potential, lo, hi, rel_width)
        lo, hi = hi, 2.0 * hi
    logger.warning("[Transition] pressure positive on the whole scan", extra={"gamma_max": lo})
    return None
