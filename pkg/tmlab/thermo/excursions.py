"""Excursion-series bounds for V = level**-a with 0 < a < 1.

An excursion that follows the subshift for d steps with an accident at b
costs about (d**(1-a) - (d-b)**(1-a)) / (1-a) in units of gamma. Summing
the clusters with d - b = 2**k and d - b = 3 * 2**k gives the series B and
C; once B + C is small the induced operator at z = 0 maps the indicator
of [J] below one and z_c(gamma) = 0.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from tmlab.config import get_settings
from tmlab.errors import ConvergenceError, OutOfRangeError

logger = logging.getLogger(__name__)

_K_START = 4
_K_MAX = 400
_J_CHUNK = 4096
_J_MAX = 1 << 22


@dataclass
class ExcursionBounds:
    """B(z), C(z), and the closed-form majorant of B(0)."""

    a: float
    gamma: float
    z: float
    b0: float
    c0: float
    closed_bound: float
    converged: bool = True
    diagnostics: list[str] = field(default_factory=list)

    @property
    def total(self) -> float:
        return self.b0 + self.c0

    def to_dict(self) -> dict:
        return {
            "a": self.a,
            "gamma": self.gamma,
            "z": self.z,
            "b0": self.b0,
            "c0": self.c0,
            "closed_bound": self.closed_bound,
            "converged": self.converged,
            "diagnostics": list(self.diagnostics),
        }


def _check_exponent(a: float, gamma: float) -> None:
    if not 0.0 < a < 1.0:
        raise OutOfRangeError(f"exponent a must lie in (0, 1), got {a}")
    if gamma <= 0.0:
        raise OutOfRangeError(f"gamma must be positive, got {gamma}")


def _inner_sum(exponent, j_start: int, rel_tail: float) -> tuple[float, bool]:
    """Sum exp(exponent(j)) over j >= j_start; terms decrease in j."""
    total = 0.0
    start = j_start
    while start < _J_MAX:
        j = np.arange(start, start + _J_CHUNK, dtype=np.float64)
        terms = np.exp(exponent(j))
        total += math.fsum(terms)
        if terms[-1] <= rel_tail * total:
            return total, True
        start += _J_CHUNK
    return total, False


def _series(a: float, gamma: float, z: float, kind: str, rel_tail: float) -> tuple[float, bool]:
    s = 1.0 - a
    total = 0.0
    for k in range(_K_START, _K_MAX):
        scale = 2.0**k
        if kind == "B":

            def exponent(j, scale=scale):
                return -(gamma / s) * ((scale * (1.0 + j / 2.0)) ** s - scale**s) - j * (scale / 2.0) * z

            term, ok = _inner_sum(exponent, 1, rel_tail)
        else:

            def exponent(j, scale=scale):
                return -(gamma / s) * ((scale * (1.0 + j / 2.0)) ** s - 3.0**s * scale**s) - (scale / 2.0) * (j - 4.0) * z

            term, ok = _inner_sum(exponent, 5, rel_tail)
        if not ok:
            return total + term, False
        total += term
        if term <= rel_tail * total:
            return total, True
    return total, False


def closed_b_bound(a: float, gamma: float) -> float:
    """sum_k (1 + 3/(s-1)) (2/3)**s with s = gamma 2**(k(1-a)); infinite when some s <= 1."""
    total = 0.0
    for k in range(_K_START, _K_MAX):
        s = gamma * 2.0 ** (k * (1.0 - a))
        if s <= 1.0:
            return math.inf
        term = (1.0 + 3.0 / (s - 1.0)) * (2.0 / 3.0) ** s
        total += term
        if term <= 1e-16 * total:
            break
    return total


def excursion_bounds(a: float, gamma: float, z: float = 0.0, rel_tail: float | None = None) -> ExcursionBounds:
    """Sum B(z) and C(z), stopping each sum at relative tail ``rel_tail``.

    Non-convergence within the internal term caps is reported in the
    result, not raised.
    """
    _check_exponent(a, gamma)
    rel_tail = get_settings().EXCURSION_REL_TAIL if rel_tail is None else rel_tail
    b0, b_ok = _series(a, gamma, z, "B", rel_tail)
    c0, c_ok = _series(a, gamma, z, "C", rel_tail)
    result = ExcursionBounds(a=a, gamma=gamma, z=z, b0=b0, c0=c0, closed_bound=closed_b_bound(a, gamma))
    if not (b_ok and c_ok):
        result.converged = False
        result.diagnostics.append("excursion series truncated before reaching the relative tail")
        logger.warning("[Excursions] divergence guard hit", extra={"a": a, "gamma": gamma})
    return result


def free_path_epsilon(a: float, delta_level: int = 2) -> float:
    """Lower bound of V on free paths: (5 + delta_level)**-a."""
    return (5.0 + delta_level) ** (-a)


def excursion_majorant(a: float, gamma: float, delta_level: int = 2) -> float:
    """Upper bound of the induced operator at z = 0 applied to the indicator of [J].

    Infinite when one of the geometric series it sums does not converge.
    """
    _check_exponent(a, gamma)
    eps = free_path_epsilon(a, delta_level)
    ratio = 2.0 * math.exp(-eps * gamma)
    if ratio >= 1.0:
        return math.inf
    bounds = excursion_bounds(a, gamma)
    if not bounds.converged or bounds.total >= 1.0:
        return math.inf
    first = 32.0 * math.exp(-5.0 * eps * gamma) / (1.0 - ratio)
    bracket = ratio / (1.0 - ratio) * bounds.total / (1.0 - bounds.total)
    if bracket >= 1.0:
        return math.inf
    return first / (1.0 - bracket)


@dataclass
class GammaCertificate:
    """Smallest grid gamma with majorant below one."""

    a: float
    gamma0: float
    majorant: float
    previous_majorant: float | None
    step: float

    def to_dict(self) -> dict:
        return {
            "a": self.a,
            "gamma0": self.gamma0,
            "majorant": self.majorant,
            "previous_majorant": self.previous_majorant,
            "step": self.step,
        }


def gamma_certificate(
    a: float,
    step: float = 0.25,
    gamma_max: float = 1000.0,
    delta_level: int = 2,
) -> GammaCertificate:
    """Scan gamma = step, 2 step, ... for the first majorant below one.

    Raises:
        ConvergenceError: If the grid is exhausted.
    """
    previous = None
    for i in range(1, int(gamma_max / step) + 1):
        gamma = i * step
        value = excursion_majorant(a, gamma, delta_level)
        if value < 1.0:
            logger.info("[Excursions] certificate found", extra={"a": a, "gamma0": gamma, "majorant": value})
            return GammaCertificate(a=a, gamma0=gamma, majorant=value, previous_majorant=previous, step=step)
        previous = value
    raise ConvergenceError(f"majorant stays >= 1 up to gamma = {gamma_max}", delta=math.inf if previous is None else previous)


def zc_lower_bound_vu(alpha: float, gamma: float) -> float:
    """2**(1 - exp(2 - gamma alpha)), a lower bound of z_c for the unbounded potential."""
    with np.errstate(over="ignore"):
        return float(np.exp2(1.0 - np.exp(2.0 - gamma * alpha)))
