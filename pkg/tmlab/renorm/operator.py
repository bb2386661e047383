"""The renormalization operator R V = V o sigma o H + V o H.

Its n-th power is the Birkhoff sum of 2**n terms along H^n, which is how
``renorm_apply`` evaluates it: every term V(sigma^j H^n x) is computed from
the orbit-point digit formula and the level doubling identity.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from tmlab.config import get_settings
from tmlab.errors import CapExceededError, UndefinedPointError, UnsupportedPotentialError
from tmlab.potentials.evaluate import evaluate, vu_depth
from tmlab.potentials.models import (
    CylinderTable,
    CylinderUc,
    DistancePower,
    Potential,
    UnboundedVu,
)
from tmlab.subshift_core.accidents import AccidentRecord
from tmlab.subshift_core.language import Language, get_language
from tmlab.subshift_core.orbit import OrbitPoint, orbit_levels, orbit_membership
from tmlab.subshift_core.words import THUE_MORSE, Point, fixed_point_prefix, window_codes, word_to_array

logger = logging.getLogger(__name__)


@dataclass
class RenormEvaluation:
    """Value of (R^n V)(x) with the levels and accidents seen along sigma^j H^n x."""

    x: Point
    n: int
    value: float
    accidents_seen: list[AccidentRecord] = field(default_factory=list)
    levels: np.ndarray | None = None

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "value": self.value,
            "accidents_seen": [a.to_dict() for a in self.accidents_seen],
        }


def _check_n(n: int) -> None:
    limit = get_settings().RENORM_MAX_N
    if not 0 <= n <= limit:
        raise CapExceededError(f"renormalization order {n} outside [0, {limit}]")


def _orbit_digits(x: Point, n: int, count: int) -> np.ndarray:
    return word_to_array(OrbitPoint(x, n, 0).digits(count))


def _table_lookup(table: CylinderTable) -> np.ndarray:
    lookup = np.zeros(1 << table.depth)
    for word, value in table.values.items():
        lookup[int(word, 2)] = value
    return lookup


def _aligned_depths(x: Point, n: int, kmax: int) -> np.ndarray:
    """H-membership depth of sigma^s H^n x for s = 1..2**n."""
    s = np.arange(1, (1 << n) + 1, dtype=np.int64)
    valuation = np.bitwise_count((s & -s) - 1).astype(np.int64)
    depths = valuation.copy()
    # valuations n-1 and n reach the base point and need the full recursion
    for idx in np.flatnonzero(valuation >= n - 1):
        depths[idx] = orbit_membership(OrbitPoint(x, n, int(s[idx])), kmax)
    return depths


def _distance_terms(potential: DistancePower, levels: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        terms = np.where(np.isinf(levels), 0.0, levels ** (-potential.a))
    if potential.perturbation is not None:
        finite = ~np.isinf(levels)
        terms[finite] += potential.perturbation.coefficient * levels[finite] ** (-potential.perturbation.exponent)
    return terms


def renorm_terms(
    potential: Potential,
    x: Point,
    n: int,
    lang: Language | None = None,
    cap: int | None = None,
    levels: np.ndarray | None = None,
) -> np.ndarray:
    """The 2**n values V(sigma^j H^n x), j < 2**n."""
    size = 1 << n
    match potential:
        case DistancePower():
            if levels is None:
                cap = get_settings().LEVEL_CAP if cap is None else cap
                levels = orbit_levels(x, n, lang or get_language(), cap)
            return _distance_terms(potential, levels)
        case CylinderUc():
            d = _orbit_digits(x, n, size + 1).astype(np.int8)
            return potential.c * (d[1:] - d[:-1]).astype(np.float64)
        case CylinderTable():
            d = _orbit_digits(x, n, size + potential.depth - 1)
            return _table_lookup(potential)[window_codes(d, potential.depth)]
        case UnboundedVu(reading="aligned"):
            kmax = get_settings().VU_KMAX if cap is None else cap
            depths = _aligned_depths(x, n, kmax)
            return np.array([potential.at_depth(int(k)) for k in depths])
        case UnboundedVu():
            op = OrbitPoint(x, n, 0)
            return np.array([potential.at_depth(vu_depth(op.shift_by(j), cap)) for j in range(size)])
    raise UnsupportedPotentialError(f"cannot renormalize {potential!r}")


def _accidents_from_levels(levels: np.ndarray) -> list[AccidentRecord]:
    records = []
    ref = 0
    for j in range(1, len(levels)):
        if np.isinf(levels[j]) or np.isinf(levels[ref]):
            break
        if levels[j] >= levels[j - 1]:
            records.append(
                AccidentRecord(b=j - ref, d_before=int(levels[ref]), d_after=int(levels[j]), position=j)
            )
            ref = j
    return records


def renorm_apply(
    potential: Potential,
    x: Point,
    n: int,
    lang: Language | None = None,
    cap: int | None = None,
) -> RenormEvaluation:
    """Evaluate (R^n V)(x) as the Birkhoff sum of V along sigma^j H^n x, j < 2**n.

    The sum is reduced with numpy's pairwise summation, so the result does not
    depend on how the terms were produced.

    A ``Point`` always ends in a periodic tail, so every digit the orbit needs
    exists and no insufficient-prefix error arises here.
    """
    _check_n(n)
    level_cap = get_settings().LEVEL_CAP if cap is None or not isinstance(potential, DistancePower) else cap
    lang = lang or get_language()
    levels = orbit_levels(x, n, lang, level_cap)
    terms = renorm_terms(potential, x, n, lang, cap, levels=levels)
    return RenormEvaluation(
        x=x,
        n=n,
        value=float(np.sum(terms)),
        accidents_seen=_accidents_from_levels(levels),
        levels=levels,
    )


def renorm_apply_recursive(
    potential: Potential,
    x: Point,
    n: int,
    lang: Language | None = None,
    cap: int | None = None,
) -> float:
    """(R^n V)(x) by unrolling R V = V o sigma o H + V o H on explicit points."""
    _check_n(n)
    if n == 0:
        if isinstance(potential, DistancePower):
            level_cap = get_settings().LEVEL_CAP if cap is None else cap
            return evaluate(potential, x, lang or get_language(), level_cap)
        return evaluate(potential, x, lang, cap)
    image = x.substitute(THUE_MORSE)
    if isinstance(potential, DistancePower):
        # levels double under H, so the cap doubles with each unrolling
        cap = (get_settings().LEVEL_CAP if cap is None else cap) * 2
    return renorm_apply_recursive(potential, image.shift(1), n - 1, lang, cap) + renorm_apply_recursive(
        potential, image, n - 1, lang, cap
    )


def cesaro_mean(
    potential: Potential,
    x: Point,
    n: int,
    lang: Language | None = None,
    cap: int | None = None,
) -> float:
    """(1/n) sum_{k<n} (R^k V)(x)."""
    values = [renorm_apply(potential, x, k, lang, cap).value for k in range(n)]
    return math.fsum(values) / n


@dataclass
class ScalingRow:
    n: int
    value: float
    ratio: float | None


def power_scaling_check(
    a: float,
    x: Point,
    n_range,
    lang: Language | None = None,
) -> list[ScalingRow]:
    """Values of R^n (level**-a) at x and their successive ratios (tend to 2**(1-a))."""
    potential = DistancePower(a=a)
    rows: list[ScalingRow] = []
    previous = None
    for n in n_range:
        value = renorm_apply(potential, x, n, lang).value
        rows.append(ScalingRow(n=n, value=value, ratio=None if previous in (None, 0.0) else value / previous))
        previous = value
    return rows


def weak_stable_limit(
    g: CylinderTable,
    x: Point,
    n: int,
    lang: Language | None = None,
    cap: int | None = None,
) -> float:
    """Cesaro mean of R^k V for V = g / level, k < n."""
    cap = get_settings().LEVEL_CAP if cap is None else cap
    lang = lang or get_language()
    lookup = _table_lookup(g)
    total = []
    for k in range(n):
        _check_n(k)
        levels = orbit_levels(x, k, lang, cap)
        d = _orbit_digits(x, k, (1 << k) + g.depth - 1)
        weights = lookup[window_codes(d, g.depth)]
        with np.errstate(divide="ignore"):
            inverse = np.where(np.isinf(levels), 0.0, levels ** (-1.0))
        total.append(float(np.sum(weights * inverse)))
    return math.fsum(total) / n


@dataclass
class ResidualReport:
    """Largest |(R V)(x) - V(x)| over samples and the W(01 rho_j) + W(10 rho_j) values."""

    max_residual: float
    samples_used: int
    identities: dict[str, float]

    def to_dict(self) -> dict:
        return {
            "max_residual": self.max_residual,
            "samples_used": self.samples_used,
            "identities": self.identities,
        }


def fixed_point_residual(
    potential: Potential,
    samples: list[Point],
    lang: Language | None = None,
    cap: int | None = None,
    rho_digits: int = 256,
) -> ResidualReport:
    """Residual of R V = V on sample points; undefined samples are skipped."""
    worst = 0.0
    used = 0
    for x in samples:
        try:
            once = renorm_apply(potential, x, 1, lang, cap).value
            base = renorm_apply(potential, x, 0, lang, cap).value
        except UndefinedPointError:
            continue
        used += 1
        worst = max(worst, abs(once - base))

    identities = {}
    for j in ("0", "1"):
        rho = fixed_point_prefix(j, rho_digits)
        try:
            value = evaluate(potential, Point("01" + rho, "0"), lang, cap) + evaluate(
                potential, Point("10" + rho, "0"), lang, cap
            )
        except UndefinedPointError:
            value = math.nan
        identities[f"rho{j}"] = value
    logger.debug("[Renorm] fixed-point residual", extra={"max_residual": worst, "samples": used})
    return ResidualReport(max_residual=worst, samples_used=used, identities=identities)


def commutation_violations(words) -> list[str]:
    """Words w with H(sigma w) != sigma^2 H(w)."""
    return [w for w in words if len(w) >= 1 and THUE_MORSE.apply(w[1:]) != THUE_MORSE.apply(w)[2:]]
