"""Pointwise evaluation of potentials and their Birkhoff sums."""

from __future__ import annotations

import math

import numpy as np

from tmlab.config import get_settings
from tmlab.errors import CapExceededError, UndefinedPointError, UnsupportedPotentialError
from tmlab.potentials.models import (
    CylinderTable,
    CylinderUc,
    DistancePower,
    Potential,
    UnboundedVu,
)
from tmlab.subshift_core.language import INFINITE_LEVEL, Language, get_language
from tmlab.subshift_core.orbit import OrbitPoint, point_membership
from tmlab.subshift_core.words import Point, fixed_point_prefix, word_to_array


def distance_value(potential: DistancePower, level: float) -> float:
    """Value of a distance potential at a given level; zero at infinite level."""
    if level == INFINITE_LEVEL:
        return 0.0
    value = level ** (-potential.a)
    if potential.perturbation is not None:
        value += potential.perturbation(level)
    return value


def uc_value(c: float, two_digits: str) -> float:
    if two_digits == "01":
        return c
    if two_digits == "10":
        return -c
    return 0.0


def vu_depth(x: Point | OrbitPoint, cap: int | None = None) -> int:
    """Largest k such that digits 1..2**k of x agree with a fixed point of H.

    The common prefix of sigma x with the fixed point starting like it is
    found by comparing chunks of doubling length.

    Raises:
        UndefinedPointError: If the agreement reaches ``2**cap`` digits.
    """
    cap = get_settings().VU_KMAX if cap is None else cap
    limit = 1 << cap
    max_length = get_settings().MAX_WORD_LENGTH
    y = x.shift_by(1) if isinstance(x, OrbitPoint) else x.shift(1)
    seed = y.digits(1)
    n = min(64, limit)
    while True:
        if n > max_length:
            raise CapExceededError(f"depth comparison needs {n} digits, cap is {max_length}")
        mismatch = np.flatnonzero(word_to_array(y.digits(n)) != word_to_array(fixed_point_prefix(seed, n)))
        if mismatch.size:
            return int(mismatch[0]).bit_length() - 1
        if n >= limit:
            break
        n = min(2 * n, limit)
    raise UndefinedPointError(f"point agrees with a fixed point of H on {limit} digits")


def vu_aligned_depth(x: Point, cap: int | None = None) -> int:
    """Largest k with sigma x in H^k(Sigma)."""
    return point_membership(x.shift(1), cap)


def evaluate(
    potential: Potential,
    x: Point,
    lang: Language | None = None,
    cap: int | None = None,
) -> float:
    """Exact value of a potential at a point.

    ``cap`` is the level cap for distance potentials and the depth cap for
    the unbounded potential.
    """
    match potential:
        case DistancePower():
            cap = get_settings().LEVEL_CAP if cap is None else cap
            lang = lang or get_language()
            return distance_value(potential, lang.admissible_level(x, cap))
        case CylinderUc():
            return uc_value(potential.c, x.digits(2))
        case UnboundedVu():
            if potential.reading == "aligned":
                depth = vu_aligned_depth(x, cap)
            else:
                depth = vu_depth(x, cap)
            return potential.at_depth(depth)
        case CylinderTable():
            return potential.value(x.digits(potential.depth))
    raise UnsupportedPotentialError(f"unknown potential {potential!r}")


def birkhoff_sum(
    potential: Potential,
    x: Point,
    n: int,
    lang: Language | None = None,
    cap: int | None = None,
) -> float:
    """Sum of the potential along the first ``n`` points of the shift orbit of x."""
    return math.fsum(evaluate(potential, x.shift(i), lang, cap) for i in range(n))
