"""Points of the form sigma^s H^n(x), their levels and H-membership depths.

The digit at position p of H^n(x) is x[p >> n] xor the parity of the
popcount of the low n bits of p, so these points are never materialised.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from tmlab.config import get_settings
from tmlab.errors import UndefinedPointError
from tmlab.subshift_core.language import INFINITE_LEVEL, Language, _desubstitute
from tmlab.subshift_core.words import THUE_MORSE, Point, array_to_word


@dataclass(frozen=True)
class OrbitPoint:
    """The point ``sigma^shift H^power (base)``."""

    base: Point
    power: int = 0
    shift: int = 0

    def digits(self, count: int) -> str:
        if count <= 0:
            return ""
        positions = np.arange(self.shift, self.shift + count, dtype=np.uint64)
        base_index = (positions >> np.uint64(self.power)).astype(np.int64)
        base_digits = self.base.digit_array(int(base_index[-1]) + 1)[base_index]
        mask = np.uint64((1 << self.power) - 1)
        parity = (np.bitwise_count(positions & mask) & 1).astype(np.uint8)
        return array_to_word(base_digits ^ parity)

    def digit(self, i: int) -> str:
        return OrbitPoint(self.base, self.power, self.shift + i).digits(1)

    def shift_by(self, steps: int = 1) -> OrbitPoint:
        return OrbitPoint(self.base, self.power, self.shift + steps)

    def parent(self) -> OrbitPoint:
        """The point whose H-image this point is a shift of."""
        return OrbitPoint(self.base, self.power - 1, self.shift >> 1)

    def to_point(self) -> Point:
        """Materialise as an explicit point (the tail grows like 2**power)."""
        return self.base.substitute(THUE_MORSE, self.power).shift(self.shift)


def orbit_level(point: OrbitPoint, lang: Language, cap: int | None = None) -> int | float:
    """Level of ``sigma^s H^n x``.

    Uses level(H z) = 2 level(z) and level(sigma H z) = 2 level(z) - 1 when
    level(z) >= 3, falling back to a direct scan of the digits otherwise.
    ``cap`` is the base-point cap; at depth n it scales to ``cap * 2**n``.
    """
    cap = get_settings().LEVEL_CAP if cap is None else cap
    if point.power == 0:
        return lang.level(point.digits, cap)
    parent = orbit_level(point.parent(), lang, cap)
    if parent == INFINITE_LEVEL:
        return INFINITE_LEVEL
    if parent >= 3:
        return 2 * parent - (point.shift & 1)
    return lang.level(point.digits, cap << point.power)


def orbit_levels(x: Point, n: int, lang: Language, cap: int | None = None) -> np.ndarray:
    """Levels of ``sigma^j H^n x`` for every ``j < 2**n`` as a float array."""
    cap = get_settings().LEVEL_CAP if cap is None else cap
    levels = np.array([lang.admissible_level(x, cap)], dtype=np.float64)
    for p in range(1, n + 1):
        t = np.arange(1 << p)
        parent = levels[t >> 1]
        child = 2.0 * parent - (t & 1)
        for j in np.flatnonzero(parent < 3):
            child[j] = lang.level(OrbitPoint(x, p, int(j)).digits, cap << p)
        levels = child
    return levels


def desubstitute_point(x: Point) -> Point | None:
    """The unique z with H(z) = x, or ``None`` when x is not in H(Sigma)."""
    prefix, tail = x.prefix, x.tail
    if len(prefix) % 2:
        prefix, tail = prefix + tail[0], tail[1:] + tail[0]
    if len(tail) % 2:
        tail = tail + tail
    parent_prefix = _desubstitute(prefix, 0) if prefix else ""
    parent_tail = _desubstitute(tail, 0)
    if parent_prefix is None or parent_tail is None:
        return None
    return Point(parent_prefix, parent_tail)


def point_membership(x: Point, kmax: int | None = None) -> int:
    """Largest k with x in H^k(Sigma).

    Raises:
        UndefinedPointError: If the depth reaches ``kmax``.
    """
    kmax = get_settings().VU_KMAX if kmax is None else kmax
    depth = 0
    while depth < kmax:
        parent = desubstitute_point(x)
        if parent is None:
            return depth
        x, depth = parent, depth + 1
    raise UndefinedPointError(f"H-membership depth reached cap {kmax}")


def orbit_membership(point: OrbitPoint, kmax: int | None = None) -> int:
    """Largest k with ``sigma^s H^n x`` in H^k(Sigma), computed from (n, s)."""
    kmax = get_settings().VU_KMAX if kmax is None else kmax
    n, s = point.power, point.shift
    if n == 0:
        return point_membership(point.base.shift(s), kmax)
    if s % 2 == 0:
        if kmax <= 1:
            raise UndefinedPointError(f"H-membership depth reached cap {kmax}")
        return 1 + orbit_membership(OrbitPoint(point.base, n - 1, s // 2), kmax - 1)
    if n >= 2:
        return 0
    # sigma H z lies in H(Sigma) only for constant z, and then equals H of a constant
    return 1 if point.base.shift((s - 1) // 2).is_constant else 0
