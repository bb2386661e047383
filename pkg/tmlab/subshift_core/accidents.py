"""Accidents along a shift orbit: the steps where the distance to the subshift fails to double."""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass

import numpy as np

from tmlab.config import get_settings
from tmlab.errors import OutOfRangeError
from tmlab.subshift_core.language import INFINITE_LEVEL, Language, get_language
from tmlab.subshift_core.words import Point, fixed_point_prefix

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AccidentRecord:
    """One accident: ``b`` shifts after the previous reference point of level ``d_before``.

    ``position`` is the absolute shift index of the accident.
    """

    b: int
    d_before: int
    d_after: int
    position: int

    @property
    def reference(self) -> int:
        return self.position - self.b

    def to_dict(self) -> dict:
        return asdict(self)


def accidents(
    x: Point,
    horizon: int,
    lang: Language | None = None,
    cap: int | None = None,
    min_level: int | None = None,
) -> list[AccidentRecord]:
    """Scan shifts 1..horizon of ``x`` and record every accident.

    The scan stops once the reference level drops below ``min_level``
    (default ``ACCIDENT_MIN_LEVEL``) or a shifted point reaches the level cap.
    """
    settings = get_settings()
    cap = settings.LEVEL_CAP if cap is None else cap
    min_level = settings.ACCIDENT_MIN_LEVEL if min_level is None else min_level
    lang = lang or get_language()
    ref_level = lang.admissible_level(x, cap)
    if ref_level == INFINITE_LEVEL:
        return []
    ref, previous = 0, ref_level
    records: list[AccidentRecord] = []
    for j in range(1, horizon + 1):
        if ref_level < min_level:
            break
        level = lang.admissible_level(x.shift(j), cap)
        if level == INFINITE_LEVEL:
            break
        if level >= previous:
            records.append(AccidentRecord(b=j - ref, d_before=int(ref_level), d_after=int(level), position=j))
            ref, ref_level = j, level
        previous = level
    return records


def _block_exponent(gap: int) -> tuple[int, int] | None:
    """(k, eps) with gap = 3**eps * 2**k, eps in {0, 1}."""
    if gap < 1:
        return None
    k = (gap & -gap).bit_length() - 1
    odd = gap >> k
    if odd == 1:
        return k, 0
    if odd == 3:
        return k, 1
    return None


def accident_violations(x: Point, record: AccidentRecord, lang: Language) -> list[str]:
    """Shape checks on one accident; an empty list means the record is well formed.

    The lower bound on ``b`` applies when the reference window is a prefix
    of a fixed point.
    """
    problems = []
    ref, b, d = record.reference, record.b, record.d_before
    window = x.digits(ref + d)[ref:]
    if not lang.contains(window) or lang.contains(window + x.digit(ref + d)):
        problems.append("reference level is not exact")
    if record.d_after <= d - b:
        problems.append("no accident: level did not recover")
    w = window[b:]
    if not all(lang.contains(e) for e in ("0" + w, "1" + w, w + "0", w + "1")):
        problems.append(f"word {w!r} between accident and depth is not bispecial")
    shape = _block_exponent(d - b)
    if shape is None:
        problems.append(f"gap {d - b} is not 2**k or 3 * 2**k")
    elif window in (fixed_point_prefix("0", d), fixed_point_prefix("1", d)):
        k, eps = shape
        if b < (1 << (k + eps)):
            problems.append(f"b={b} below {1 << (k + eps)}")
    return problems


def point_with_level(
    m: int,
    rng: np.random.Generator,
    lang: Language | None = None,
    tail_length: int = 8,
) -> Point:
    """A random point whose level is exactly ``m``.

    A factor u of length m that is not right-special is followed by the one
    symbol it cannot be extended by, then by a random periodic tail.
    """
    lang = lang or get_language(m + 1)
    if m + 1 > lang.max_len or m < 2:
        raise OutOfRangeError(f"level {m} not supported by language of max_len {lang.max_len}")
    text = lang.prefix
    while True:
        i = int(rng.integers(0, len(text) - m))
        u = text[i : i + m]
        closed = [c for c in "01" if not lang.contains(u + c)]
        if closed:
            tail = "".join(rng.choice(["0", "1"], size=tail_length))
            return Point(u + closed[0], tail)
