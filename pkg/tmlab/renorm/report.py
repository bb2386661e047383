"""Rows for plotting Cesaro means of R^k V0 against their level bounds."""

from __future__ import annotations

from tmlab.potentials.models import V0
from tmlab.renorm.operator import cesaro_mean
from tmlab.subshift_core.language import Language, get_language
from tmlab.subshift_core.words import Point

CESARO_HEADER = ["n", "x_id", "value", "lower_bound", "upper_bound"]


def cesaro_rows(
    samples: list[tuple[str, Point]],
    n_values,
    lang: Language | None = None,
) -> list[list]:
    """One row (n, x_id, mean, 1/(2m), 1/(m-1)) per sample and order.

    Samples must have a finite level m >= 3.
    """
    lang = lang or get_language()
    rows = []
    for x_id, x in samples:
        m = lang.admissible_level(x)
        for n in n_values:
            rows.append([n, x_id, cesaro_mean(V0, x, n, lang), 1 / (2 * m), 1 / (m - 1)])
    return rows
