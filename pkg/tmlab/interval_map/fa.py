"""Circle-covering interval map conjugated to the shift through a conformal measure.

theta is the distribution function of the conformal measure in the dyadic
order, and the map is theta o Pi o shift o Pi^-1 o theta^-1, sampled at the
images of cell endpoints.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from tmlab.errors import OutOfRangeError
from tmlab.interval_map.conformal import ConformalMeasure
from tmlab.interval_map.potential import ModifiedPotential

logger = logging.getLogger(__name__)

FA_HEADER = ["t", "f_a", "slope", "W"]


def theta(nu: ConformalMeasure) -> np.ndarray:
    """Distribution function at the 2**N + 1 cell endpoints."""
    cdf = np.concatenate(([0.0], np.cumsum(nu.weights)))
    return cdf / cdf[-1]


@dataclass
class FaMap:
    """The two full branches of the sampled map.

    ``knots[b]`` are increasing points of [0, 1] and ``values[b]`` the map
    at those points; between knots the map is linear.
    """

    depth: int
    stride: int
    knots: tuple[np.ndarray, np.ndarray]
    values: tuple[np.ndarray, np.ndarray]

    @property
    def split(self) -> float:
        """Point where the second branch starts."""
        return float(self.knots[1][0])

    @property
    def branches(self) -> int:
        return len(self.knots)

    def __call__(self, t: np.ndarray | float) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        first = np.interp(t, self.knots[0], self.values[0])
        second = np.interp(t, self.knots[1], self.values[1])
        return np.where(t < self.split, first, second)

    def is_monotone(self) -> bool:
        return all(bool(np.all(np.diff(v) >= 0.0)) for v in self.values)

    def is_onto(self) -> bool:
        return all(v[0] == 0.0 and v[-1] == 1.0 for v in self.values)

    def slopes(self) -> np.ndarray:
        """Slope on every sampled interval, both branches in order."""
        parts = [np.diff(v) / np.diff(k) for k, v in zip(self.knots, self.values)]
        return np.concatenate(parts)


def build_fa(nu: ConformalMeasure, grid_size: int | None = None) -> FaMap:
    """Sample the map at the theta-images of ``grid_size`` equal dyadic cells.

    Raises:
        OutOfRangeError: If grid_size is not a power of two in [2, 2**depth]
    """
    size = 1 << nu.depth
    grid_size = size if grid_size is None else grid_size
    if grid_size < 2 or grid_size > size or grid_size & (grid_size - 1):
        raise OutOfRangeError(f"grid size must be a power of two in [2, {size}]")
    stride = size // grid_size
    half = size // 2
    cdf = theta(nu)

    knots = []
    values = []
    for start in (0, half):
        cells = np.arange(start, start + half + 1, stride)
        knots.append(cdf[cells])
        # the endpoint of cell i maps to the endpoint of cell 2 (i mod 2**(N-1))
        values.append(cdf[2 * (cells - start)])
    return FaMap(depth=nu.depth, stride=stride, knots=tuple(knots), values=tuple(values))


def semi_conjugacy_error(
    fa: FaMap,
    nu: ConformalMeasure,
    samples: int = 1000,
    seed: int = 0,
) -> float:
    """Largest |theta Pi(shift x) - f_a(theta Pi(x))| over random points x.

    Points are drawn uniformly in [0, 1) in the Pi coordinate and theta is
    read as linear across each depth-N cell.
    """
    rng = np.random.default_rng(seed)
    size = 1 << nu.depth
    cdf = theta(nu)
    weights = np.diff(cdf)

    def theta_pi(s: np.ndarray) -> np.ndarray:
        cell = np.minimum((s * size).astype(np.int64), size - 1)
        return cdf[cell] + (s * size - cell) * weights[cell]

    s = rng.random(samples)
    shifted = (2.0 * s) % 1.0
    return float(np.abs(theta_pi(shifted) - fa(theta_pi(s))).max())


@dataclass
class DerivativeReport:
    """Finite-difference slopes against exp(gamma1 W + offset)."""

    max_rel_error: float
    min_slope: float
    max_slope: float
    min_slope_off_subshift: float
    max_slope_on_subshift: float
    cells_checked: int
    offset: float

    @property
    def expanding(self) -> bool:
        return self.min_slope_off_subshift > 1.0

    def to_dict(self) -> dict:
        return {
            "max_rel_error": self.max_rel_error,
            "min_slope": self.min_slope,
            "max_slope": self.max_slope,
            "min_slope_off_subshift": self.min_slope_off_subshift,
            "max_slope_on_subshift": self.max_slope_on_subshift,
            "cells_checked": self.cells_checked,
            "offset": self.offset,
            "expanding": self.expanding,
        }


def slope_offset(nu: ConformalMeasure, w: ModifiedPotential) -> float:
    """Expected log slope on W = 0 cells.

    Zero for 0 < a < 1, where the pressure vanishes at gamma1. Otherwise the
    positive part of the log eigenvalue, which is log 2 for the zero potential.
    """
    if 0.0 < w.a < 1.0:
        return 0.0
    return max(nu.log_eigenvalue, 0.0)


def derivative_check(
    nu: ConformalMeasure,
    w: ModifiedPotential,
    samples: np.ndarray | list[int] | None = None,
    offset: float | None = None,
) -> DerivativeReport:
    """Compare full-resolution slopes of f_a with exp(gamma1 W + offset) on cells.

    ``offset`` defaults to ``slope_offset(nu, w)``. For 0 < a < 1 that is
    zero, so the relative error includes |eigenvalue - 1| and only vanishes
    when gamma1 is the transition point.
    """
    offset = slope_offset(nu, w) if offset is None else offset
    fa = build_fa(nu)
    slopes = fa.slopes()
    cells = np.arange(w.size) if samples is None else np.asarray(samples, dtype=np.int64)
    if cells.size and (cells.min() < 0 or cells.max() >= w.size):
        raise OutOfRangeError(f"sample cells must lie in [0, {w.size})")

    measured = slopes[cells]
    expected = np.exp(nu.gamma1 * w.values[cells] + offset)
    rel = np.abs(measured - expected) / expected
    on = w.on_subshift()[cells]

    report = DerivativeReport(
        max_rel_error=float(rel.max()) if cells.size else 0.0,
        min_slope=float(measured.min()) if cells.size else math.nan,
        max_slope=float(measured.max()) if cells.size else math.nan,
        min_slope_off_subshift=float(measured[~on].min()) if (~on).any() else math.inf,
        max_slope_on_subshift=float(measured[on].max()) if on.any() else math.nan,
        cells_checked=int(cells.size),
        offset=offset,
    )
    logger.debug("[DerivativeCheck] done", extra=report.to_dict())
    return report


def fa_rows(fa: FaMap, w: ModifiedPotential) -> list[list[float]]:
    """Rows (t, f_a(t), slope, W) at the left end of every sampled interval."""
    slopes = fa.slopes()
    rows = []
    half = len(fa.knots[0]) - 1
    for b in range(2):
        for k in range(half):
            cell = (b * half + k) * fa.stride
            rows.append(
                [float(fa.knots[b][k]), float(fa.values[b][k]), float(slopes[b * half + k]), float(w.values[cell])]
            )
    return rows
