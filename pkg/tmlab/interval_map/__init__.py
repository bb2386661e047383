"""Interval maps semi-conjugate to the full shift, built from a conformal measure."""

from tmlab.interval_map.conformal import (
    ConformalMeasure,
    cell_slopes,
    conformal_measure,
    depth_drift,
    pressure_profile,
)
from tmlab.interval_map.fa import (
    FA_HEADER,
    DerivativeReport,
    FaMap,
    build_fa,
    derivative_check,
    fa_rows,
    semi_conjugacy_error,
    slope_offset,
    theta,
)
from tmlab.interval_map.potential import (
    ModifiedPotential,
    boundary_depths,
    build_w,
    cell_levels,
)

__all__ = [
    "FA_HEADER",
    "ConformalMeasure",
    "DerivativeReport",
    "FaMap",
    "ModifiedPotential",
    "boundary_depths",
    "build_fa",
    "build_w",
    "cell_levels",
    "cell_slopes",
    "conformal_measure",
    "depth_drift",
    "derivative_check",
    "fa_rows",
    "pressure_profile",
    "semi_conjugacy_error",
    "slope_offset",
    "theta",
]
