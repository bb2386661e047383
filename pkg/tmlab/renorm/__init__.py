"""Renormalization operator on potentials and its fixed points."""

from tmlab.renorm.operator import (
    RenormEvaluation,
    ResidualReport,
    ScalingRow,
    cesaro_mean,
    commutation_violations,
    fixed_point_residual,
    power_scaling_check,
    renorm_apply,
    renorm_apply_recursive,
    renorm_terms,
    weak_stable_limit,
)
from tmlab.renorm.report import CESARO_HEADER, cesaro_rows

__all__ = [
    "CESARO_HEADER",
    "RenormEvaluation",
    "ResidualReport",
    "ScalingRow",
    "cesaro_mean",
    "cesaro_rows",
    "commutation_violations",
    "fixed_point_residual",
    "power_scaling_check",
    "renorm_apply",
    "renorm_apply_recursive",
    "renorm_terms",
    "weak_stable_limit",
]
