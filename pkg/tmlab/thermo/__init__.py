"""Induced transfer operator on a cylinder off the subshift: pressure, z_c and transitions."""

from tmlab.thermo.coefficients import (
    brute_force_coefficients,
    charge_table,
    log_return_coefficients,
    loop_word_charge,
    return_coefficients,
)
from tmlab.thermo.curve import CURVE_HEADER, PressureCurve, pressure_curve
from tmlab.thermo.excursions import (
    ExcursionBounds,
    GammaCertificate,
    closed_b_bound,
    excursion_bounds,
    excursion_majorant,
    free_path_epsilon,
    gamma_certificate,
    zc_lower_bound_vu,
)
from tmlab.thermo.pressure import (
    PressurePoint,
    RootResult,
    TailEstimate,
    TransitionResult,
    locate_transition,
    log_partition,
    partition_value,
    pressure_point,
    pressure_root,
    refine_transition,
    root_from_coefficients,
    tail_estimate,
    zc_estimate,
)
from tmlab.thermo.return_system import (
    BlockTracker,
    Chain,
    KmpMatcher,
    LevelTracker,
    ReturnSystem,
    build_return_system,
    compile_chain,
)

__all__ = [
    "CURVE_HEADER",
    "BlockTracker",
    "Chain",
    "ExcursionBounds",
    "GammaCertificate",
    "KmpMatcher",
    "LevelTracker",
    "PressureCurve",
    "PressurePoint",
    "ReturnSystem",
    "RootResult",
    "TailEstimate",
    "TransitionResult",
    "brute_force_coefficients",
    "build_return_system",
    "charge_table",
    "closed_b_bound",
    "compile_chain",
    "excursion_bounds",
    "excursion_majorant",
    "free_path_epsilon",
    "gamma_certificate",
    "locate_transition",
    "log_partition",
    "log_return_coefficients",
    "loop_word_charge",
    "partition_value",
    "pressure_curve",
    "pressure_point",
    "pressure_root",
    "refine_transition",
    "return_coefficients",
    "root_from_coefficients",
    "tail_estimate",
    "zc_estimate",
    "zc_lower_bound_vu",
]
