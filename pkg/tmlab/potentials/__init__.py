"""Potentials on sequence space, their evaluation and integration."""

from tmlab.potentials.evaluate import (
    birkhoff_sum,
    distance_value,
    evaluate,
    uc_value,
    vu_aligned_depth,
    vu_depth,
)
from tmlab.potentials.measure import (
    MuK,
    integral_mu_k,
    mu_k_cylinder,
    perturbation_certificate,
    shift_class_masses,
    sigma_h_mass,
    sigma_h_mass_check,
    vu_series,
)
from tmlab.potentials.models import (
    V0,
    ZERO,
    CylinderTable,
    CylinderUc,
    DistancePower,
    Potential,
    PotentialAdapter,
    PowerPerturbation,
    UnboundedVu,
    dump_potential,
    parse_potential,
)

__all__ = [
    "CylinderTable",
    "CylinderUc",
    "DistancePower",
    "MuK",
    "Potential",
    "PotentialAdapter",
    "PowerPerturbation",
    "UnboundedVu",
    "V0",
    "ZERO",
    "birkhoff_sum",
    "distance_value",
    "dump_potential",
    "evaluate",
    "integral_mu_k",
    "mu_k_cylinder",
    "parse_potential",
    "perturbation_certificate",
    "shift_class_masses",
    "sigma_h_mass",
    "sigma_h_mass_check",
    "uc_value",
    "vu_aligned_depth",
    "vu_depth",
    "vu_series",
]
