"""Exact combinatorics of the Thue-Morse substitution and its subshift."""

from tmlab.subshift_core.accidents import (
    AccidentRecord,
    accident_violations,
    accidents,
    point_with_level,
)
from tmlab.subshift_core.coding import (
    Ordering,
    feigenbaum_violations,
    order_lemma_violations,
    parity_lex_compare,
    sliding_block_pi,
)
from tmlab.subshift_core.language import (
    INFINITE_LEVEL,
    Language,
    build_language,
    complexity_formula,
    factors_of_length,
    get_language,
)
from tmlab.subshift_core.orbit import (
    OrbitPoint,
    orbit_level,
    orbit_levels,
    orbit_membership,
    point_membership,
)
from tmlab.subshift_core.structure import (
    SpecialWords,
    cube_free_check,
    disjoint_decomposition_check,
    expected_bispecials,
    overlap_bound,
    rauzy_defect,
    sigma_h_convergence,
    special_words,
)
from tmlab.subshift_core.words import (
    FEIGENBAUM,
    THUE_MORSE,
    FiniteWord,
    Point,
    Substitution,
    fixed_point_prefix,
    flip,
    tau,
    tau_bar,
)

__all__ = [
    "AccidentRecord",
    "FEIGENBAUM",
    "FiniteWord",
    "INFINITE_LEVEL",
    "Language",
    "OrbitPoint",
    "Ordering",
    "Point",
    "SpecialWords",
    "Substitution",
    "THUE_MORSE",
    "accident_violations",
    "accidents",
    "build_language",
    "complexity_formula",
    "cube_free_check",
    "disjoint_decomposition_check",
    "expected_bispecials",
    "factors_of_length",
    "feigenbaum_violations",
    "fixed_point_prefix",
    "flip",
    "get_language",
    "orbit_level",
    "orbit_levels",
    "orbit_membership",
    "order_lemma_violations",
    "overlap_bound",
    "parity_lex_compare",
    "point_membership",
    "point_with_level",
    "rauzy_defect",
    "sigma_h_convergence",
    "sliding_block_pi",
    "special_words",
    "tau",
    "tau_bar",
]
