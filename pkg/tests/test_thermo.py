"""Tests for the induced system on [J].

Tests cover:
- Return system construction and J validation
- Loop-word coefficients: dynamic program against enumeration
- Critical exponents, partition values and pressure roots
- Pressure curves and the phase transition for slowly decaying potentials
- Excursion series, majorant and the gamma certificate
"""

import math

import numpy as np
import pytest

from tmlab.errors import (
    BruteForceLimitError,
    CapExceededError,
    FactorWordError,
    OutOfRangeError,
    UnsupportedPotentialError,
)
from tmlab.potentials import CylinderUc, DistancePower, PowerPerturbation, UnboundedVu
from tmlab.thermo import (
    KmpMatcher,
    PressureCurve,
    PressurePoint,
    brute_force_coefficients,
    build_return_system,
    closed_b_bound,
    excursion_bounds,
    excursion_majorant,
    gamma_certificate,
    locate_transition,
    log_partition,
    log_return_coefficients,
    partition_value,
    pressure_curve,
    pressure_point,
    return_coefficients,
    root_from_coefficients,
    tail_estimate,
    zc_estimate,
    zc_lower_bound_vu,
)

LOG_TRIBONACCI = math.log(1.8392867552141612)

BLOCK_VU = UnboundedVu(alpha=-1.0, reading="block")


@pytest.fixture(scope="module")
def rs64():
    return build_return_system("000", 64)


# ============================================================================
# Return System Tests
# ============================================================================

class TestReturnSystem:
    """Tests for building the return system."""

    def test_default_cylinder(self, rs64):
        """J = 000 is accepted with level constant 2."""
        assert rs64.j_word == "000"
        assert rs64.delta_j == 2

    def test_flipped_cylinder(self):
        """J = 111 is accepted by symmetry."""
        assert build_return_system("111", 16).delta_j == 2

    def test_factor_rejected(self):
        """A factor of the subshift cannot be J."""
        with pytest.raises(FactorWordError):
            build_return_system("0110", 16)

    def test_bounds(self):
        """Truncation orders and words are validated."""
        with pytest.raises(CapExceededError):
            build_return_system("000", 10_000)
        with pytest.raises(OutOfRangeError):
            build_return_system("0a0", 16)

    def test_loop_words(self, rs64):
        """First returns exclude earlier hits of J."""
        assert rs64.is_loop_word("0")
        assert not rs64.is_loop_word("00")
        assert rs64.is_loop_word("0001")
        assert not rs64.is_loop_word("00010")
        assert not rs64.is_loop_word("1000")

    def test_kmp_matcher(self):
        """Full matches restart through the failure link."""
        kmp = KmpMatcher("000")
        assert kmp.step(3, "0") == 3
        assert kmp.step(3, "1") == 0
        assert kmp.step(1, "0") == 2

    def test_unsupported_potentials(self, rs64):
        """Only locally constant readings are accepted."""
        with pytest.raises(UnsupportedPotentialError):
            log_return_coefficients(rs64, UnboundedVu(alpha=-1.0), 1.0)
        with pytest.raises(UnsupportedPotentialError):
            log_return_coefficients(rs64, CylinderUc(c=1.0), 1.0)


# ============================================================================
# Coefficient Tests
# ============================================================================

class TestCoefficients:
    """Tests for the loop-word coefficients a_n."""

    def test_counts_at_zero_gamma(self, rs64):
        """At gamma = 0 a_n counts first returns to 000."""
        values = return_coefficients(rs64, DistancePower(a=1.0), 0.0)
        np.testing.assert_allclose(values[:8], [1, 0, 0, 1, 1, 2, 4, 7], rtol=1e-12)

    def test_brute_force_small(self, rs64):
        """Enumeration agrees on the first counts."""
        values = brute_force_coefficients(rs64, DistancePower(a=1.0), 0.0, 8)
        assert values.tolist() == [1, 0, 0, 1, 1, 2, 4, 7]

    @pytest.mark.parametrize("j_word", ["000", "1111", "01010"])
    @pytest.mark.parametrize(
        "potential, gamma",
        [
            (DistancePower(a=0.5), 1.3),
            (DistancePower(a=2.0, perturbation=PowerPerturbation(coefficient=0.3, exponent=3.0)), 0.7),
            (UnboundedVu(alpha=-0.5, reading="block"), 0.7),
            (UnboundedVu(alpha=1.5, sign="one_minus_k", reading="block"), 0.4),
        ],
    )
    def test_dynamic_program_matches_enumeration(self, j_word, potential, gamma):
        """The compiled chain reproduces enumeration to 1e-12."""
        rs = build_return_system(j_word, 12)
        dp = return_coefficients(rs, potential, gamma)
        brute = brute_force_coefficients(rs, potential, gamma, 12)
        np.testing.assert_allclose(dp, brute, rtol=1e-12, atol=0.0)

    @pytest.mark.parametrize(
        "potential, gamma",
        [
            *[(DistancePower(a=a), g) for a in (0.5, 1.0, 2.0) for g in (0.0, 1.0, 5.0)],
            (BLOCK_VU, 0.5),
            (BLOCK_VU, 2.0),
        ],
    )
    def test_dynamic_program_matches_enumeration_to_order_18(self, potential, gamma):
        """On [000] the compiled chain reproduces enumeration for every n <= 18."""
        rs = build_return_system("000", 18)
        dp = return_coefficients(rs, potential, gamma)
        brute = brute_force_coefficients(rs, potential, gamma, 18)

        assert len(brute) == 18
        np.testing.assert_allclose(dp[:18], brute, rtol=1e-12, atol=0.0)

    def test_brute_force_limit(self, rs64):
        """Enumeration refuses orders above the limit."""
        with pytest.raises(BruteForceLimitError):
            brute_force_coefficients(rs64, DistancePower(a=1.0), 0.0, 21)

    def test_coefficients_decrease_in_gamma(self, rs64):
        """Nonnegative potentials make every a_n nonincreasing in gamma."""
        low = log_return_coefficients(rs64, DistancePower(a=0.5), 1.0)
        high = log_return_coefficients(rs64, DistancePower(a=0.5), 2.0)
        finite = np.isfinite(low)
        assert np.all(high[finite] <= low[finite])

    def test_slow_decay_sum_keeps_growing(self, rs64):
        """For a > 1 a_n grows polynomially along near-subshift loops."""
        log_a = log_return_coefficients(rs64, DistancePower(a=2.0), 20.0)
        assert log_a[63] > log_a[31]


# ============================================================================
# Critical Exponent and Root Tests
# ============================================================================

class TestRoots:
    """Tests for z_c estimates, partition values and roots."""

    def test_tail_estimate_of_geometric_series(self):
        """A pure exponential has its rate as slope and no window delta."""
        n = np.arange(1, 65)
        estimate = tail_estimate(0.3 * n + 1.0)
        assert estimate.slope == pytest.approx(0.3, abs=1e-12)
        assert estimate.delta == pytest.approx(0.0, abs=1e-10)

    def test_tail_estimate_floor_and_degenerate(self):
        """Negative slopes floor at zero on request; empty tails are -inf."""
        n = np.arange(1, 65)
        assert tail_estimate(-0.2 * n, floor_at_zero=True).value == 0.0
        assert tail_estimate(np.full(64, -np.inf)).value == -math.inf

    def test_log_partition_tail_closure(self):
        """The geometric tail completes sum e^-n exactly."""
        n = np.arange(1, 33)
        assert log_partition(-1.0 * n, 0.0, -1.0) == pytest.approx(-math.log(math.e - 1.0), abs=1e-12)
        assert log_partition(-1.0 * n, -1.0, -1.0) == math.inf

    def test_root_of_geometric_series(self):
        """sum 1.5^n e^-nz = 1 at z = log 3."""
        n = np.arange(1, 65)
        result = root_from_coefficients(n * math.log(1.5))
        assert result.z_star == pytest.approx(math.log(3.0), abs=1e-9)

    def test_zero_gamma_root(self, rs64):
        """At gamma = 0 the root is the entropy log 2."""
        point = pressure_point(rs64, DistancePower(a=0.5), 0.0)
        assert point.z_star == pytest.approx(math.log(2.0), abs=1e-6)
        assert point.stability_delta < 1e-4

    def test_zero_gamma_critical_exponent(self, rs64):
        """At gamma = 0 a_n grows like the 000-avoiding words."""
        estimate = zc_estimate(rs64, DistancePower(a=0.5), 0.0)
        assert estimate.value == pytest.approx(LOG_TRIBONACCI, abs=1e-3)

    def test_partition_decreasing_in_z(self, rs64):
        """Positive coefficients make Z strictly decreasing."""
        values = [partition_value(rs64, DistancePower(a=0.5), 0.5, z) for z in (0.7, 0.8, 1.0)]
        assert values[0] > values[1] > values[2]

    @pytest.mark.parametrize("gamma", [0.5, 1.0])
    def test_critical_exponent_below_root(self, rs64, gamma):
        """z_c <= z* within the estimation tolerance."""
        point = pressure_point(rs64, DistancePower(a=0.5), gamma)
        assert point.z_star is not None
        assert point.z_c <= point.z_star + 0.02

    def test_distance_critical_exponent_nonnegative(self, rs64):
        """z_c >= 0 for distance potentials."""
        assert zc_estimate(rs64, DistancePower(a=0.5), 5.0).value >= -0.01

    def test_unbounded_critical_exponent_bound(self, rs64):
        """z_c of the unbounded potential respects its closed-form lower bound."""
        estimate = zc_estimate(rs64, BLOCK_VU, 1.0)
        assert estimate.value >= zc_lower_bound_vu(-1.0, 1.0) - 0.02

    def test_pressure_vanishes_for_large_gamma(self, rs64):
        """a = 1/2 at large gamma has no root and zero pressure."""
        point = pressure_point(rs64, DistancePower(a=0.5), 40.0)
        assert point.z_star is None
        assert point.pressure == 0.0


# ============================================================================
# Pressure Curve Tests
# ============================================================================

class TestPressureCurve:
    """Tests for curves over a gamma grid."""

    def test_transition_for_slow_potential(self, rs64):
        """a = 1/2 has a transition bracket inside the grid."""
        grid = [0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 40.0]
        curve = pressure_curve(rs64, DistancePower(a=0.5), grid, threads=2)
        assert curve.pressure[0] == pytest.approx(math.log(2.0), abs=1e-6)
        assert curve.pressure[-1] == 0.0
        assert all(p >= 0.0 for p in curve.pressure)
        assert curve.transition is not None
        assert curve.transition.lo < curve.transition.hi
        assert curve.transition.hi - curve.transition.lo <= 1e-3 * curve.transition.hi + 1e-12
        assert pressure_point(rs64, DistancePower(a=0.5), curve.transition.hi).pressure == 0.0
        assert pressure_point(rs64, DistancePower(a=0.5), curve.transition.lo).pressure > 0.0

    def test_fast_potential_stays_positive(self, rs64):
        """a = 2 keeps a positive, decreasing pressure."""
        curve = pressure_curve(rs64, DistancePower(a=2.0), [0.0, 1.0, 2.0, 4.0], threads=1)
        assert all(p > 0.0 for p in curve.pressure)
        assert curve.pressure == sorted(curve.pressure, reverse=True)
        assert curve.monotonicity_violations() == []
        assert curve.transition is None

    def test_unbounded_potential_stays_positive(self, rs64):
        """alpha < 0 never reaches zero pressure."""
        curve = pressure_curve(rs64, BLOCK_VU, [0.0, 1.0, 2.0, 4.0])
        assert all(z is not None and z > 0.0 for z in curve.z_star)
        assert locate_transition(rs64, BLOCK_VU, gamma_start=1.0, max_doublings=2) is None

    def test_perturbation_curves(self, rs64):
        """epsilon0 adds curves at rescaled gamma."""
        curve = pressure_curve(rs64, DistancePower(a=2.0), [0.0, 1.0], epsilon0=0.1)
        assert len(curve.lower) == len(curve.upper) == 2
        assert curve.lower[0] == pytest.approx(math.log(2.0), abs=1e-6)
        assert len(curve.rows()) == 2

    def test_positivity_violations(self):
        """Zero pressure may only be followed by zero pressure."""
        def curve(pressures):
            points = [
                PressurePoint(gamma=float(g), z_star=None, z_c=0.0, zc_delta=0.0, pressure=p, stability_delta=0.0, n_max=8)
                for g, p in enumerate(pressures)
            ]
            return PressureCurve(gamma_grid=[float(g) for g in range(len(pressures))], points=points)

        assert curve([0.7, 0.2, 0.0, 0.0]).positivity_violations() == []
        assert len(curve([0.7, 0.0, 0.1, 0.0]).positivity_violations()) == 1

    def test_grid_must_ascend(self, rs64):
        """Unsorted grids are rejected."""
        with pytest.raises(OutOfRangeError):
            pressure_curve(rs64, DistancePower(a=2.0), [1.0, 0.5])


# ============================================================================
# Excursion Bound Tests
# ============================================================================

class TestExcursions:
    """Tests for the excursion series and certificates."""

    def test_large_gamma_small(self):
        """B(0) + C(0) vanishes for large gamma."""
        assert excursion_bounds(0.5, 200.0).total < 1e-3

    @pytest.mark.parametrize("a, gamma", [(0.5, 2.0), (0.5, 5.0), (0.3, 3.0), (0.7, 10.0)])
    def test_closed_bound_dominates(self, a, gamma):
        """B(0) lies below its closed-form bound."""
        bounds = excursion_bounds(a, gamma)
        assert bounds.converged
        assert bounds.b0 <= bounds.closed_bound
        assert bounds.closed_bound == closed_b_bound(a, gamma)

    def test_monotone_in_gamma(self):
        """B(0) strictly decreases in gamma."""
        values = [excursion_bounds(0.5, g).b0 for g in (1.0, 2.0, 4.0, 8.0)]
        assert all(b < a for a, b in zip(values, values[1:]))

    def test_invalid_exponent(self):
        """a outside (0, 1) is rejected."""
        with pytest.raises(OutOfRangeError):
            excursion_bounds(1.5, 1.0)

    def test_majorant_guards(self):
        """Small gamma leaves the free-path series divergent."""
        assert excursion_majorant(0.5, 0.5) == math.inf

    def test_gamma_certificate(self):
        """A finite gamma_0 exists for a = 1/2 and is the first grid point below one."""
        cert = gamma_certificate(0.5)
        assert 2.0 < cert.gamma0 < 4.0
        assert cert.majorant < 1.0
        assert cert.previous_majorant is None or cert.previous_majorant >= 1.0
        assert excursion_majorant(0.5, cert.gamma0 / 2) >= 1.0

    def test_unbounded_lower_bound(self):
        """2**(1 - e**(2 - gamma alpha)) and its underflow."""
        assert zc_lower_bound_vu(-1.0, 1.0) == pytest.approx(2.0 ** (1.0 - math.exp(3.0)))
        assert zc_lower_bound_vu(-1.0, 800.0) == 0.0
