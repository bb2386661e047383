"""Tests for the Thue-Morse combinatorics.

Tests cover:
- Words, points and substitutions
- Factor language, complexity and special words
- Levels, accidents and orbit points
- Shift decomposition, overlaps and the sigma-H convergence
- The sliding block code and parity-lexicographic order
"""

import numpy as np
import pytest

from tmlab.errors import (
    CapExceededError,
    InsufficientPrefixError,
    OutOfRangeError,
    PrefixComparableError,
    UndefinedPointError,
)
from tmlab.subshift_core import (
    INFINITE_LEVEL,
    THUE_MORSE,
    FiniteWord,
    Language,
    OrbitPoint,
    Ordering,
    Point,
    accident_violations,
    accidents,
    build_language,
    complexity_formula,
    cube_free_check,
    disjoint_decomposition_check,
    expected_bispecials,
    factors_of_length,
    feigenbaum_violations,
    fixed_point_prefix,
    get_language,
    orbit_level,
    orbit_levels,
    orbit_membership,
    order_lemma_violations,
    overlap_bound,
    parity_lex_compare,
    point_membership,
    point_with_level,
    rauzy_defect,
    sigma_h_convergence,
    sliding_block_pi,
    special_words,
    tau,
)
from tmlab.subshift_core.words import thue_morse_digits


@pytest.fixture(scope="module")
def lang() -> Language:
    return build_language(64)


# ============================================================================
# Words and Substitution Tests
# ============================================================================

class TestWords:
    """Tests for FiniteWord, Point and Substitution."""

    def test_substitution_examples(self):
        """H maps 0 to 01 and iterates by concatenation."""
        assert THUE_MORSE.apply("0", 1) == "01"
        assert THUE_MORSE.apply("0", 0) == "0"
        assert THUE_MORSE.apply("0", 4) == "0110100110010110"

    def test_substitution_length_identity(self):
        """|H^n(w)| = 2^n |w|."""
        assert len(THUE_MORSE.apply("01101", 5)) == 32 * 5
        assert THUE_MORSE.image_length("01101", 5) == 160

    def test_substitution_cap(self):
        """Images longer than the cap are refused before being built."""
        with pytest.raises(CapExceededError):
            THUE_MORSE.apply("0", 10, max_length=100)

    def test_fixed_point_prefix(self):
        """Prefixes of the two fixed points come from iterating H."""
        assert fixed_point_prefix("0", 2) == "01"
        assert fixed_point_prefix("1", 8) == "10010110"
        rho = fixed_point_prefix("0", 16)
        assert rho == "0110100110010110"
        assert THUE_MORSE.apply(rho).startswith(rho)

    def test_digit_formula(self):
        """Digit i of the fixed point is the parity of the binary digit sum of i."""
        digits = thue_morse_digits(np.arange(256))
        assert "".join(map(str, digits)) == fixed_point_prefix("0", 256)

    def test_finite_word_validation(self):
        """Only binary strings are words."""
        assert FiniteWord("0110").flip() == "1001"
        assert FiniteWord("").length == 0
        with pytest.raises(ValueError):
            FiniteWord("012")

    def test_point_shift_past_prefix(self):
        """Shifting beyond the prefix rotates the tail."""
        x = Point("01", "110")
        assert x.shift(3).digits(20) == x.digits(23)[3:]
        assert x.shift(1).digits(10) == x.digits(11)[1:]

    def test_point_requires_tail(self):
        """An empty tail is rejected."""
        with pytest.raises(ValueError):
            Point("01", "")


# ============================================================================
# Language Tests
# ============================================================================

class TestLanguage:
    """Tests for the factor language."""

    def test_small_language(self):
        """Length-3 factors exclude cubes of a symbol."""
        small = Language(3)
        assert small.count(1) == 2
        assert "000" not in small
        assert "010" in small
        assert small.count(3) == len(factors_of_length(3)) == 6

    def test_count_out_of_range(self):
        """Counts beyond max_len are refused."""
        with pytest.raises(OutOfRangeError):
            Language(3).count(4)

    def test_complexity_matches_formula(self, lang):
        """Factor counts agree with the closed form up to length 64."""
        for n in range(1, 65):
            assert lang.count(n) == complexity_formula(n) == len(factors_of_length(n))

    def test_complexity_first_values(self):
        """Known initial values of the complexity."""
        assert [complexity_formula(n) for n in range(1, 10)] == [2, 4, 6, 10, 12, 16, 20, 22, 24]

    def test_long_word_membership(self, lang):
        """Desubstitution decides membership of words longer than the automaton."""
        rho = fixed_point_prefix("0", 4096)
        assert lang.is_factor(rho[1000:1300])
        assert not lang.is_factor(rho[1000:1300] + "000")
        assert lang.longest_factor_prefix(rho[:500] + "111") in (500, 501, 502)

    def test_special_words_examples(self, lang):
        """Bispecial words of small lengths."""
        assert {"0", "1"} <= special_words(lang, 1).bispecial
        assert special_words(lang, 3).bispecial == {"010", "101"}
        assert special_words(lang, 4).bispecial == {"0110", "1001"}

    def test_bispecials_are_blocks(self, lang):
        """Every bispecial factor is a block H^k(0), H^k(1) or their triple products."""
        for n in range(1, 64):
            assert special_words(lang, n).bispecial == expected_bispecials(n)

    def test_rauzy_identity(self, lang):
        """p(n+1) - p(n) counts right-special factors."""
        assert all(rauzy_defect(lang, n) == 0 for n in range(1, 63))

    def test_cube_free(self, lang):
        """w w w[0] is never a factor."""
        assert cube_free_check(lang, 40) == []

    def test_content_hash_stable(self):
        """Two builds of the same language hash identically."""
        assert Language(16).content_hash == Language(16).content_hash


# ============================================================================
# Level and Accident Tests
# ============================================================================

class TestLevels:
    """Tests for distance-to-subshift levels."""

    def test_constant_point(self, lang):
        """00 is a factor, 000 is not."""
        assert lang.admissible_level(Point("", "0"), 30) == 2

    def test_fixed_point_prefix_saturates(self, lang):
        """A long prefix of a fixed point reaches the cap."""
        x = Point(fixed_point_prefix("0", 40), "1")
        assert lang.admissible_level(x, 30) == INFINITE_LEVEL

    def test_alternating_point(self, lang):
        """0101 is a factor, the overlap 01010 is not."""
        assert lang.admissible_level(Point("", "01"), 30) == 4

    def test_point_with_level(self, lang):
        """Sampled points have the requested level."""
        rng = np.random.default_rng(0)
        for m in range(3, 20):
            assert lang.admissible_level(point_with_level(m, rng, lang), 64) == m


class TestAccidents:
    """Tests for accident detection and its shape."""

    def test_no_accident_on_subshift(self, lang):
        """Points within the cap of the subshift have no accidents."""
        x = Point(fixed_point_prefix("0", 100), "0")
        assert accidents(x, 20, lang, cap=64) == []

    def test_constant_point_empty(self, lang):
        """The constant point has level 2, below the scan threshold."""
        assert accidents(Point("", "0"), 10, lang) == []

    def test_random_accident_shapes(self, lang):
        """Every accident on random points of level 8..16 is well formed."""
        rng = np.random.default_rng(1)
        total = 0
        for _ in range(200):
            m = int(rng.integers(8, 17))
            x = point_with_level(m, rng, lang)
            records = accidents(x, 3 * m, lang)
            total += len(records)
            for record in records:
                assert record.d_after > record.d_before - record.b
                assert accident_violations(x, record, lang) == []
        assert total >= 200

    def test_scan_stops_below_min_level(self, lang):
        """References below ACCIDENT_MIN_LEVEL end the scan; an explicit min_level overrides it."""
        x = Point("0110110", "1")

        assert accidents(x, 4, lang) == []
        assert accidents(x, 4, lang, min_level=3) != []

    def test_reference_window_may_be_left_special(self, lang):
        """A well-formed first accident can follow a left-special reference window."""
        x = Point("0110110", "1")
        record = accidents(x, 4, lang, min_level=3)[0]

        assert (record.b, record.d_before, record.d_after) == (2, 5, 6)
        assert lang.contains("001101") and lang.contains("101101")
        assert accident_violations(x, record, lang) == []


# ============================================================================
# Orbit Point Tests
# ============================================================================

class TestOrbitPoint:
    """Tests for sigma^s H^n x without materialisation."""

    def test_digits_match_materialised(self):
        """Digit formula agrees with substituting and shifting."""
        x = Point("01", "110")
        op = OrbitPoint(x, 3, 5)
        assert op.digits(40) == op.to_point().digits(40)

    def test_doubling_levels(self, lang):
        """Levels of sigma^j H^n x are 2^n m - j when level(x) = m >= 3."""
        rng = np.random.default_rng(2)
        for m in (3, 5, 9):
            x = point_with_level(m, rng, lang)
            levels = orbit_levels(x, 5, lang)
            assert levels.tolist() == [32 * m - j for j in range(32)]

    def test_recursive_level_matches_direct(self, lang):
        """The level recursion agrees with scanning the materialised point."""
        x = Point("", "0")
        for j in range(16):
            op = OrbitPoint(x, 4, j)
            assert orbit_level(op, lang, 64) == lang.admissible_level(op.to_point(), 1024)

    def test_membership_matches_desubstitution(self):
        """Orbit membership from (n, s) equals repeated desubstitution."""
        x = Point("", "0")
        for s in range(64):
            op = OrbitPoint(x, 6, s)
            assert orbit_membership(op) == point_membership(op.to_point())

    def test_membership_values(self):
        """Depth is the 2-adic valuation of the shift inside H^6(0...)."""
        x = Point("", tau(6))
        depths = [point_membership(x.shift(s)) for s in (1, 2, 3, 4, 8, 16)]
        assert depths == [0, 1, 0, 2, 3, 4]

    def test_membership_cap(self):
        """Saturating the cap marks the point as undefined."""
        with pytest.raises(UndefinedPointError):
            point_membership(Point("", tau(6)), kmax=3)


# ============================================================================
# Decomposition and Overlap Tests
# ============================================================================

class TestDecomposition:
    """Tests for the shifted H^k decomposition and block overlaps."""

    @pytest.mark.parametrize("k", [1, 2, 3, 4, 5, 6])
    def test_subshift_decomposes(self, k):
        """Each long factor lies in exactly one shifted H^k image."""
        assert disjoint_decomposition_check(k)

    def test_full_shift_fails(self):
        """The full shift does not decompose."""
        assert not disjoint_decomposition_check(1, 8, full_shift=True)

    @pytest.mark.parametrize("k", range(2, 9))
    def test_overlap_bound(self, k):
        """Occurrences of H^k(0) and H^k(1) overlap by at most 2^(k-1)."""
        assert overlap_bound(k) <= 1 << (k - 1)

    def test_overlap_attained(self):
        """H^(k-1)(010) realises the maximal overlap."""
        assert [overlap_bound(k) for k in (2, 3, 4)] == [2, 4, 8]

    def test_sigma_h_convergence(self):
        """(sigma H)^n x agrees with a_n rho_b on at least 2^n + 1 digits."""
        for x in (Point("01", "1"), Point("10", "0110"), Point("11", "0")):
            agreements = sigma_h_convergence(x, 6)
            for n, agreement in enumerate(agreements, start=1):
                assert agreement >= (1 << n) + 1


# ============================================================================
# Coding Tests
# ============================================================================

class TestCoding:
    """Tests for the sliding block code and parity-lexicographic order."""

    def test_pi_of_fixed_point(self):
        """pi(rho_0) starts with the fixed point of H_feig."""
        assert sliding_block_pi(fixed_point_prefix("0", 17)) == "1011101010111011"

    def test_pi_constant(self):
        """pi of a constant point is all zeros."""
        assert sliding_block_pi(Point("", "0")).digits(8) == "00000000"

    def test_pi_two_to_one(self):
        """pi(x) = pi(flip x)."""
        rng = np.random.default_rng(3)
        for _ in range(64):
            prefix = "".join(rng.choice(["0", "1"], size=int(rng.integers(0, 10))))
            tail = "".join(rng.choice(["0", "1"], size=int(rng.integers(1, 6))))
            x = Point(prefix, tail)
            assert sliding_block_pi(x).digits(30) == sliding_block_pi(x.flip()).digits(30)

    def test_pi_point_digits(self):
        """The point image agrees with the word image."""
        x = Point("0111", "001")
        assert sliding_block_pi(x).digits(20) == sliding_block_pi(x.digits(21))

    def test_pi_word_too_short(self):
        """A one-digit word has no image."""
        with pytest.raises(InsufficientPrefixError):
            sliding_block_pi("0")

    def test_feigenbaum_semiconjugacy(self):
        """pi H = H_feig pi on random words."""
        rng = np.random.default_rng(4)
        words = ["".join(rng.choice(["0", "1"], size=int(rng.integers(2, 40)))) for _ in range(1000)]
        assert feigenbaum_violations(words) == []

    def test_parity_lex_examples(self):
        """Order flips after an odd number of 1s."""
        assert parity_lex_compare("00", "01") == Ordering.LESS
        assert parity_lex_compare("110", "111") == Ordering.LESS
        assert parity_lex_compare("10", "11") == Ordering.GREATER
        assert parity_lex_compare("101", "101") == Ordering.EQUAL

    def test_parity_lex_prefix_comparable(self):
        """Strict prefixes cannot be compared."""
        with pytest.raises(PrefixComparableError):
            parity_lex_compare("01", "011")

    @pytest.mark.parametrize("symbol", ["0", "1"])
    def test_order_lemma(self, symbol):
        """pi preserves order on [0] and reverses it on [1]."""
        assert order_lemma_violations(np.random.default_rng(5), symbol, pairs=10_000) == 0
