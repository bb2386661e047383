"""Cylinder masses of the unique invariant measure of the subshift.

Masses are empirical frequencies in a long prefix of the fixed point, with
the change since the half-length prefix as uncertainty; the masses of the
sets (sigma H)^k(Sigma) are known exactly.
"""

from __future__ import annotations

import itertools
import logging
from collections import Counter
from fractions import Fraction

import numpy as np

from tmlab.config import get_settings
from tmlab.errors import OutOfRangeError, UnsupportedPotentialError
from tmlab.potentials.models import (
    CylinderTable,
    CylinderUc,
    DistancePower,
    Potential,
    UnboundedVu,
)
from tmlab.subshift_core.language import factors_of_length
from tmlab.subshift_core.orbit import point_membership
from tmlab.subshift_core.words import (
    THUE_MORSE,
    Point,
    fixed_point_prefix,
    tau,
    tau_bar,
    window_codes,
    word_to_array,
)

logger = logging.getLogger(__name__)

_MAX_CODE_BITS = 62


class MuK:
    """Empirical cylinder masses from a prefix of the fixed point."""

    def __init__(self, depth: int | None = None, prefix_length: int | None = None) -> None:
        settings = get_settings()
        self.depth = settings.MUK_DEPTH if depth is None else depth
        if not 1 <= self.depth <= _MAX_CODE_BITS:
            raise OutOfRangeError(f"depth must lie in [1, {_MAX_CODE_BITS}]")
        self.prefix_length = settings.MUK_PREFIX_LENGTH if prefix_length is None else prefix_length
        self._digits = word_to_array(fixed_point_prefix("0", self.prefix_length)).astype(np.int64)
        self._tables: dict[int, tuple[dict[int, int], dict[int, int], int, int]] = {}

    def _table(self, n: int):
        if n not in self._tables:
            full = window_codes(self._digits, n)
            half = window_codes(self._digits[: self.prefix_length // 2], n)
            self._tables[n] = (
                dict(zip(*(a.tolist() for a in np.unique(full, return_counts=True)))),
                dict(zip(*(a.tolist() for a in np.unique(half, return_counts=True)))),
                len(full),
                len(half),
            )
        return self._tables[n]

    def cylinder(self, word: str) -> tuple[float, float]:
        """(mass, uncertainty) of the cylinder [word]; non-factors are exactly zero."""
        n = len(word)
        if n > self.depth:
            raise OutOfRangeError(f"word length {n} exceeds depth {self.depth}")
        if n == 0:
            return 1.0, 0.0
        if word not in factors_of_length(n):
            return 0.0, 0.0
        full, half, n_full, n_half = self._table(n)
        code = int(word, 2)
        value = full.get(code, 0) / n_full
        return value, abs(value - half.get(code, 0) / n_half)


def mu_k_cylinder(mu: MuK, word: str) -> tuple[float, float]:
    return mu.cylinder(word)


def sigma_h_mass(k: int) -> Fraction:
    """Exact mass of (sigma H)^k(Sigma)."""
    return Fraction(1, 1 << k)


def vu_series(alpha: float, terms: int) -> tuple[float, float]:
    """alpha * sum_{k<terms} (k-1) 2**-(k+1) and a bound on the omitted tail."""
    partial = sum((k - 1) / 2 ** (k + 1) for k in range(terms))
    return alpha * partial, abs(alpha) * (terms + 1) / 2**terms


def integral_mu_k(potential: Potential, mu: MuK, terms: int = 50) -> float:
    """Integral of a potential against the invariant measure of the subshift."""
    match potential:
        case DistancePower():
            return 0.0
        case CylinderUc():
            return potential.c * (mu.cylinder("01")[0] - mu.cylinder("10")[0])
        case UnboundedVu(reading="aligned"):
            value, _ = vu_series(potential.alpha, terms)
            return value if potential.sign == "k_minus_one" else -value
        case UnboundedVu():
            # block depth >= k iff the shifted point starts with H^k(0) or H^k(1);
            # depths beyond log2(mu.depth) are truncated
            kmax = mu.depth.bit_length() - 1
            tails = [mu.cylinder(tau(k))[0] + mu.cylinder(tau_bar(k))[0] for k in range(kmax + 1)]
            tails.append(0.0)
            return sum(potential.at_depth(k) * (tails[k] - tails[k + 1]) for k in range(len(tails) - 1))
        case CylinderTable():
            return sum(value * mu.cylinder(word)[0] for word, value in potential.values.items())
    raise UnsupportedPotentialError(f"cannot integrate {potential!r}")


def shift_class_masses(k: int, mu: MuK | None = None, length: int | None = None) -> list[float]:
    """Masses of sigma^j H^k(K) for j < 2**k, from long-factor frequencies.

    Each factor of length 8 * 2**k belongs to exactly one shifted image;
    the class masses are the summed frequencies of their factors.
    """
    if not 1 <= k <= 4:
        raise OutOfRangeError("k must lie in [1, 4]")
    block = 1 << k
    depth = 8 * block
    length = (mu.prefix_length if mu else get_settings().MUK_PREFIX_LENGTH) if length is None else length
    text = fixed_point_prefix("0", length)
    counts = Counter(text[i : i + depth] for i in range(length - depth + 1))
    total = sum(counts.values())
    masses = []
    for j in range(block):
        parents = -(-(j + depth) // block)
        images = {THUE_MORSE.apply(u, k)[j : j + depth] for u in factors_of_length(parents)}
        masses.append(sum(counts[w] for w in images) / total)
    return masses


def _primitive_orbit_words(period_max: int):
    for p in range(1, period_max + 1):
        for bits in itertools.product("01", repeat=p):
            word = "".join(bits)
            rotations = [word[i:] + word[:i] for i in range(p)]
            if word != min(rotations) or rotations.count(word) > 1:
                continue
            yield word, rotations


def sigma_h_mass_check(period_max: int = 12, k_values=range(2, 6)) -> list[tuple[str, int, float]]:
    """Periodic orbits whose measure gives (sigma H)^k(Sigma) more than 2**-k.

    Orbits of H^m(0...) are skipped: they meet both H(Sigma) and
    sigma H(Sigma) through the constant sequences.
    """
    excluded = {tau(m) for m in range(0, period_max.bit_length())} | {
        tau_bar(m) for m in range(0, period_max.bit_length())
    }
    violations = []
    for word, rotations in _primitive_orbit_words(period_max):
        if excluded & set(rotations):
            continue
        x = Point("", word)
        depths = [point_membership(x.shift(i + 1)) for i in range(len(word))]
        for k in k_values:
            mass = sum(d >= k for d in depths) / len(word)
            if mass > 2.0**-k:
                violations.append((word, k, mass))
    return violations


def perturbation_certificate(potential: DistancePower, epsilon0: float, n0: int) -> bool:
    """True when |perturbation(m)| * m**a <= epsilon0 for every level m >= n0."""
    if potential.perturbation is None:
        return True
    m = max(n0, 1)
    pert = potential.perturbation
    # |c| m**(a - e) is decreasing because e > a
    return abs(pert.coefficient) * m ** (potential.a - pert.exponent) <= epsilon0
