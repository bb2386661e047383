"""Factor language of the Thue-Morse subshift and distance-to-subshift levels."""

from __future__ import annotations

import hashlib
import logging
import math
from collections.abc import Callable
from functools import cached_property, lru_cache

from tmlab.config import get_settings
from tmlab.errors import LanguageInstabilityError, OutOfRangeError
from tmlab.subshift_core.automaton import SuffixAutomaton
from tmlab.subshift_core.words import fixed_point_prefix, flip

logger = logging.getLogger(__name__)

INFINITE_LEVEL = math.inf

# Words longer than this have a unique cutting into H-blocks.
_MIN_AUTOMATON_LEN = 8


def _desubstitute(word: str, offset: int) -> str | None:
    """Parent of ``word`` read as a factor of H(u) starting at ``offset`` in the first block.

    Returns ``None`` when the 2-blocks of that cutting are not ``01``/``10``.
    """
    head = ""
    if offset == 1:
        head, word = flip(word[0]), word[1:]
    firsts, seconds = word[0::2], word[1::2]
    if firsts[: len(seconds)] != flip(seconds):
        return None
    return head + firsts


class Language:
    """Factors of the Thue-Morse subshift up to ``max_len``.

    Membership of short words goes through a suffix automaton of a long
    prefix of the fixed point; longer words are decided by desubstitution.
    """

    def __init__(self, max_len: int, prefix_factor: int | None = None) -> None:
        if max_len < 1:
            raise OutOfRangeError("max_len must be at least 1")
        factor = prefix_factor or get_settings().LANGUAGE_PREFIX_FACTOR
        self.max_len = max_len
        self._automaton_len = max(max_len, _MIN_AUTOMATON_LEN)
        self.prefix = fixed_point_prefix("0", factor * self._automaton_len)
        self.automaton = SuffixAutomaton.from_string(self.prefix)
        self._counts = self.automaton.counts_by_length(self._automaton_len)
        self._certify(factor)

    def _certify(self, factor: int) -> None:
        doubled = fixed_point_prefix("0", 2 * factor * self._automaton_len)
        counts = SuffixAutomaton.from_string(doubled).counts_by_length(self._automaton_len)
        if (counts != self._counts).any():
            bad = int((counts != self._counts).argmax())
            raise LanguageInstabilityError(
                f"factor count of length {bad} changed when doubling the prefix "
                f"({self._counts[bad]} -> {counts[bad]})"
            )
        logger.debug(
            "[Language] built",
            extra={"max_len": self.max_len, "states": self.automaton.size},
        )

    def count(self, n: int) -> int:
        """Number of factors of length ``n``."""
        if not 1 <= n <= self.max_len:
            raise OutOfRangeError(f"length {n} outside [1, {self.max_len}]")
        return int(self._counts[n])

    def factors(self, n: int) -> frozenset[str]:
        """All factors of length ``n``."""
        if not 0 <= n <= self.max_len:
            raise OutOfRangeError(f"length {n} outside [0, {self.max_len}]")
        return factors_of_length(n)

    def contains(self, word: str) -> bool:
        if len(word) <= self._automaton_len:
            return self.automaton.walk(word) == len(word)
        return self.is_factor(word)

    __contains__ = contains

    def is_factor(self, word: str) -> bool:
        """Membership for words of any length."""
        if len(word) <= self._automaton_len:
            return self.automaton.walk(word) == len(word)
        for offset in (0, 1):
            parent = _desubstitute(word, offset)
            if parent is not None and self.is_factor(parent):
                return True
        return False

    def longest_factor_prefix(self, word: str) -> int:
        """Length of the longest prefix of ``word`` that is a factor."""
        m = self.automaton.walk(word[: self._automaton_len])
        if m < self._automaton_len or m == len(word):
            return m
        lo, hi = m, len(word)
        if self.is_factor(word):
            return hi
        # prefixes of factors are factors, so the predicate is monotone
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.is_factor(word[:mid]):
                lo = mid
            else:
                hi = mid
        return lo

    def level(self, digits: Callable[[int], str], cap: int) -> int | float:
        """Level of a point given by its digit source, ``INFINITE_LEVEL`` at or above ``cap``."""
        n = min(cap, 64)
        while True:
            m = self.longest_factor_prefix(digits(n))
            if m < n:
                return m
            if n >= cap:
                return INFINITE_LEVEL
            n = min(2 * n, cap)

    def admissible_level(self, x, cap: int | None = None) -> int | float:
        """Length of the longest admissible prefix of ``x``; distance to the subshift is 2**-level."""
        cap = get_settings().LEVEL_CAP if cap is None else cap
        return self.level(x.digits, cap)

    @cached_property
    def content_hash(self) -> str:
        """SHA-256 over every factor up to ``max_len``, sorted."""
        digest = hashlib.sha256()
        for n in range(1, self.max_len + 1):
            for word in sorted(self.factors(n)):
                digest.update(word.encode("ascii"))
                digest.update(b"\n")
        return digest.hexdigest()


@lru_cache(maxsize=256)
def factors_of_length(n: int) -> frozenset[str]:
    """All factors of length ``n``, read off a prefix long enough to contain them."""
    factor = get_settings().LANGUAGE_PREFIX_FACTOR
    if n == 0:
        return frozenset({""})
    prefix = fixed_point_prefix("0", max(factor * n, 64))
    return frozenset(prefix[i : i + n] for i in range(len(prefix) - n + 1))


@lru_cache(maxsize=16)
def build_language(max_len: int) -> Language:
    """Build (and cache) the certified language of factors up to ``max_len``."""
    return Language(max_len)


def get_language(min_len: int = 64) -> Language:
    """A cached language covering at least ``min_len``, rounded up to a power of two."""
    size = 64
    while size < min_len:
        size *= 2
    return build_language(size)


def complexity_formula(n: int) -> int:
    """Closed form of the factor complexity, reading n = 2**m + r + 1 with 0 <= r < 2**m."""
    if n < 1:
        raise OutOfRangeError("n must be positive")
    if n <= 2:
        return 2 * n
    m = (n - 1).bit_length() - 1
    r = n - 1 - (1 << m)
    half = 1 << (m - 1)
    if r < half:
        return 6 * half + 4 * r
    return 8 * half + 2 * r
