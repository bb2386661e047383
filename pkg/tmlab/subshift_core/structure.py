"""Structural properties of the Thue-Morse language: special words, cubes,
shift decomposition of H^k-images and overlaps of the blocks H^k(0), H^k(1)."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass

import numpy as np

from tmlab.errors import OutOfRangeError
from tmlab.subshift_core.language import Language, factors_of_length
from tmlab.subshift_core.words import THUE_MORSE, Point, fixed_point_prefix, flip, tau, tau_bar


@dataclass(frozen=True)
class SpecialWords:
    """Left-, right- and bispecial factors of one length."""

    left: frozenset[str]
    right: frozenset[str]

    @property
    def bispecial(self) -> frozenset[str]:
        return self.left & self.right


def special_words(lang: Language, n: int) -> SpecialWords:
    """Special factors of length ``n``; needs factors of length ``n + 1``."""
    if n < 0 or n + 1 > lang.max_len:
        raise OutOfRangeError(f"need 0 <= n and n + 1 <= {lang.max_len}, got n={n}")
    extended = lang.factors(n + 1)
    as_suffix = Counter(u[1:] for u in extended)
    as_prefix = Counter(u[:-1] for u in extended)
    return SpecialWords(
        left=frozenset(w for w, c in as_suffix.items() if c == 2),
        right=frozenset(w for w, c in as_prefix.items() if c == 2),
    )


def expected_bispecials(n: int) -> frozenset[str]:
    """The bispecial factors of length ``n >= 1`` predicted by the block structure."""
    k = (n & -n).bit_length() - 1
    odd = n >> k
    if odd == 1:
        return frozenset({tau(k), tau_bar(k)})
    if odd == 3:
        t, tb = tau(k), tau_bar(k)
        return frozenset({t + tb + t, tb + t + tb})
    return frozenset()


def rauzy_defect(lang: Language, n: int) -> int:
    """p(n+1) - p(n) - #right-special(n); zero for every n."""
    return lang.count(n + 1) - lang.count(n) - len(special_words(lang, n).right)


def cube_free_check(lang: Language, max_len: int | None = None) -> list[str]:
    """Factors ``w`` for which ``w w w[0]`` is also a factor (always empty)."""
    max_len = lang.max_len if max_len is None else min(max_len, lang.max_len)
    violations = []
    for n in range(1, (max_len - 1) // 2 + 1):
        for w in lang.factors(n):
            if lang.contains(w + w + w[0]):
                violations.append(w)
    return violations


def disjoint_decomposition_check(k: int, depth: int | None = None, full_shift: bool = False) -> bool:
    """Check that factors of length ``depth`` split into the 2**k shifted H^k-images.

    Each length-``depth`` factor must be a prefix of sigma^j H^k(y) for exactly
    one ``j < 2**k``. With ``full_shift`` every binary word plays the role of
    a factor; the decomposition then fails.
    """
    if not 1 <= k <= 6:
        raise OutOfRangeError("k must lie in [1, 6]")
    block = 1 << k
    depth = 8 * block if depth is None else depth
    if full_shift and depth > 16:
        raise OutOfRangeError("full-shift check limited to depth 16")

    def sources(length: int):
        if full_shift:
            return ("".join(bits) for bits in itertools.product("01", repeat=length))
        return factors_of_length(length)

    targets = list(sources(depth))
    membership: Counter[str] = Counter()
    for j in range(block):
        parents = -(-(j + depth) // block)
        images = {THUE_MORSE.apply(u, k)[j : j + depth] for u in sources(parents)}
        membership.update(images)
    return all(membership[w] == 1 for w in targets)


def overlap_bound(k: int, length: int | None = None) -> int:
    """Largest overlap between occurrences of H^k(0) and H^k(1) in a long prefix."""
    if not 2 <= k <= 8:
        raise OutOfRangeError("k must lie in [2, 8]")
    block = 1 << k
    length = max(1 << 12, 16 * block) if length is None else length
    text = fixed_point_prefix("0", length)

    def occurrences(word: str) -> np.ndarray:
        found, start = [], text.find(word)
        while start >= 0:
            found.append(start)
            start = text.find(word, start + 1)
        return np.asarray(found, dtype=np.int64)

    ps, qs = occurrences(tau(k)), occurrences(tau_bar(k))
    if len(ps) == 0 or len(qs) == 0:
        return 0
    idx = np.searchsorted(qs, ps)
    left = qs[np.clip(idx - 1, 0, len(qs) - 1)]
    right = qs[np.clip(idx, 0, len(qs) - 1)]
    gap = np.minimum(np.abs(ps - left), np.abs(ps - right))
    return int(max(0, block - int(gap.min())))


def sigma_h_convergence(x: Point, iterations: int, window: int | None = None) -> list[int]:
    """Agreement lengths of (sigma H)^n x with a_n rho_b for n = 1..iterations.

    For x in the cylinder [ab], a_n is a for even n and its flip for odd n.
    Agreement is measured on the first ``window`` digits (default
    ``2**iterations + 2``) and grows at least like 2**n + 1.
    """
    window = (1 << iterations) + 2 if window is None else window
    a, b = x.digit(0), x.digit(1)
    rho = fixed_point_prefix(b, window)
    agreements = []
    y = x
    for n in range(1, iterations + 1):
        y = y.substitute(THUE_MORSE).shift(1)
        a_n = a if n % 2 == 0 else flip(a)
        target = a_n + rho[: window - 1]
        got = y.digits(window)
        agreement = next((i for i, (u, v) in enumerate(zip(got, target)) if u != v), window)
        agreements.append(agreement)
    return agreements
