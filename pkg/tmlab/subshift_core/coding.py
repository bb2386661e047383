"""The two-to-one sliding block code pi and the parity-lexicographic order."""

from __future__ import annotations

from enum import IntEnum

import numpy as np

from tmlab.errors import InsufficientPrefixError, PrefixComparableError
from tmlab.subshift_core.words import FEIGENBAUM, THUE_MORSE, Point, array_to_word, word_to_array


class Ordering(IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def _xor_adjacent(word: str) -> str:
    digits = word_to_array(word)
    return array_to_word(digits[:-1] ^ digits[1:])


def sliding_block_pi(x: Point | str, length: int | None = None) -> Point | str:
    """Digit k of the image is 1 iff digits k and k+1 differ.

    On a point the image is again a point. On a finite word the image has
    one digit fewer; asking for ``length`` digits needs ``length + 1``.
    """
    if isinstance(x, Point):
        prefix = _xor_adjacent(x.digits(len(x.prefix) + 1)) if x.prefix else ""
        tail = _xor_adjacent(x.tail + x.tail[0])
        return Point(prefix, tail)
    needed = 2 if length is None else length + 1
    if len(x) < needed:
        raise InsufficientPrefixError(needed, len(x))
    image = _xor_adjacent(x)
    return image if length is None else image[:length]


def feigenbaum_violations(words) -> list[str]:
    """Words w for which pi(H(w)) and H_feig(pi(w)) disagree on their common 2|w| - 2 digits."""
    bad = []
    for w in words:
        if len(w) < 2:
            continue
        lhs = sliding_block_pi(THUE_MORSE.apply(w))
        rhs = FEIGENBAUM.apply(sliding_block_pi(w))
        n = 2 * len(w) - 2
        if lhs[:n] != rhs[:n]:
            bad.append(w)
    return bad


def parity_lex_compare(x: str, y: str) -> Ordering:
    """Compare in the parity-lexicographic order.

    At the first disagreement the smaller digit wins, unless the common
    prefix holds an odd number of 1s, in which case the order flips.

    Raises:
        PrefixComparableError: If one word is a strict prefix of the other.
    """
    if x == y:
        return Ordering.EQUAL
    i = next((i for i, (u, v) in enumerate(zip(x, y)) if u != v), None)
    if i is None:
        raise PrefixComparableError(f"{x!r} and {y!r} are prefix-comparable")
    order = Ordering.LESS if x[i] < y[i] else Ordering.GREATER
    if x[:i].count("1") % 2:
        order = Ordering(-order)
    return order


def order_lemma_violations(
    rng: np.random.Generator, symbol: str, pairs: int = 10_000, length: int = 32
) -> int:
    """Count random pairs in the cylinder [symbol] for which pi breaks the order lemma.

    pi maps lexicographic order on [0] to parity-lexicographic order and
    reverses it on [1].
    """
    expected_sign = 1 if symbol == "0" else -1
    violations = 0
    done = 0
    while done < pairs:
        bits = rng.integers(0, 2, size=(2, length - 1), dtype=np.uint8)
        x = symbol + array_to_word(bits[0])
        y = symbol + array_to_word(bits[1])
        if x == y:
            continue
        done += 1
        lex = Ordering.LESS if x < y else Ordering.GREATER
        pl = parity_lex_compare(sliding_block_pi(x), sliding_block_pi(y))
        if pl != Ordering(expected_sign * lex):
            violations += 1
    return violations
