"""Binary words, eventually periodic points and constant-length substitutions."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from tmlab.config import get_settings
from tmlab.errors import CapExceededError

_BINARY = frozenset("01")
_FLIP = str.maketrans("01", "10")


class FiniteWord(str):
    """A finite word over {0, 1}.

    Subclasses ``str`` so slicing, hashing and comparison stay native; slices
    come back as plain ``str`` and every lab function accepts either.
    """

    def __new__(cls, bits: str | FiniteWord = "") -> FiniteWord:
        text = str(bits)
        if not _BINARY.issuperset(text):
            raise ValueError(f"not a binary word: {text!r}")
        return super().__new__(cls, text)

    @classmethod
    def from_bits(cls, bits) -> FiniteWord:
        """Build a word from an iterable of 0/1 integers."""
        return cls("".join("1" if b else "0" for b in bits))

    @property
    def length(self) -> int:
        return len(self)

    def flip(self) -> FiniteWord:
        return FiniteWord(flip(self))

    def to_array(self) -> np.ndarray:
        return np.frombuffer(self.encode("ascii"), dtype=np.uint8) - 48


def flip(word: str) -> str:
    """Exchange 0 and 1 in a word."""
    return word.translate(_FLIP)


def word_to_array(word: str) -> np.ndarray:
    """Digits of a word as a uint8 array."""
    return np.frombuffer(word.encode("ascii"), dtype=np.uint8) - 48


def array_to_word(digits: np.ndarray) -> str:
    """Inverse of :func:`word_to_array`."""
    return (np.asarray(digits, dtype=np.uint8) + 48).tobytes().decode("ascii")


@dataclass(frozen=True)
class Point:
    """A point of the full shift stored as ``prefix`` then ``tail`` repeated forever."""

    prefix: str
    tail: str

    def __post_init__(self) -> None:
        if not self.tail:
            raise ValueError("tail must be nonempty")
        if not _BINARY.issuperset(self.prefix) or not _BINARY.issuperset(self.tail):
            raise ValueError("point digits must be binary")

    @classmethod
    def periodic(cls, tail: str) -> Point:
        return cls("", tail)

    def digit(self, i: int) -> str:
        if i < 0:
            raise IndexError(i)
        if i < len(self.prefix):
            return self.prefix[i]
        return self.tail[(i - len(self.prefix)) % len(self.tail)]

    def digits(self, count: int) -> str:
        """The first ``count`` digits as a string."""
        if count <= len(self.prefix):
            return self.prefix[:count]
        missing = count - len(self.prefix)
        repeats = -(-missing // len(self.tail))
        return self.prefix + (self.tail * repeats)[:missing]

    def digit_array(self, count: int) -> np.ndarray:
        return word_to_array(self.digits(count))

    def shift(self, steps: int = 1) -> Point:
        """Apply the left shift ``steps`` times (exact, never materialises the tail)."""
        if steps <= len(self.prefix):
            return Point(self.prefix[steps:], self.tail)
        r = (steps - len(self.prefix)) % len(self.tail)
        return Point("", self.tail[r:] + self.tail[:r])

    def flip(self) -> Point:
        return Point(flip(self.prefix), flip(self.tail))

    def substitute(self, substitution: Substitution, iterations: int = 1) -> Point:
        """Image of the point under ``iterations`` applications of a substitution."""
        return Point(
            substitution.apply(self.prefix, iterations),
            substitution.apply(self.tail, iterations),
        )

    @property
    def is_constant(self) -> bool:
        """True when the point is a constant sequence."""
        return len(set(self.prefix + self.tail)) == 1


@dataclass(frozen=True)
class Substitution:
    """A substitution on {0, 1} given by the images of the two symbols."""

    image0: str
    image1: str

    def __post_init__(self) -> None:
        for image in (self.image0, self.image1):
            if not image or not _BINARY.issuperset(image):
                raise ValueError(f"invalid substitution image: {image!r}")

    def image_length(self, word: str, iterations: int = 1) -> int:
        """Exact length of the ``iterations``-th image, computed without building it."""
        zeros, ones = word.count("0"), word.count("1")
        z0, o0 = self.image0.count("0"), self.image0.count("1")
        z1, o1 = self.image1.count("0"), self.image1.count("1")
        for _ in range(iterations):
            zeros, ones = zeros * z0 + ones * z1, zeros * o0 + ones * o1
        return zeros + ones

    def apply(self, word: str, iterations: int = 1, max_length: int | None = None) -> str:
        """Return the ``iterations``-th image of ``word``.

        Raises:
            CapExceededError: If the image would be longer than ``max_length``
                (default ``TMLAB_MAX_WORD_LENGTH``).
        """
        if iterations < 0:
            raise ValueError("iterations must be nonnegative")
        limit = get_settings().MAX_WORD_LENGTH if max_length is None else max_length
        required = self.image_length(word, iterations)
        if required > limit:
            raise CapExceededError(f"image length {required} exceeds cap {limit}")
        table = str.maketrans({"0": self.image0, "1": self.image1})
        for _ in range(iterations):
            word = word.translate(table)
        return word


THUE_MORSE = Substitution("01", "10")
FEIGENBAUM = Substitution("11", "10")


@lru_cache(maxsize=64)
def fixed_point_prefix(seed: str, length: int) -> str:
    """The first ``length`` digits of the Thue-Morse fixed point starting with ``seed``."""
    if length < 1:
        raise ValueError("length must be positive")
    if seed not in ("0", "1"):
        raise ValueError(f"seed must be '0' or '1', got {seed!r}")
    word = seed
    while len(word) < length:
        word = THUE_MORSE.apply(word, max_length=max(length * 2, 2))
    return word[:length]


def tau(k: int) -> str:
    """H^k(0)."""
    return fixed_point_prefix("0", 1 << k)


def tau_bar(k: int) -> str:
    """H^k(1)."""
    return fixed_point_prefix("1", 1 << k)


def thue_morse_digits(positions: np.ndarray) -> np.ndarray:
    """Digits of the fixed point starting with 0 at the given positions."""
    return (np.bitwise_count(np.asarray(positions, dtype=np.uint64)) & 1).astype(np.uint8)


def window_codes(digits: np.ndarray, n: int) -> np.ndarray:
    """Integer code (first digit most significant) of every length-``n`` window."""
    digits = np.asarray(digits, dtype=np.int64)
    codes = np.zeros(len(digits) - n + 1, dtype=np.int64)
    for t in range(n):
        codes = (codes << 1) | digits[t : t + len(codes)]
    return codes
