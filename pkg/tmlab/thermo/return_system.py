"""First-return system on a cylinder [J] disjoint from the Thue-Morse subshift.

A loop word of length n is a word u such that y = u J ... lies in [J],
sigma^n y lies in [J] and no earlier shift of y does. The Birkhoff sums of
distance-type potentials are constant on [u J], so the weighted count of
loop words is a sum over paths of a finite automaton. The automaton reads
u J left to right and tracks

* a *tracker* state from which the positions whose run just ended can be
  read off (``LevelTracker`` for distance potentials, ``BlockTracker`` for
  the unbounded potential), and
* a KMP state for J, which forbids early returns.

Runs that end are reported as lengths; the caller turns a length into a
potential value. Everything in this module is independent of gamma.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from tmlab.config import get_settings
from tmlab.errors import CapExceededError, FactorWordError, OutOfRangeError, UnsupportedPotentialError
from tmlab.potentials.models import DistancePower, Potential, UnboundedVu
from tmlab.subshift_core.language import Language, get_language
from tmlab.subshift_core.words import fixed_point_prefix

logger = logging.getLogger(__name__)


class LevelTracker:
    """Longest suffix of the word read so far that is a subshift factor.

    States are ``(automaton_state, length)`` pairs of the suffix automaton of
    the language, which identify the suffix uniquely. Appending a symbol
    ends the runs of every position whose longest admissible prefix cannot
    be extended; their levels form the range ``new_length .. old_length``.
    """

    offset = 0

    def __init__(self, lang: Language) -> None:
        self._sam = lang.automaton
        self.initial = (0, 0)

    def step(self, state: tuple[int, int], symbol: str) -> tuple[tuple[int, int], tuple[int, ...]]:
        sam = self._sam
        edges = sam.next0 if symbol == "0" else sam.next1
        q, length = state
        old = length
        while q > 0 and edges[q] < 0:
            q = sam.link[q]
            length = sam.length[q]
        if edges[q] >= 0:
            q, length = edges[q], length + 1
        else:
            q, length = 0, 0
        return (q, length), tuple(range(length, old + 1))


class BlockTracker:
    """Longest suffix of the word read so far that is a prefix of a fixed point of H.

    A match starting at position j measures the agreement of sigma^(j-1) y
    after its first digit with the fixed point starting like it, so reading
    starts one symbol into the loop word (``offset = 1``). The reported
    length is the agreement length of the match that just broke.
    """

    offset = 1

    def __init__(self, max_length: int) -> None:
        self._rho = {b: fixed_point_prefix(b, max_length + 1) for b in "01"}
        self.initial = ""

    def _is_match(self, word: str) -> bool:
        return self._rho[word[0]].startswith(word)

    def step(self, state: str, symbol: str) -> tuple[str, tuple[int, ...]]:
        best = symbol
        deaths = []
        for start in range(len(state)):
            suffix = state[start:]
            if not self._is_match(suffix):
                continue
            if self._rho[suffix[0]][len(suffix)] == symbol:
                if len(suffix) + 1 > len(best):
                    best = suffix + symbol
            else:
                deaths.append(len(suffix))
        return best, tuple(deaths)


class KmpMatcher:
    """Occurrences of a fixed word; state = length of the longest matched prefix."""

    def __init__(self, word: str) -> None:
        self.word = word
        failure = [0] * len(word)
        k = 0
        for i in range(1, len(word)):
            while k and word[i] != word[k]:
                k = failure[k - 1]
            if word[i] == word[k]:
                k += 1
            failure[i] = k
        self._failure = failure

    @property
    def full(self) -> int:
        return len(self.word)

    def step(self, k: int, symbol: str) -> int:
        word = self.word
        if k == len(word):
            k = self._failure[k - 1]
        while k and word[k] != symbol:
            k = self._failure[k - 1]
        return k + 1 if word[k] == symbol else 0


@dataclass(eq=False)
class Chain:
    """Compiled path structure of the return automaton for one tracker.

    Transition ``t`` goes from ``src[t]`` to ``dst[t]`` and ends the runs
    listed in ``death_len[death_owner == t]``. State 0 is the state after
    the forced J prefix, whose own ended runs are ``init_deaths``. Reading
    the trailing J from state ``s`` is allowed when ``end_valid[s]`` and
    ends the runs ``end_len[end_owner == s]`` that belong to the loop.
    """

    n_states: int
    init_deaths: np.ndarray
    src: np.ndarray
    dst: np.ndarray
    death_owner: np.ndarray
    death_len: np.ndarray
    end_valid: np.ndarray
    end_owner: np.ndarray
    end_len: np.ndarray

    @property
    def n_transitions(self) -> int:
        return len(self.src)


def _as_int(values: list[int]) -> np.ndarray:
    return np.asarray(values, dtype=np.intp)


def compile_chain(tracker, j_word: str, free_steps: int) -> Chain:
    """Breadth-first compilation of the states reachable in ``free_steps`` free symbols."""
    kmp = KmpMatcher(j_word)
    state = tracker.initial
    init_deaths: list[int] = []
    for symbol in j_word[tracker.offset :]:
        state, deaths = tracker.step(state, symbol)
        init_deaths.extend(deaths)

    start = (state, kmp.full)
    index = {start: 0}
    states = [start]
    frontier = [start]
    src: list[int] = []
    dst: list[int] = []
    owner: list[int] = []
    lengths: list[int] = []
    for _ in range(free_steps):
        discovered = []
        for key in frontier:
            tracked, k = key
            for symbol in "01":
                k_next = kmp.step(k, symbol)
                if k_next == kmp.full:
                    continue
                tracked_next, deaths = tracker.step(tracked, symbol)
                key_next = (tracked_next, k_next)
                if key_next not in index:
                    index[key_next] = len(states)
                    states.append(key_next)
                    discovered.append(key_next)
                owner.extend([len(src)] * len(deaths))
                lengths.extend(deaths)
                src.append(index[key])
                dst.append(index[key_next])
        frontier = discovered
        if not frontier:
            break

    end_valid = np.zeros(len(states), dtype=bool)
    end_owner: list[int] = []
    end_len: list[int] = []
    last = len(j_word) - 1
    for idx, (tracked, k) in enumerate(states):
        kept: list[int] = []
        valid = True
        for r, symbol in enumerate(j_word):
            k = kmp.step(k, symbol)
            if k == kmp.full and r < last:
                valid = False
                break
            tracked, deaths = tracker.step(tracked, symbol)
            # runs starting inside the trailing J are not part of the loop
            kept.extend(length for length in deaths if length >= r + 1 - tracker.offset)
        if valid:
            end_valid[idx] = True
            end_owner.extend([idx] * len(kept))
            end_len.extend(kept)

    return Chain(
        n_states=len(states),
        init_deaths=_as_int(init_deaths),
        src=_as_int(src),
        dst=_as_int(dst),
        death_owner=_as_int(owner),
        death_len=_as_int(lengths),
        end_valid=end_valid,
        end_owner=_as_int(end_owner),
        end_len=_as_int(end_len),
    )


@dataclass(eq=False)
class ReturnSystem:
    """First-return system on [J] truncated at loop length ``n_max``."""

    j_word: str
    delta_j: int
    n_max: int
    level_cap: int
    lang: Language = field(repr=False)

    @property
    def max_length(self) -> int:
        """Longest word the automaton ever reads."""
        return self.n_max + len(self.j_word)

    @cached_property
    def level_chain(self) -> Chain:
        chain = compile_chain(LevelTracker(self.lang), self.j_word, max(self.n_max - len(self.j_word), 0))
        logger.debug(
            "[ReturnSystem] level chain compiled",
            extra={"j": self.j_word, "states": chain.n_states, "transitions": chain.n_transitions},
        )
        return chain

    @cached_property
    def block_chain(self) -> Chain:
        chain = compile_chain(BlockTracker(self.max_length), self.j_word, max(self.n_max - len(self.j_word), 0))
        logger.debug(
            "[ReturnSystem] block chain compiled",
            extra={"j": self.j_word, "states": chain.n_states, "transitions": chain.n_transitions},
        )
        return chain

    def chain_for(self, potential: Potential) -> Chain:
        match potential:
            case DistancePower():
                return self.level_chain
            case UnboundedVu(reading="block"):
                return self.block_chain
            case UnboundedVu():
                raise UnsupportedPotentialError(
                    "the aligned depth is not constant on loop cylinders; use reading='block'"
                )
        raise UnsupportedPotentialError(f"Birkhoff sums of {type(potential).__name__} are not locally constant")

    def is_loop_word(self, word: str) -> bool:
        """True when ``word`` is a first-return loop word."""
        extended = word + self.j_word
        return extended.startswith(self.j_word) and extended.find(self.j_word, 1) == len(word)


def build_return_system(
    j_word: str | None = None,
    n_max: int | None = None,
    level_cap: int | None = None,
) -> ReturnSystem:
    """Validate J and set up the return system.

    Raises:
        FactorWordError: If J is a factor of the subshift.
        CapExceededError: If ``n_max`` exceeds the configured bound.
    """
    settings = get_settings()
    j_word = settings.DEFAULT_J if j_word is None else j_word
    n_max = settings.THERMO_NMAX if n_max is None else n_max
    if not j_word or set(j_word) - {"0", "1"}:
        raise OutOfRangeError(f"J must be a nonempty binary word, got {j_word!r}")
    if n_max < 1:
        raise OutOfRangeError("n_max must be positive")
    if n_max > settings.THERMO_NMAX_BOUND:
        raise CapExceededError(f"n_max {n_max} exceeds the bound {settings.THERMO_NMAX_BOUND}")

    lang = get_language(n_max + len(j_word))
    if lang.is_factor(j_word):
        raise FactorWordError(f"{j_word} is a factor of the subshift, so [J] meets it")
    if level_cap is None:
        level_cap = max(settings.LEVEL_CAP, n_max + len(j_word))
    rs = ReturnSystem(
        j_word=j_word,
        delta_j=lang.longest_factor_prefix(j_word),
        n_max=n_max,
        level_cap=level_cap,
        lang=lang,
    )
    logger.info("[ReturnSystem] built", extra={"j": j_word, "n_max": n_max, "delta_j": rs.delta_j})
    return rs
