"""Weighted counts a_n(gamma) of first-return loop words.

a_n is the sum over loop words u of length n of exp(-gamma S_n V) on [u J].
"""

from __future__ import annotations

import logging
import math
from itertools import product

import numpy as np
from scipy import sparse
from scipy.special import logsumexp

from tmlab.config import get_settings
from tmlab.errors import BruteForceLimitError, UnsupportedPotentialError
from tmlab.potentials.evaluate import distance_value
from tmlab.potentials.models import DistancePower, Potential, UnboundedVu
from tmlab.subshift_core.language import INFINITE_LEVEL
from tmlab.subshift_core.words import fixed_point_prefix
from tmlab.thermo.return_system import ReturnSystem

logger = logging.getLogger(__name__)


def charge_table(potential: Potential, max_length: int, level_cap: int) -> np.ndarray:
    """Potential value charged to a position whose run ended with length ``L``, indexed by L."""
    table = np.zeros(max_length + 1)
    match potential:
        case DistancePower():
            for length in range(1, max_length + 1):
                level = INFINITE_LEVEL if length >= level_cap else length
                table[length] = distance_value(potential, level)
        case UnboundedVu(reading="block"):
            for length in range(1, max_length + 1):
                table[length] = potential.at_depth(length.bit_length() - 1)
        case _:
            raise UnsupportedPotentialError(f"no locally constant reading of {potential!r}")
    return table


def loop_word_charge(rs: ReturnSystem, potential: Potential, u: str) -> float:
    """S_n V on the cylinder [u J], computed position by position."""
    word = u + rs.j_word
    table = charge_table(potential, len(word), rs.level_cap)
    lengths = []
    if isinstance(potential, DistancePower):
        lengths = [rs.lang.longest_factor_prefix(word[i:]) for i in range(len(u))]
    else:
        for i in range(len(u)):
            tail = word[i + 1 :]
            rho = fixed_point_prefix(tail[0], len(tail))
            lengths.append(next(k for k, (p, q) in enumerate(zip(tail, rho)) if p != q))
    return math.fsum(table[length] for length in lengths)


def _short_loop(rs: ReturnSystem, potential: Potential, gamma: float, n: int) -> float:
    """log a_n for n < |J|, where the loop word is forced to be J[:n]."""
    u = rs.j_word[:n]
    if not rs.is_loop_word(u):
        return -math.inf
    return -gamma * loop_word_charge(rs, potential, u)


def log_return_coefficients(rs: ReturnSystem, potential: Potential, gamma: float) -> np.ndarray:
    """log a_n for n = 1..n_max (entry n-1), ``-inf`` where no loop word exists.

    The path weights are pushed through the compiled chain as sparse
    matrix-vector products, renormalised by the maximum after every step.
    """
    chain = rs.chain_for(potential)
    table = charge_table(potential, rs.max_length, rs.level_cap)
    size = len(rs.j_word)
    log_a = np.full(rs.n_max, -np.inf)
    for n in range(1, min(size, rs.n_max + 1)):
        log_a[n - 1] = _short_loop(rs, potential, gamma, n)
    if rs.n_max < size:
        return log_a

    weights = -gamma * np.bincount(
        chain.death_owner, weights=table[chain.death_len], minlength=chain.n_transitions
    )
    shift = float(weights.max()) if weights.size else 0.0
    step = sparse.csr_matrix(
        (np.exp(weights - shift), (chain.dst, chain.src)), shape=(chain.n_states, chain.n_states)
    )
    closing = -gamma * np.bincount(chain.end_owner, weights=table[chain.end_len], minlength=chain.n_states)

    v = np.zeros(chain.n_states)
    v[0] = 1.0
    log_scale = -gamma * float(table[chain.init_deaths].sum())
    for n in range(size, rs.n_max + 1):
        if n > size:
            v = step @ v
            peak = v.max()
            if peak <= 0.0:
                break
            v /= peak
            log_scale += shift + math.log(peak)
        live = (v > 0.0) & chain.end_valid
        if live.any():
            log_a[n - 1] = log_scale + logsumexp(np.log(v[live]) + closing[live])
    return log_a


def return_coefficients(rs: ReturnSystem, potential: Potential, gamma: float) -> np.ndarray:
    """a_n for n = 1..n_max."""
    return np.exp(log_return_coefficients(rs, potential, gamma))


def brute_force_coefficients(
    rs: ReturnSystem,
    potential: Potential,
    gamma: float,
    n_limit: int,
) -> np.ndarray:
    """a_n for n = 1..n_limit by enumerating all 2**n candidate words.

    Raises:
        BruteForceLimitError: If ``n_limit`` exceeds the configured limit.
    """
    limit = get_settings().BRUTE_FORCE_LIMIT
    if n_limit > limit:
        raise BruteForceLimitError(f"n_limit {n_limit} exceeds {limit}")
    # fail before enumerating on unsupported potentials
    charge_table(potential, 1, rs.level_cap)
    values = np.zeros(n_limit)
    for n in range(1, n_limit + 1):
        terms = [
            math.exp(-gamma * loop_word_charge(rs, potential, u))
            for u in ("".join(bits) for bits in product("01", repeat=n))
            if rs.is_loop_word(u)
        ]
        values[n - 1] = math.fsum(terms)
    logger.debug("[BruteForce] enumerated", extra={"j": rs.j_word, "n_limit": n_limit, "gamma": gamma})
    return values
