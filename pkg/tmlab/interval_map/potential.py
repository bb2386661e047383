"""Distance potential on depth-N cylinders, made continuous at dyadic points.

Cells are indexed by the integer whose binary expansion (most significant
bit first) is the cylinder word x_0 ... x_{N-1}, so index order is the
lexicographic order and the order of the projected points in [0, 1].
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from tmlab.config import get_settings
from tmlab.errors import CapExceededError, OutOfRangeError
from tmlab.potentials.evaluate import distance_value
from tmlab.potentials.models import DistancePower
from tmlab.subshift_core.language import factors_of_length

logger = logging.getLogger(__name__)

# boundaries shallower than this many digits below the depth are adjusted
_PAIR_MARGIN = 4


def cell_levels(depth: int) -> np.ndarray:
    """Longest factor prefix of every depth-``depth`` cell word, capped at ``depth``."""
    cells = np.arange(1 << depth, dtype=np.int64)
    levels = np.zeros(cells.size, dtype=np.int64)
    # factors are prefix-closed, so the level counts the admissible prefix lengths
    for m in range(1, depth + 1):
        codes = np.fromiter((int(w, 2) for w in factors_of_length(m)), dtype=np.int64)
        levels += np.isin(cells >> (depth - m), codes)
    return levels


def boundary_depths(depth: int) -> np.ndarray:
    """Length of the common prefix of cells i and i + 1, for i < 2**depth - 1."""
    i = np.arange((1 << depth) - 1, dtype=np.int64)
    # i ^ (i + 1) = 2**t - 1 where t - 1 is the number of trailing ones of i
    t = np.log2((i ^ (i + 1)) + 1).astype(np.int64)
    return depth - t


@dataclass
class ModifiedPotential:
    """Cell table of the modified potential.

    Each cell carries a left and a right endpoint value; the potential is
    read as linear across the cell. ``values`` is the cell average used by
    the transfer action.
    """

    a: float
    depth: int
    levels: np.ndarray
    base: np.ndarray
    left: np.ndarray
    right: np.ndarray
    modified_pairs: int = 0

    @classmethod
    def zero(cls, depth: int) -> ModifiedPotential:
        """The identically zero potential at ``depth``."""
        _check_depth(depth)
        size = 1 << depth
        zeros = np.zeros(size)
        return cls(
            a=0.0,
            depth=depth,
            levels=np.full(size, depth, dtype=np.int64),
            base=zeros,
            left=zeros.copy(),
            right=zeros.copy(),
        )

    @property
    def size(self) -> int:
        return 1 << self.depth

    @property
    def values(self) -> np.ndarray:
        return 0.5 * (self.left + self.right)

    def on_subshift(self) -> np.ndarray:
        """Mask of cells whose word is a factor."""
        return self.levels >= self.depth

    def value(self, word: str) -> float:
        """Cell average at a binary word of length ``depth``."""
        if len(word) != self.depth or set(word) - {"0", "1"}:
            raise OutOfRangeError(f"expected a binary word of length {self.depth}")
        return float(self.values[int(word, 2)])

    def continuity_gap(self) -> float:
        """Largest jump across a boundary at depth at most ``depth - 4``."""
        if self.depth <= _PAIR_MARGIN:
            return 0.0
        shallow = boundary_depths(self.depth) <= self.depth - _PAIR_MARGIN
        jumps = np.abs(self.right[:-1] - self.left[1:])[shallow]
        return float(jumps.max()) if jumps.size else 0.0

    def modification_bound_violations(self) -> list[int]:
        """Cells whose modified endpoints move further than four levels allow."""
        out = []
        finite = ~self.on_subshift()
        m = self.levels.astype(float)
        with np.errstate(divide="ignore"):
            bound = np.where(finite, self.base * (1.0 - (m / (m + _PAIR_MARGIN)) ** self.a), 0.0)
        for side in (self.left, self.right):
            bad = np.nonzero(np.abs(side - self.base) > bound + 1e-15)[0]
            out.extend(int(i) for i in bad)
        return sorted(set(out))


def _check_depth(depth: int) -> None:
    if depth < 1:
        raise OutOfRangeError("depth must be positive")
    if depth > get_settings().INTERVAL_MAX_DEPTH:
        raise CapExceededError(f"depth {depth} exceeds {get_settings().INTERVAL_MAX_DEPTH}")


def build_w(a: float | DistancePower, depth: int | None = None) -> ModifiedPotential:
    """Distance potential on depth-N cells with dyadic boundaries made continuous.

    Two neighbouring cells meet at a point with two binary codings
    ``p 0 1...`` and ``p 1 0...``. When ``p`` is not a factor both cells
    have the level of ``p`` and nothing changes. Otherwise both levels lie
    within four of ``len(p)`` and the endpoint values at the shared point
    are set to the smaller of the two cell values, so the potential stays
    positive off the subshift and decays like the base one.
    """
    depth = get_settings().INTERVAL_DEPTH if depth is None else depth
    _check_depth(depth)
    potential = a if isinstance(a, DistancePower) else DistancePower(a=a)

    levels = cell_levels(depth)
    finite = levels < depth
    base = np.zeros(levels.size)
    distinct, inverse = np.unique(levels[finite], return_inverse=True)
    table = np.array([distance_value(potential, int(m)) for m in distinct])
    base[finite] = table[inverse]
    left = base.copy()
    right = base.copy()

    modified = 0
    if depth > _PAIR_MARGIN:
        shallow = np.nonzero(boundary_depths(depth) <= depth - _PAIR_MARGIN)[0]
        differs = shallow[base[shallow] != base[shallow + 1]]
        meet = np.minimum(base[differs], base[differs + 1])
        right[differs] = meet
        left[differs + 1] = meet
        modified = int(differs.size)

    logger.debug(
        "[ModifiedPotential] built",
        extra={"a": potential.a, "depth": depth, "modified_pairs": modified},
    )
    return ModifiedPotential(
        a=potential.a,
        depth=depth,
        levels=levels,
        base=base,
        left=left,
        right=right,
        modified_pairs=modified,
    )
