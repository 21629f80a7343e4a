import logging
from dataclasses import dataclass
from typing import Iterator, List, NamedTuple, Optional, Tuple

import numpy as np

from components.numeric.scalar import Scalar, coerce_scalar, normalize

# -----------------------------
# Logging
# -----------------------------
logger = logging.getLogger(__name__)

# -----------------------------
# Configuration
# -----------------------------
STAGES = ("seeds", "anchors", "complete")


class InvalidOrderError(ValueError):
    pass


class ConstructionError(ValueError):
    """Two construction rules disagree on the value of one cell"""


class TableCorrection(NamedTuple):
    order: int
    row: int
    column: int
    printed: int
    corrected: int


class ConstantCorrection(NamedTuple):
    order: int
    offset: int
    printed: int
    corrected: int
    note: str


class LabelCorrection(NamedTuple):
    order: int
    printed_offset: int
    offset: int
    note: str


# Printed tables that disagree with the construction; the builder is authoritative.
KNOWN_TABLE_CORRECTIONS: Tuple[TableCorrection, ...] = (
    TableCorrection(order=13, row=5, column=12, printed=1119, corrected=119),
    TableCorrection(order=13, row=10, column=4, printed=12, corrected=124),
)

KNOWN_CONSTANT_CORRECTIONS: Tuple[ConstantCorrection, ...] = (
    ConstantCorrection(order=7, offset=2, printed=183, corrected=182, note="168 + 7*2"),
    ConstantCorrection(order=9, offset=0, printed=60, corrected=360, note="prose reads 60+9N, table reads 360+9N"),
)

# Worked squares printed under the wrong offset
KNOWN_LABEL_CORRECTIONS: Tuple[LabelCorrection, ...] = (
    LabelCorrection(order=5, printed_offset=1, offset=5, note="captioned m5(1)=65, rows sum to 85 = m5(5)"),
)


# -----------------------------
# Order
# -----------------------------
def check_order(s) -> int:
    """Validate an order for construction and return it as an int"""
    if isinstance(s, bool) or not isinstance(s, (int, np.integer)):
        raise InvalidOrderError(f"order must be an integer, got {s!r}")
    s = int(s)
    if s < 1:
        raise InvalidOrderError("order must be positive")
    if s % 2 == 0:
        raise InvalidOrderError("order must be odd")
    return s


# -----------------------------
# Grids
# -----------------------------
def _frozen_int_array(cells, s: int) -> np.ndarray:
    array = np.array(cells, dtype=np.int64)
    if array.shape != (s, s):
        raise ValueError(f"expected a {s}x{s} grid, got shape {array.shape}")
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class SquareA:
    """T = 0..s²-1 arranged row-major"""

    order: int
    cells: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "cells", _frozen_int_array(self.cells, self.order))

    def __eq__(self, other):
        if not isinstance(other, SquareA):
            return NotImplemented
        return self.order == other.order and np.array_equal(self.cells, other.cells)

    def tolist(self) -> List[List[int]]:
        return self.cells.tolist()


@dataclass(frozen=True, eq=False)
class OffsetGrid:
    """Square B: a permutation of 0..s²-1, indexed (row from top, column from left)"""

    order: int
    cells: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "cells", _frozen_int_array(self.cells, self.order))

    def __getitem__(self, index: Tuple[int, int]) -> int:
        return int(self.cells[index])

    def __eq__(self, other):
        if not isinstance(other, OffsetGrid):
            return NotImplemented
        return self.order == other.order and np.array_equal(self.cells, other.cells)

    def tolist(self) -> List[List[int]]:
        return self.cells.tolist()


@dataclass(frozen=True)
class MagicSquare:
    order: int
    offset: Optional[Scalar]
    entries: Tuple[Tuple[Scalar, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.order or any(len(row) != self.order for row in self.entries):
            raise ValueError(f"expected {self.order}x{self.order} entries")


class ConstructionStage(NamedTuple):
    name: str
    cells: List[List[Optional[int]]]


# -----------------------------
# Square A
# -----------------------------
def build_square_a(s: int) -> SquareA:
    s = check_order(s)
    return SquareA(order=s, cells=np.arange(s * s, dtype=np.int64).reshape(s, s))


# -----------------------------
# Square B by the construction rules
# -----------------------------
def _place(cells: List[List[Optional[int]]], i: int, c: int, value: int, rule: str) -> None:
    current = cells[i][c]
    if current is None:
        cells[i][c] = value
    elif current != value:
        raise ConstructionError(f"{rule} puts {value} at ({i}, {c}) which already holds {current}")


def _snapshot(name: str, cells: List[List[Optional[int]]]) -> ConstructionStage:
    return ConstructionStage(name=name, cells=[list(row) for row in cells])


def _rule_stages(s: int) -> Iterator[ConstructionStage]:
    s = check_order(s)
    m = (s - 1) // 2
    a = build_square_a(s).tolist()
    cells: List[List[Optional[int]]] = [[None] * s for _ in range(s)]

    # main diagonal takes A's middle row, anti-diagonal takes A's middle column
    for t in range(s):
        _place(cells, t, t, a[m][t], "main diagonal seed")
        _place(cells, t, s - 1 - t, a[t][m], "anti-diagonal seed")
    yield _snapshot("seeds", cells)

    # the four corner end-points of A sit orthogonally around the center, zero below it
    if s >= 3:
        _place(cells, m + 1, m, a[0][0], "corner anchor")
        _place(cells, m - 1, m, a[s - 1][s - 1], "corner anchor")
        _place(cells, m, m - 1, a[0][s - 1], "corner anchor")
        _place(cells, m, m + 1, a[s - 1][0], "corner anchor")
    yield _snapshot("anchors", cells)

    # consecutive values down-right through every anti-diagonal cell, wrapping inside the block
    for t in range(s):
        block, start = divmod(a[t][m], s)
        for k in range(1, s):
            _place(cells, (t + k) % s, (s - 1 - t + k) % s, block * s + (start + k) % s, "down-right fill")

    # values s apart down-left through every main-diagonal cell, wrapping inside the residue
    for t in range(s):
        row, residue = divmod(a[m][t], s)
        for k in range(1, s):
            _place(cells, (t + k) % s, (t - k) % s, ((row + k) % s) * s + residue, "down-left fill")
    yield _snapshot("complete", cells)


def construction_stages(s: int) -> List[ConstructionStage]:
    """Partial grids after the seeds, after the corner anchors, and once complete"""
    return list(_rule_stages(s))


def offset_grid_rules(s: int) -> OffsetGrid:
    s = check_order(s)
    logger.debug(f"→ Building order {s} offset grid from the diagonal rules")
    stage = None
    for stage in _rule_stages(s):
        logger.debug(f"✓ Stage '{stage.name}' done for order {s}")
    return OffsetGrid(order=s, cells=stage.cells)


# -----------------------------
# Square B in closed form
# -----------------------------
def offset_row(s: int, i: int) -> np.ndarray:
    """Row i of square B, computed on its own"""
    s = check_order(s)
    if not 0 <= i < s:
        raise IndexError(f"row {i} outside order {s}")
    m = (s - 1) // 2
    c = np.arange(s, dtype=np.int64)
    q = (m + m * c + (m + 1) * i) % s
    r = ((m + 1) * (i + c)) % s
    return s * q + r


def offset_grid_closed_form(s: int) -> OffsetGrid:
    s = check_order(s)
    m = (s - 1) // 2
    i = np.arange(s, dtype=np.int64)[:, None]
    c = np.arange(s, dtype=np.int64)[None, :]
    q = (m + m * c + (m + 1) * i) % s
    r = ((m + 1) * (i + c)) % s
    return OffsetGrid(order=s, cells=s * q + r)


offset_grid = offset_grid_closed_form


# -----------------------------
# Magic constants
# -----------------------------
def magic_constant(s: int, n) -> Scalar:
    """s(s²-1)/2 + s·N"""
    s = check_order(s)
    return normalize(s * (s * s - 1) // 2 + s * coerce_scalar(n))


def normal_magic_constant(s: int) -> Scalar:
    s = check_order(s)
    return s * (s * s + 1) // 2


# -----------------------------
# Representations
# -----------------------------
def instantiate(grid: OffsetGrid, n) -> MagicSquare:
    """Add the offset N to every cell of the grid"""
    n = coerce_scalar(n)
    # n is normalized and k is an integer, so n + k is normalized too
    entries = tuple(tuple(n + k for k in row) for row in grid.tolist())
    return MagicSquare(order=grid.order, offset=n, entries=entries)
