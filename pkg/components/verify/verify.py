import logging
from collections import Counter
from fractions import Fraction
from math import lcm
from typing import Iterator, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field

from components.construct.construct import MagicSquare, OffsetGrid, check_order
from components.numeric.scalar import (
    GaussianRational,
    Scalar,
    ScalarValue,
    coerce_scalar,
    format_scalar,
    imag_part,
    normalize,
    real_part,
)

# -----------------------------
# Logging
# -----------------------------
logger = logging.getLogger(__name__)

# -----------------------------
# Configuration
# -----------------------------
MAX_DUPLICATES_REPORTED = 5


class ShapeError(ValueError):
    pass


# -----------------------------
# Reports
# -----------------------------
class StructuralReport(BaseModel):
    permutation_ok: bool = Field(..., description="cells are exactly 0..s²-1")
    diagonal_seed_ok: bool = Field(..., description="cells[t][t] = m·s + t")
    anti_diagonal_seed_ok: bool = Field(..., description="cells[t][s-1-t] = t·s + m")
    anchors_ok: bool = Field(..., description="0, s²-1, s-1, s²-s below, above, left and right of the center")
    antisymmetry_ok: bool = Field(..., description="cells[i][c] + cells[s-1-i][s-1-c] = s²-1")
    wrapped_lr_blocks_ok: bool = Field(..., description="each wrapped down-right diagonal is one block of s consecutive values")
    wrapped_rl_residues_ok: bool = Field(..., description="each wrapped down-left diagonal shares one residue, stepping by s")
    middle_line_pairing_ok: bool = Field(..., description="middle row and column pair to s²-1 and hold A's diagonals")

    @property
    def all_ok(self) -> bool:
        return all(self.model_dump().values())


class VerificationReport(BaseModel):
    order: int
    row_sums: List[ScalarValue]
    column_sums: List[ScalarValue]
    diag_lr_sum: ScalarValue
    diag_rl_sum: ScalarValue
    common_constant: Optional[ScalarValue] = None
    all_distinct: bool
    is_magic: bool
    structural: Optional[StructuralReport] = None
    failures: List[str] = Field(default_factory=list, description="line kind, index, expected vs actual")


# -----------------------------
# Input shapes
# -----------------------------
def _as_scalar_grid(square) -> List[List[Scalar]]:
    if isinstance(square, MagicSquare):
        # entries of a constructed square are already normalized
        return [list(row) for row in square.entries]
    if isinstance(square, OffsetGrid):
        rows = square.tolist()
    elif isinstance(square, np.ndarray):
        rows = square.tolist()
    else:
        rows = square
    rows = [list(row) for row in rows]
    if not rows:
        raise ShapeError("grid is empty")
    s = len(rows)
    for index, row in enumerate(rows):
        if len(row) != s:
            raise ShapeError(f"row {index} has {len(row)} cells, expected {s}")
    return [[x if type(x) is int else coerce_scalar(x) for x in row] for row in rows]


def _as_int_grid(grid) -> np.ndarray:
    cells = grid.cells if isinstance(grid, OffsetGrid) else grid
    try:
        array = np.asarray(cells)
    except ValueError as e:
        raise ShapeError(f"grid is not rectangular: {e}")
    if array.ndim != 2 or array.shape[0] != array.shape[1] or array.shape[0] == 0:
        raise ShapeError(f"expected a square grid, got shape {array.shape}")
    if array.dtype.kind not in "iu":
        raise ShapeError(f"offset grids hold integers, got dtype {array.dtype}")
    return array.astype(np.int64)


# -----------------------------
# Magic property
# -----------------------------
class _ScaledGrid(NamedTuple):
    """Cells as integer numerators over one common denominator; imag is None for a real grid"""

    denominator: int
    real: List[List[int]]
    imag: Optional[List[List[int]]]

    def value(self, real: int, imag: int = 0) -> Scalar:
        return normalize(GaussianRational(Fraction(real, self.denominator), Fraction(imag, self.denominator)))

    def keys(self) -> Iterator:
        """One hashable key per cell, equal exactly when the cells are equal"""
        if self.imag is None:
            return (k for row in self.real for k in row)
        return ((a, b) for ra, rb in zip(self.real, self.imag) for a, b in zip(ra, rb))

    def key_value(self, key) -> Scalar:
        return self.value(*key) if isinstance(key, tuple) else self.value(key)


def _scale(grid: List[List[Scalar]]) -> _ScaledGrid:
    if all(type(x) is int for row in grid for x in row):
        return _ScaledGrid(1, grid, None)
    gaussian = any(isinstance(x, GaussianRational) for row in grid for x in row)
    denominators = {real_part(x).denominator for row in grid for x in row}
    if gaussian:
        denominators |= {imag_part(x).denominator for row in grid for x in row}
    d = lcm(*denominators)

    def numerators(part) -> List[List[int]]:
        scaled = []
        for row in grid:
            values = []
            for x in row:
                q = part(x)
                values.append(q.numerator * (d // q.denominator))
            scaled.append(values)
        return scaled

    return _ScaledGrid(d, numerators(real_part), numerators(imag_part) if gaussian else None)


def _int_line_sums(cells: List[List[int]]) -> List[int]:
    """Rows, then columns, then the two main diagonals"""
    s = len(cells)
    totals = [sum(row) for row in cells]
    totals += [sum(column) for column in zip(*cells)]
    totals.append(sum(cells[t][t] for t in range(s)))
    totals.append(sum(cells[t][s - 1 - t] for t in range(s)))
    return totals


def _line_sums(grid: List[List[Scalar]]) -> Tuple[List[Scalar], List[Scalar], Scalar, Scalar]:
    return _unscaled_line_sums(_scale(grid), len(grid))


def _unscaled_line_sums(scaled: _ScaledGrid, s: int) -> Tuple[List[Scalar], List[Scalar], Scalar, Scalar]:
    real = _int_line_sums(scaled.real)
    if scaled.imag is None:
        totals = real if scaled.denominator == 1 else [scaled.value(a) for a in real]
    else:
        totals = [scaled.value(a, b) for a, b in zip(real, _int_line_sums(scaled.imag))]
    return totals[:s], totals[s : 2 * s], totals[2 * s], totals[2 * s + 1]


def verify_magic(square) -> VerificationReport:
    """Check every row, column and both main diagonals for one common sum, and distinctness"""
    grid = _as_scalar_grid(square)
    s = len(grid)
    scaled = _scale(grid)
    rows, columns, diag_lr, diag_rl = _unscaled_line_sums(scaled, s)

    lines = [(f"row {i}", total) for i, total in enumerate(rows)]
    lines += [(f"column {c}", total) for c, total in enumerate(columns)]
    lines += [("diagonal left-to-right", diag_lr), ("diagonal right-to-left", diag_rl)]

    tally = Counter(total for _, total in lines)
    common = lines[0][1] if len(tally) == 1 else None
    # the most frequent sum stands in as the expected value; ties go to the earliest line
    expected = tally.most_common(1)[0][0]
    failures = [
        f"{name}: expected {format_scalar(expected)}, got {format_scalar(total)}"
        for name, total in lines
        if total != expected
    ]

    counts = Counter(scaled.keys())
    duplicates = [(key, n) for key, n in counts.items() if n > 1]
    for key, n in duplicates[:MAX_DUPLICATES_REPORTED]:
        failures.append(f"entry {format_scalar(scaled.key_value(key))} appears {n} times")
    if len(duplicates) > MAX_DUPLICATES_REPORTED:
        failures.append(f"{len(duplicates) - MAX_DUPLICATES_REPORTED} more repeated entries")

    report = VerificationReport(
        order=s,
        row_sums=rows,
        column_sums=columns,
        diag_lr_sum=diag_lr,
        diag_rl_sum=diag_rl,
        common_constant=common,
        all_distinct=not duplicates,
        is_magic=common is not None and not duplicates,
        failures=failures,
    )
    logger.debug(f"{'✓' if report.is_magic else '✗'} order {s} square checked, {len(failures)} findings")
    return report


def lines_agree(square) -> bool:
    """All 2s+2 line sums equal, distinctness not required"""
    rows, columns, diag_lr, diag_rl = _line_sums(_as_scalar_grid(square))
    return len(set(rows) | set(columns) | {diag_lr, diag_rl}) == 1


def is_normal(square) -> bool:
    """Entries are exactly 1..s²"""
    grid = _as_scalar_grid(square)
    s = len(grid)
    if any(type(x) is not int for row in grid for x in row):
        return False
    return Counter(x for row in grid for x in row) == Counter(range(1, s * s + 1))


# -----------------------------
# Construction structure
# -----------------------------
def _wrapped(cells: np.ndarray, direction: int) -> np.ndarray:
    """Column d holds the wrapped diagonal through (0, d); direction +1 runs down-right, -1 down-left"""
    s = cells.shape[0]
    i = np.arange(s)[:, None]
    d = np.arange(s)[None, :]
    return cells[i, (d + direction * i) % s]


def _cyclic_steps_ok(lines: np.ndarray, step: int, wrap: int) -> bool:
    diffs = np.roll(lines, -1, axis=0) - lines
    in_pattern = np.isin(diffs, (step, wrap)).all()
    return bool(in_pattern and ((diffs == wrap).sum(axis=0) == 1).all())


def verify_structure(grid) -> StructuralReport:
    """Each flag is evaluated on its own so one broken property cannot hide another"""
    cells = _as_int_grid(grid)
    s = check_order(cells.shape[0])
    m = (s - 1) // 2
    t = np.arange(s, dtype=np.int64)
    top = s * s - 1

    if s >= 3:
        anchors_ok = (
            cells[m + 1, m] == 0 and cells[m - 1, m] == top and cells[m, m - 1] == s - 1 and cells[m, m + 1] == s * s - s
        )
    else:
        anchors_ok = True

    down_right = _wrapped(cells, +1)
    down_left = _wrapped(cells, -1)
    blocks_ok = _cyclic_steps_ok(down_right, 1, 1 - s) and bool((down_right.min(axis=0) % s == 0).all())
    residues_ok = _cyclic_steps_ok(down_left, s, s - s * s) and bool((down_left % s == down_left[0] % s).all())

    middle_row = cells[m, :]
    middle_column = cells[:, m]
    k = np.arange(1, m + 1)
    pairing_ok = (
        bool((middle_row[m - k] + middle_row[m + k] == top).all())
        and bool((middle_column[m - k] + middle_column[m + k] == top).all())
        and np.array_equal(np.sort(middle_row), (t + 1) * (s - 1))
        and np.array_equal(np.sort(middle_column), t * (s + 1))
    )

    report = StructuralReport(
        permutation_ok=np.array_equal(np.sort(cells, axis=None), np.arange(s * s)),
        diagonal_seed_ok=np.array_equal(np.diagonal(cells), m * s + t),
        anti_diagonal_seed_ok=np.array_equal(np.diagonal(np.fliplr(cells)), t * s + m),
        anchors_ok=bool(anchors_ok),
        antisymmetry_ok=bool((cells + cells[::-1, ::-1] == top).all()),
        wrapped_lr_blocks_ok=blocks_ok,
        wrapped_rl_residues_ok=residues_ok,
        middle_line_pairing_ok=bool(pairing_ok),
    )
    logger.debug(f"{'✓' if report.all_ok else '✗'} order {s} structure checked")
    return report


def verify_square(square: MagicSquare) -> VerificationReport:
    """verify_magic plus the structural flags of the grid behind a constructed square"""
    report = verify_magic(square)
    offsets = offsets_of(square.entries, square.offset) if square.offset is not None else None
    if offsets is not None and square.order % 2 == 1:
        report = report.model_copy(update={"structural": verify_structure(offsets)})
    return report


def offsets_of(entries: Sequence[Sequence[Scalar]], offset: Scalar) -> Optional[np.ndarray]:
    """entries - N as an integer grid, or None when some cell is not N + k for k in 0..s²-1"""
    top = len(entries) ** 2
    rows = []
    for row in entries:
        values = []
        for x in row:
            k = normalize(normalize(x) - offset)
            if not isinstance(k, int) or not 0 <= k < top:
                return None
            values.append(k)
        rows.append(values)
    return np.array(rows, dtype=np.int64)
