import logging
from collections import Counter
from typing import Callable, Dict, List, Sequence, Tuple

from pydantic import BaseModel, Field

from components.numeric.scalar import Scalar, ScalarValue, coerce_scalar, scalar_sort_key, scalar_sum

# -----------------------------
# Logging
# -----------------------------
logger = logging.getLogger(__name__)

# -----------------------------
# Configuration
# -----------------------------
ORACLE_ORDER = 3
ORACLE_CELLS = ORACLE_ORDER * ORACLE_ORDER

Grid = Tuple[Tuple[Scalar, ...], ...]


class ArityError(ValueError):
    pass


class OracleResult(BaseModel):
    inputs: List[ScalarValue] = Field(..., description="the nine input cells as given")
    squares: List[List[List[ScalarValue]]] = Field(..., description="every magic arrangement, canonically ordered")
    total_count: int
    symmetry_class_count: int = Field(..., description="orbits under the eight rotations and reflections")
    orbit_sizes: List[int] = Field(default_factory=list, description="size of each symmetry class, in class order")


# -----------------------------
# Dihedral symmetries
# -----------------------------
def _rotate(g: Grid) -> Grid:
    """Quarter turn clockwise"""
    return tuple(zip(*g[::-1]))


def _transpose(g: Grid) -> Grid:
    return tuple(zip(*g))


_TRANSFORMS: Tuple[Callable[[Grid], Grid], ...] = (
    lambda g: g,
    _rotate,
    lambda g: _rotate(_rotate(g)),
    lambda g: _rotate(_rotate(_rotate(g))),
    _transpose,
    lambda g: tuple(row[::-1] for row in g),
    lambda g: g[::-1],
    lambda g: _rotate(_rotate(_transpose(g))),
)


def _as_grid(square) -> Grid:
    if hasattr(square, "entries"):
        square = square.entries
    elif hasattr(square, "tolist"):
        square = square.tolist()
    return tuple(tuple(coerce_scalar(x) for x in row) for row in square)


def symmetry_orbit(square) -> List[Grid]:
    """The 4 rotations and 4 reflections of a square, duplicates removed, identity first"""
    grid = _as_grid(square)
    orbit: Dict[Grid, None] = {}
    for transform in _TRANSFORMS:
        orbit.setdefault(tuple(tuple(row) for row in transform(grid)), None)
    return list(orbit)


def _canonical_key(g: Grid):
    return [scalar_sort_key(x) for row in g for x in row]


# -----------------------------
# Exhaustive search
# -----------------------------
def _search(values: List[Scalar], counts: List[int], total: Scalar) -> List[Grid]:
    """Fill cells row by row from the distinct values, pruning on every completed row"""
    n = ORACLE_ORDER
    cells: List[int] = []
    found: List[Grid] = []

    def line_ok(indices) -> bool:
        return n * scalar_sum(values[cells[k]] for k in indices) == total

    def recurse() -> None:
        filled = len(cells)
        if filled and filled % n == 0 and not line_ok(range(filled - n, filled)):
            return
        if filled == ORACLE_CELLS:
            columns = [range(c, ORACLE_CELLS, n) for c in range(n)]
            diagonals = [range(0, ORACLE_CELLS, n + 1), range(n - 1, ORACLE_CELLS - 1, n - 1)]
            if all(line_ok(line) for line in columns + diagonals):
                found.append(tuple(tuple(values[cells[r * n + c]] for c in range(n)) for r in range(n)))
            return
        for index, remaining in enumerate(counts):
            if remaining:
                counts[index] -= 1
                cells.append(index)
                recurse()
                cells.pop()
                counts[index] += 1

    recurse()
    return found


def enumerate_3x3(cells: Sequence) -> OracleResult:
    """Every distinct arrangement of nine cells whose rows, columns and diagonals share one sum

    Repeated inputs waive the distinctness requirement so the search is total over multisets.
    """
    inputs = [coerce_scalar(x) for x in cells]
    if len(inputs) != ORACLE_CELLS:
        raise ArityError(f"the oracle takes exactly {ORACLE_CELLS} cells, got {len(inputs)}")

    tally = Counter(inputs)
    values = sorted(tally, key=scalar_sort_key)
    counts = [tally[v] for v in values]
    total = scalar_sum(inputs)
    logger.info(f"→ Searching arrangements of {len(values)} distinct values")

    squares = sorted(_search(values, counts, total), key=_canonical_key)

    classes: List[List[Grid]] = []
    found = set(squares)
    seen = set()
    for square in squares:
        if square in seen:
            continue
        orbit = [g for g in symmetry_orbit(square) if g in found]
        seen.update(orbit)
        classes.append(orbit)

    logger.info(f"✓ Found {len(squares)} magic arrangements in {len(classes)} symmetry classes")
    return OracleResult(
        inputs=inputs,
        squares=[[list(row) for row in square] for square in squares],
        total_count=len(squares),
        symmetry_class_count=len(classes),
        orbit_sizes=[len(orbit) for orbit in classes],
    )
