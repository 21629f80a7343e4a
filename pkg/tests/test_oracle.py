from fractions import Fraction

import pytest

from components.construct.construct import instantiate, offset_grid
from components.numeric.scalar import GaussianRational, normalize, parse_scalar, scalar_sum
from components.oracle.oracle import ArityError, enumerate_3x3, symmetry_orbit
from components.verify.verify import verify_magic

OFFSETS = ["0", "1", "2", "33", "-5", "1/2", "1+i"]


def shift(square, t):
    return [[normalize(x + t) for x in row] for row in square]


def test_zero_to_eight():
    result = enumerate_3x3(range(9))
    assert result.total_count == 8
    assert result.symmetry_class_count == 1
    assert result.orbit_sizes == [8]
    assert offset_grid(3).tolist() in result.squares
    assert result.squares == sorted(result.squares)


def test_nine_equal_cells():
    result = enumerate_3x3([Fraction(7, 3)] * 9)
    assert result.total_count == 1
    assert result.symmetry_class_count == 1
    assert result.squares == [[[Fraction(7, 3)] * 3] * 3]


def test_no_integer_line_constant():
    result = enumerate_3x3([0, 1, 2, 3, 4, 5, 6, 7, 100])
    assert (result.total_count, result.symmetry_class_count) == (0, 0)
    assert result.squares == []


@pytest.mark.parametrize("cells", [range(8), range(10), []])
def test_wrong_cell_count(cells):
    with pytest.raises(ArityError):
        enumerate_3x3(cells)


@pytest.mark.parametrize("offset", OFFSETS)
def test_construction_is_among_the_arrangements(offset):
    n = parse_scalar(offset)
    result = enumerate_3x3([normalize(n + k) for k in range(9)])
    square = instantiate(offset_grid(3), n)
    assert [list(row) for row in square.entries] in result.squares
    assert result.total_count == 8


@pytest.mark.parametrize("t", [1, -5, Fraction(1, 2), GaussianRational(1, 1)])
def test_translation_equivariance(t):
    base = enumerate_3x3(range(9))
    shifted = enumerate_3x3([k + t for k in range(9)])
    assert shifted.total_count == base.total_count
    assert shifted.squares == [shift(square, t) for square in base.squares]


def test_every_square_verifies():
    cells = [parse_scalar(x) for x in ("1/2+i", "3/2+i", "5/2+i", "7/2+i", "9/2+i", "11/2+i", "13/2+i", "15/2+i", "17/2+i")]
    result = enumerate_3x3(cells)
    assert result.total_count == 8
    for square in result.squares:
        report = verify_magic(square)
        assert report.is_magic
        assert report.common_constant == scalar_sum(cells) * Fraction(1, 3)


def test_result_dumps_literals():
    payload = enumerate_3x3(["0", "1/2", "1", "3/2", "2", "5/2", "3", "7/2", "4"]).model_dump(mode="json")
    assert payload["inputs"][1] == "1/2"
    assert payload["total_count"] == 8
    assert all(isinstance(x, str) for square in payload["squares"] for row in square for x in row)


# -----------------------------
# Symmetry orbits
# -----------------------------
def test_orbit_of_the_offset_grid():
    orbit = symmetry_orbit(offset_grid(3))
    assert len(orbit) == len(set(orbit)) == 8
    assert orbit[0] == tuple(tuple(row) for row in offset_grid(3).tolist())


def test_orbit_of_a_constant_grid():
    assert symmetry_orbit([[0] * 3] * 3) == [((0, 0, 0),) * 3]


def test_transpose_shares_the_orbit():
    grid = offset_grid(3).tolist()
    transposed = [list(row) for row in zip(*grid)]
    assert set(symmetry_orbit(transposed)) == set(symmetry_orbit(grid))
