import csv
import io
import json
import logging
from pathlib import Path
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, TextIO

from pydantic import BaseModel, Field, PrivateAttr, ValidationError, field_validator, model_validator

from components.construct.construct import (
    MagicSquare,
    build_square_a,
    check_order,
    construction_stages,
    instantiate,
    magic_constant,
    offset_grid,
    offset_row,
)
from components.numeric.scalar import Scalar, format_scalar, normalize, parse_scalar

# -----------------------------
# Logging
# -----------------------------
logger = logging.getLogger(__name__)

# -----------------------------
# Configuration
# -----------------------------
FORMATS = ("text", "csv", "json")
DOCUMENT_FORMATS = ("csv", "json")
COLUMN_GAP = "  "
OFFSET_SYMBOL = "N"
PROGRESS_EVERY = 1000
# numpy int64 headroom for N + k before falling back to Python ints
INT64_SAFE = 2 ** 62

RowsFactory = Callable[[], Iterable[Sequence[Optional[str]]]]


class DocumentError(ValueError):
    pass


# -----------------------------
# Documents
# -----------------------------
class SquareDocument(BaseModel):
    order: int = Field(..., ge=1, description="side length s")
    offset: Optional[str] = Field(None, description="the offset N as a scalar literal")
    cells: List[List[str]] = Field(..., description="s rows of s scalar literals")
    magic_constant: Optional[str] = Field(None, description="the common line sum as a scalar literal")

    _scalars: List[List[Scalar]] = PrivateAttr(default_factory=list)

    @field_validator("offset", "magic_constant")
    @classmethod
    def _literal(cls, value: Optional[str]) -> Optional[str]:
        if value is not None:
            parse_scalar(value)
        return value

    @model_validator(mode="after")
    def _consistent(self) -> "SquareDocument":
        if len(self.cells) != self.order or any(len(row) != self.order for row in self.cells):
            raise ValueError(f"cells must be {self.order}x{self.order}")
        self._scalars = [[parse_scalar(value) for value in row] for row in self.cells]
        if self.offset is not None and self.magic_constant is not None and self.order % 2 == 1:
            expected = magic_constant(self.order, parse_scalar(self.offset))
            if parse_scalar(self.magic_constant) != expected:
                raise ValueError(
                    f"magic_constant {self.magic_constant} does not match offset {self.offset} "
                    f"(expected {format_scalar(expected)})"
                )
        return self

    def scalar_cells(self) -> List[List[Scalar]]:
        return [list(row) for row in self._scalars]

    def scalar_offset(self) -> Optional[Scalar]:
        return None if self.offset is None else parse_scalar(self.offset)


def _detect_format(path: Path) -> str:
    return "json" if path.suffix.lower() == ".json" else "csv"


def read_document(path, fmt: Optional[str] = None) -> SquareDocument:
    """Load a SquareDocument (json) or a bare grid of scalar literals (csv)"""
    path = Path(path)
    fmt = fmt or _detect_format(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise DocumentError(f"cannot read {path}: {e}")

    try:
        if fmt == "json":
            return SquareDocument.model_validate_json(text)
        rows = [
            [value.strip() for value in row]
            for row in csv.reader(io.StringIO(text))
            if any(value.strip() for value in row)
        ]
        return SquareDocument(order=len(rows), cells=rows)
    except (ValidationError, ValueError) as e:
        raise DocumentError(f"invalid {fmt} square in {path}: {e}")


# -----------------------------
# Row sources
# -----------------------------
def _offset_rows(s: int, n: Scalar) -> Iterator[List[str]]:
    """Rows of N + B recomputed one at a time from the closed form"""
    fast = isinstance(n, int) and abs(n) < INT64_SAFE - s * s
    for i in range(s):
        row = offset_row(s, i)
        if fast:
            yield [str(v) for v in (row + n).tolist()]
        else:
            yield [format_scalar(normalize(n + k)) for k in row.tolist()]
        if i and i % PROGRESS_EVERY == 0:
            logger.info(f"→ {i}/{s} rows written")


def square_rows(square: MagicSquare) -> RowsFactory:
    return lambda: ([format_scalar(x) for x in row] for row in square.entries)


def generated_rows(s: int, n: Scalar, stream: bool) -> RowsFactory:
    """Row source for N + B; streaming keeps one row in memory at a time"""
    s = check_order(s)
    if stream:
        return lambda: _offset_rows(s, n)
    return square_rows(instantiate(offset_grid(s), n))


def symbolic_rows(s: int, stage: str = "complete") -> RowsFactory:
    """Cells rendered 'N+k' like the printed tables; unfilled stage cells are None"""
    stages = {st.name: st.cells for st in construction_stages(s)}
    if stage not in stages:
        raise ValueError(f"unknown stage {stage!r}, expected one of {sorted(stages)}")
    cells = stages[stage]
    return lambda: ([None if k is None else f"{OFFSET_SYMBOL}+{k}" for k in row] for row in cells)


def symbolic_constant(s: int) -> str:
    base = magic_constant(s, 0)
    if base == 0:
        return OFFSET_SYMBOL if s == 1 else f"{s}{OFFSET_SYMBOL}"
    return f"{format_scalar(base)}+{s}{OFFSET_SYMBOL}"


def base_rows(s: int) -> RowsFactory:
    cells = build_square_a(s).tolist()
    return lambda: ([str(k) for k in row] for row in cells)


# -----------------------------
# Writers
# -----------------------------
def _write_text(out: TextIO, rows: RowsFactory, footer: Optional[str]) -> None:
    widths: List[int] = []
    for row in rows():
        if not widths:
            widths = [0] * len(row)
        for c, value in enumerate(row):
            widths[c] = max(widths[c], len(value or ""))
    for row in rows():
        out.write(COLUMN_GAP.join((value or "").rjust(widths[c]) for c, value in enumerate(row)).rstrip() + "\n")
    if footer:
        out.write(f"constant = {footer}\n")


def _write_csv(out: TextIO, rows: RowsFactory) -> None:
    writer = csv.writer(out, lineterminator="\n")
    for row in rows():
        writer.writerow(["" if value is None else value for value in row])


def _write_json(out: TextIO, rows: RowsFactory, header: Dict[str, object]) -> None:
    fields = "".join(f"{json.dumps(key)}: {json.dumps(value)}, " for key, value in header.items())
    out.write("{" + fields + '"cells": [\n')
    first = True
    for row in rows():
        if not first:
            out.write(",\n")
        out.write(json.dumps(list(row)))
        first = False
    out.write("\n]}\n")


def write_grid(
    out: TextIO,
    rows: RowsFactory,
    fmt: str,
    header: Optional[Dict[str, object]] = None,
    footer: Optional[str] = None,
) -> None:
    """Emit a grid as right-aligned text (with a constant footer), bare csv, or a json document"""
    if fmt == "text":
        _write_text(out, rows, footer)
    elif fmt == "csv":
        _write_csv(out, rows)
    elif fmt == "json":
        _write_json(out, rows, header or {})
    else:
        raise ValueError(f"unknown format {fmt!r}, expected one of {FORMATS}")


def square_header(s: int, n: Scalar) -> Dict[str, object]:
    return {"order": s, "offset": format_scalar(n), "magic_constant": format_scalar(magic_constant(s, n))}
