import argparse
import json
import logging
import sys
from typing import List, Optional, TextIO

from components.construct.construct import STAGES, InvalidOrderError, check_order, magic_constant
from components.numeric.scalar import ScalarParseError, format_scalar, normalize, parse_scalar
from components.oracle.oracle import ArityError, enumerate_3x3
from components.render.render import (
    DOCUMENT_FORMATS,
    FORMATS,
    OFFSET_SYMBOL,
    DocumentError,
    base_rows,
    generated_rows,
    read_document,
    square_header,
    symbolic_constant,
    symbolic_rows,
    write_grid,
)
from components.verify.verify import ShapeError, is_normal, offsets_of, verify_magic, verify_structure

# -----------------------------
# Logging
# -----------------------------
logger = logging.getLogger(__name__)
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

# -----------------------------
# Exit codes
# -----------------------------
EXIT_OK = 0
EXIT_NOT_MAGIC = 1
EXIT_USAGE = 2

USAGE_ERRORS = (InvalidOrderError, ScalarParseError, DocumentError, ArityError, ShapeError)


# -----------------------------
# Commands
# -----------------------------
def cmd_generate(args: argparse.Namespace, out: TextIO) -> int:
    s = check_order(args.order)
    n = parse_scalar(args.offset)
    logger.info(f"→ Generating order {s} square for N = {format_scalar(n)}{' (streaming)' if args.stream else ''}")
    write_grid(
        out,
        generated_rows(s, n, stream=args.stream),
        args.format,
        header=square_header(s, n),
        footer=format_scalar(magic_constant(s, n)),
    )
    logger.info(f"✓ Order {s} square written")
    return EXIT_OK


def cmd_table(args: argparse.Namespace, out: TextIO) -> int:
    s = check_order(args.order)
    header = {"order": s, "symbol": OFFSET_SYMBOL, "symbolic_constant": symbolic_constant(s), "stage": args.stage}
    write_grid(out, symbolic_rows(s, args.stage), args.format, header=header, footer=symbolic_constant(s))
    return EXIT_OK


def cmd_base(args: argparse.Namespace, out: TextIO) -> int:
    s = check_order(args.order)
    write_grid(out, base_rows(s), args.format, header={"order": s})
    return EXIT_OK


def cmd_constant(args: argparse.Namespace, out: TextIO) -> int:
    s = check_order(args.order)
    n = parse_scalar(args.offset)
    out.write(format_scalar(magic_constant(s, n)) + "\n")
    if args.show_terms:
        out.write(", ".join(format_scalar(normalize(n + k)) for k in range(s * s)) + "\n")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, out: TextIO) -> int:
    document = read_document(args.input, args.format)
    cells = document.scalar_cells()
    offset = document.scalar_offset()
    logger.info(f"→ Verifying order {document.order} square from {args.input}")

    report = verify_magic(cells)
    failures = list(report.failures)
    offset_check = None
    structural = None
    if offset is not None and document.order % 2 == 1:
        expected = magic_constant(document.order, offset)
        matches = report.common_constant is not None and report.common_constant == expected
        offset_check = {
            "offset": format_scalar(offset),
            "expected_constant": format_scalar(expected),
            "matches": matches,
        }
        if not matches:
            failures.append(f"constant: expected {format_scalar(expected)} for offset {format_scalar(offset)}")
        offsets = offsets_of(cells, offset)
        if offsets is not None:
            structural = verify_structure(offsets)
    elif offset is not None:
        failures.append(f"offset: no constant check for offset {format_scalar(offset)}, order {document.order} is even")

    report = report.model_copy(update={"structural": structural, "failures": failures})
    payload = report.model_dump(mode="json")
    payload["is_normal"] = is_normal(cells)
    payload["offset_check"] = offset_check
    out.write(json.dumps(payload, indent=2) + "\n")

    if report.is_magic:
        logger.info("✓ Square is magic")
        return EXIT_OK
    for failure in report.failures:
        logger.error(f"✗ {failure}")
    return EXIT_NOT_MAGIC


def cmd_oracle(args: argparse.Namespace, out: TextIO) -> int:
    cells = [value.strip() for value in args.cells.split(",")]
    result = enumerate_3x3([parse_scalar(value) for value in cells])
    if args.format == "json":
        out.write(result.model_dump_json(indent=2) + "\n")
        return EXIT_OK
    out.write(f"total={result.total_count} classes={result.symmetry_class_count}\n")
    if args.full:
        for square in result.squares:
            out.write("\n")
            write_grid(out, lambda sq=square: ([format_scalar(x) for x in row] for row in sq), "text")
    return EXIT_OK


# -----------------------------
# Parser
# -----------------------------
def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oddmagic",
        description="Generate and verify odd-order magic squares shifted by an exact offset N",
    )
    parser.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="logging threshold for messages on stderr",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    generate = commands.add_parser("generate", help="emit N + B for an odd order")
    generate.add_argument("--order", type=int, required=True)
    generate.add_argument("--offset", default="0", help="scalar literal, e.g. 33, -5, 1/2, 1+i")
    generate.add_argument("--format", default="text", choices=FORMATS)
    generate.add_argument("--stream", action="store_true", help="write row by row from the closed form")
    generate.set_defaults(handler=cmd_generate)

    table = commands.add_parser("table", help="emit the offset grid as N+k cells")
    table.add_argument("--order", type=int, required=True)
    table.add_argument("--format", default="text", choices=FORMATS)
    table.add_argument("--stage", default="complete", choices=STAGES, help="partial grid after a construction stage")
    table.set_defaults(handler=cmd_table)

    base = commands.add_parser("base", help="emit square A, 0..s²-1 row by row")
    base.add_argument("--order", type=int, required=True)
    base.add_argument("--format", default="text", choices=FORMATS)
    base.set_defaults(handler=cmd_base)

    constant = commands.add_parser("constant", help="print the magic constant s(s²-1)/2 + sN")
    constant.add_argument("--order", type=int, required=True)
    constant.add_argument("--offset", default="0")
    constant.add_argument("--show-terms", action="store_true", help="also print N, N+1, ..., N+s²-1")
    constant.set_defaults(handler=cmd_constant)

    verify = commands.add_parser("verify", help="check a csv grid or json document for the magic property")
    verify.add_argument("--input", required=True)
    verify.add_argument("--format", default=None, choices=DOCUMENT_FORMATS, help="defaults to the file suffix")
    verify.set_defaults(handler=cmd_verify)

    oracle = commands.add_parser("oracle", help="enumerate every 3x3 magic arrangement of nine cells")
    oracle.add_argument("--cells", required=True, help="nine comma-separated scalar literals")
    oracle.add_argument("--full", action="store_true", help="list every arrangement")
    oracle.add_argument("--format", default="text", choices=("text", "json"))
    oracle.set_defaults(handler=cmd_oracle)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level, format=LOG_FORMAT)
    try:
        return args.handler(args, sys.stdout)
    except USAGE_ERRORS as e:
        logger.error(f"✗ {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
