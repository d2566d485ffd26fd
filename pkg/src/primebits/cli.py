"""Command-line entry point: ``primebits {reproduce,analyze,export-histogram}``."""

from __future__ import annotations

import argparse
import os
import sys
from decimal import Decimal, InvalidOperation
from pathlib import Path
from typing import Sequence

from primebits import __version__
from primebits.battery import (
    PAPER_GROUP2_BOUND,
    GroupSpec,
    build_group,
    compare_groups,
    paper_groups,
    run_battery,
)
from primebits.fips import BLOCK_BITS
from primebits.prime_source import PrimeSourceError, primes_up_to
from primebits.report import poker_csv, report_json, runs_csv, summary_table
from primebits.transform import first_difference, histogram_of, second_difference

DEFAULT_HISTOGRAM_LIMIT = 10**7


def exact_int(text: str) -> int:
    """Parse '10000000', '1e7' or '1.5e3' to an exact integer."""
    try:
        value = Decimal(text.replace("_", ""))
    except InvalidOperation:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value.is_finite() or value != value.to_integral_value():
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(value)


def _positive(text: str) -> int:
    n = exact_int(text)
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text!r}")
    return n


def _block_bits(text: str) -> int:
    n = _positive(text)
    if n % 4:
        raise argparse.ArgumentTypeError(f"block bits must be a multiple of 4: {text!r}")
    return n


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out-dir", type=Path, help="directory for report files")
    p.add_argument("--format", choices=("text", "json"), default="text",
                   help="stdout format (default: text)")
    p.add_argument("--workers", type=_positive, default=None, help="threads for sieving and testing")


def get_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="primebits",
        description="FIPS 140-2 randomness tests on the sign-encoded second differences of the primes",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    rep = sub.add_parser("reproduce", help="run the two-group experiment")
    rep.add_argument("--start-bound", type=exact_int, default=PAPER_GROUP2_BOUND,
                     help="lower bound for the second group (default: 1e8)")
    rep.add_argument("--blocks", type=_positive, default=5)
    rep.add_argument("--block-bits", type=_block_bits, default=BLOCK_BITS)
    _add_common(rep)

    ana = sub.add_parser("analyze", help="test one group from a chosen start")
    ana.add_argument("--start-bound", type=exact_int, default=None,
                     help="first prime >= this bound starts the group (default: the first prime)")
    ana.add_argument("--blocks", type=_positive, default=5)
    ana.add_argument("--block-bits", type=_block_bits, default=BLOCK_BITS)
    _add_common(ana)

    hist = sub.add_parser("export-histogram", help="histogram of second differences of primes below a limit")
    hist.add_argument("--limit", type=exact_int, default=DEFAULT_HISTOGRAM_LIMIT)
    hist.add_argument("--bin-width", type=_positive, default=None, help="default 2")
    hist.add_argument("--out-dir", type=Path, help="write histogram_D.csv here instead of stdout")
    return parser


def write_outputs(out_dir: Path, files: dict[str, str]) -> None:
    """Write every file or none of them."""
    created_dir = not out_dir.exists()
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    try:
        for name, content in files.items():
            target = out_dir / name
            tmp = out_dir / f".{name}.tmp"
            tmp.write_text(content)
            written.append(tmp)
            os.replace(tmp, target)
            written[-1] = target
    except OSError:
        for path in written:
            path.unlink(missing_ok=True)
        if created_dir:
            try:
                out_dir.rmdir()
            except OSError:
                pass
        raise


def _emit(args, groups, similarity) -> None:
    text = summary_table(groups, similarity)
    doc = report_json(groups, similarity)
    if args.out_dir is not None:
        write_outputs(args.out_dir, {
            "report.json": doc,
            "summary.txt": text,
            "poker.csv": poker_csv(groups),
            "runs.csv": runs_csv(groups),
        })
    sys.stdout.write(doc if args.format == "json" else text)


def cmd_reproduce(args) -> int:
    specs = paper_groups(args.start_bound, args.blocks, args.block_bits)
    groups = [run_battery(build_group(s, workers=args.workers), workers=args.workers) for s in specs]
    _emit(args, groups, compare_groups(*groups))
    return 0


def cmd_analyze(args) -> int:
    spec = GroupSpec(args.start_bound, args.blocks, args.block_bits, name="G")
    group = run_battery(build_group(spec, workers=args.workers), workers=args.workers)
    _emit(args, [group], None)
    return 0


def cmd_export_histogram(args) -> int:
    stream = primes_up_to(args.limit)
    if len(stream) < 3:
        diffs = []
    else:
        diffs = second_difference(first_difference(stream))
    content = histogram_of(diffs, args.bin_width).to_delimited()
    if args.out_dir is not None:
        write_outputs(args.out_dir, {"histogram_D.csv": content})
    else:
        sys.stdout.write(content)
    return 0


COMMANDS = {
    "reproduce": cmd_reproduce,
    "analyze": cmd_analyze,
    "export-histogram": cmd_export_histogram,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = get_arg_parser()
    args = parser.parse_args(argv)
    if getattr(args, "start_bound", None) is not None and args.start_bound < 2:
        parser.error("--start-bound must be >= 2")
    try:
        return COMMANDS[args.command](args)
    except OSError as exc:
        print(f"primebits: cannot write output: {exc}", file=sys.stderr)
        return 1
    except PrimeSourceError as exc:
        print(f"primebits: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
