"""
🧱 ZoomWall — walls, chambers and flip schedules for multi-Gieseker stability

Exact arithmetic end to end: every number is a rational, every wall a
rational root, every check a sign computation. The σ → η → ζ zoom turns a
variation of polarisation into a chain of uniform segments, each with a
Thaddeus-flip schedule, and records every check it ran in a ledger.

    python main.py validate models/p1p2.model
    python main.py chi --model p1p2 --sheaf O --L "O(1,1)" --k 3
    python main.py plan --problem problems/worked.prob --out plan.json
    python main.py replan --verify plan.json

Exit status: 0 success, 1 a check failed, 2 bad input.
"""

import argparse
import json
import logging
import sys
from typing import Optional

from dotenv import load_dotenv

from cli import EXIT_INPUT_ERROR, plans, plot, reports, zoom
from config import get_log_level
from errors import InvariantViolation, ZoomWallError

# Load environment
load_dotenv()

logger = logging.getLogger("zoomwall")

VERSION = "1.0.0"


def _configure_logging(verbosity: int):
    if verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        level = getattr(logging, get_log_level(), logging.WARNING)
    logging.basicConfig(
        level=level,
        format="%(asctime)s | %(name)s | %(message)s",
        datefmt="%H:%M:%S",
        stream=sys.stderr,
    )
    logging.getLogger().setLevel(level)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zoomwall",
        description="Exact multi-Gieseker stability: walls, chambers, σ → η → ζ zoom and flip schedules.",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug")
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    subparsers.required = True

    # ── Mount subcommands ──
    reports.register(subparsers)
    zoom.register(subparsers)
    plans.register(subparsers)
    plot.register(subparsers)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)
    logger.debug(f"🧱 ZoomWall {VERSION}: {args.command}")

    try:
        return args.func(args)
    except ZoomWallError as e:
        if isinstance(e, InvariantViolation):
            logger.error(f"💥 Invariant violated: {e.detail}")
        print(f"error: {e.detail}", file=sys.stderr)
        if e.witness:
            print(json.dumps(e.witness, indent=2, sort_keys=True, default=str), file=sys.stderr)
        return e.exit_code
    except Exception as e:
        logger.exception(f"💥 Unexpected failure in '{args.command}': {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
