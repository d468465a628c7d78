"""
🖥️ ZoomWall CLI — one module per subcommand family

  reports.py   validate, chi, walls, chambers
  zoom.py      segment {sigma|eta|zeta}, verify {uniform|open|equiv}, schedule
  plans.py     plan, surface-plan, replan
  plot.py      plot
  formats.py   .model / .prob schemas and loaders

Each module exposes register(subparsers); main.py mounts them. Handlers
print a deterministic report to stdout and return an exit status.
"""

import argparse
import json
import logging

from exact import rat

logger = logging.getLogger("zoomwall.cli")

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2


def out(line: str = ""):
    print(line)


def out_json(payload: dict):
    print(json.dumps(payload, indent=2, sort_keys=True))


def rational_arg(text: str):
    """argparse type for exact numbers."""
    try:
        return rat(text)
    except Exception as e:
        raise argparse.ArgumentTypeError(str(e))


def add_problem_arg(parser: argparse.ArgumentParser, required: bool = True):
    parser.add_argument("--problem", "-p", required=required, help="problem file (.prob)")


def exit_status(passed: bool) -> int:
    return EXIT_OK if passed else EXIT_CHECK_FAILED
