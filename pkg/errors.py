"""
🧱 ZoomWall errors

Every failure a command can hit is one of three kinds:
  InputError          the files or flags are wrong            (exit 2)
  CheckFailure        a search, solver or check came up empty (exit 1)
  InvariantViolation  an identity that must hold did not      (exit 1)

Library code raises; only main.py turns these into exit codes.
"""

from typing import Any, Optional


class ZoomWallError(Exception):
    """Base error with a human detail line and an optional witness payload."""

    exit_code = 2

    def __init__(self, detail: str, witness: Optional[dict[str, Any]] = None):
        super().__init__(detail)
        self.detail = detail
        self.witness = witness or {}

    def to_dict(self) -> dict[str, Any]:
        return {"error": type(self).__name__, "detail": self.detail, "witness": self.witness}


class InputError(ZoomWallError):
    """Malformed input: unknown names, bad numbers, violated preconditions."""

    exit_code = 2


class CheckFailure(ZoomWallError):
    """A constructive step failed for this input (cap hit, positivity, ...)."""

    exit_code = 1


class InvariantViolation(CheckFailure):
    """An exact identity failed. This means a bug, not bad input."""


class PositivityError(CheckFailure):
    """The alphabeta solve produced a non-positive coefficient."""

    def __init__(self, detail: str, lambda_min, witness: Optional[dict[str, Any]] = None):
        super().__init__(detail, witness)
        self.lambda_min = lambda_min
