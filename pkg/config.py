"""
⚙️ ZoomWall settings

Read from the environment (and .env via python-dotenv, loaded in main.py).
Nothing here is read at import time, so tests can monkeypatch freely.
"""

import os
import logging

from errors import InputError
from exact import rat

logger = logging.getLogger("zoomwall.config")


def _int_env(name: str, default: int, minimum: int = 0) -> int:
    raw = os.getenv(name, str(default))
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"{name} must be an integer, got '{raw}'")
    if value < minimum:
        raise InputError(f"{name} must be ≥ {minimum}, got {value}")
    return value


def get_search_limits() -> dict:
    """Caps for the doubling searches over a and b, and the nudge depth."""
    return {
        "cap_exponent": _int_env("ZOOMWALL_SEARCH_CAP_EXP", 20),
        "nudge_depth": _int_env("ZOOMWALL_NUDGE_DEPTH", 16),
    }


def get_workers() -> int:
    return _int_env("ZOOMWALL_WORKERS", 1, minimum=1)


def get_schedule_margin():
    margin = rat(os.getenv("ZOOMWALL_SCHEDULE_MARGIN", "1/100"))
    if not 0 < margin < rat("1/2"):
        raise InputError(f"ZOOMWALL_SCHEDULE_MARGIN must lie in (0, 1/2), got {margin}")
    return margin


def get_plot_samples() -> int:
    return _int_env("ZOOMWALL_PLOT_SAMPLES", 40, minimum=1)


def get_models_dir() -> str:
    return os.getenv("ZOOMWALL_MODELS_DIR", "models")


def get_log_level() -> str:
    return os.getenv("ZOOMWALL_LOG_LEVEL", "WARNING").upper()
