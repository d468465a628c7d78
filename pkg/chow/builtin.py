"""
📦 Built-in models: P², P¹×P¹, P¹×P², P¹×P¹×P¹

Each Todd class is the product of the factor Todd classes
(Todd(P¹) = 1 + h, Todd(P²) = 1 + (3/2)h + h²).
"""

import logging
from functools import lru_cache

from errors import InputError
from . import NumericalModel

logger = logging.getLogger("zoomwall.chow.builtin")


# ── Model data (same shape as a .model file) ──

BUILTIN_MODELS = {
    "p2": {
        "dim": 2,
        "basis": [["1"], ["h"], ["h^2"]],
        "products": {("h", "h"): {"h^2": 1}},
        "todd": {"1": 1, "h": "3/2", "h^2": 1},
    },
    "p1p1": {
        "dim": 2,
        "basis": [["1"], ["h1", "h2"], ["h1h2"]],
        "products": {
            ("h1", "h1"): {},
            ("h1", "h2"): {"h1h2": 1},
            ("h2", "h2"): {},
        },
        "todd": {"1": 1, "h1": 1, "h2": 1, "h1h2": 1},
    },
    "p1p2": {
        "dim": 3,
        "basis": [["1"], ["h1", "h2"], ["h1h2", "h2^2"], ["h1h2^2"]],
        "products": {
            ("h1", "h1"): {},
            ("h1", "h2"): {"h1h2": 1},
            ("h2", "h2"): {"h2^2": 1},
            ("h1", "h1h2"): {},
            ("h1", "h2^2"): {"h1h2^2": 1},
            ("h2", "h1h2"): {"h1h2^2": 1},
            ("h2", "h2^2"): {},
        },
        "todd": {"1": 1, "h1": 1, "h2": "3/2", "h1h2": "3/2", "h2^2": 1, "h1h2^2": 1},
    },
    "p1p1p1": {
        "dim": 3,
        "basis": [["1"], ["h1", "h2", "h3"], ["h1h2", "h1h3", "h2h3"], ["h1h2h3"]],
        "products": {
            ("h1", "h2"): {"h1h2": 1},
            ("h1", "h3"): {"h1h3": 1},
            ("h2", "h3"): {"h2h3": 1},
            ("h1", "h2h3"): {"h1h2h3": 1},
            ("h2", "h1h3"): {"h1h2h3": 1},
            ("h3", "h1h2"): {"h1h2h3": 1},
        },
        "todd": {
            "1": 1, "h1": 1, "h2": 1, "h3": 1,
            "h1h2": 1, "h1h3": 1, "h2h3": 1, "h1h2h3": 1,
        },
    },
}


def builtin_model(name: str) -> NumericalModel:
    """One shared instance per name, so classes from two loads still multiply."""
    return _load(name.lower().replace("×", "x").replace("x", ""))


@lru_cache(maxsize=None)
def _load(key: str) -> NumericalModel:
    if key not in BUILTIN_MODELS:
        raise InputError(
            f"Unknown built-in model '{key}'. Available: {', '.join(BUILTIN_MODELS)}"
        )
    data = BUILTIN_MODELS[key]
    model = NumericalModel(key, data["dim"], data["basis"], data["products"], data["todd"])
    logger.debug(f"📦 Built-in model '{key}' loaded")
    return model
