"""Shared fixtures: built-in models, the worked threefold instance, the surface instance."""

import random
from pathlib import Path

import pytest

from chow.builtin import builtin_model
from segments import make_eta, make_sigma, make_zeta
from sheaves import SheafType, line_bundle
from stability import SubsheafFamily

ROOT = Path(__file__).resolve().parent.parent
MODELS = ROOT / "models"
PROBLEMS = ROOT / "problems"


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture(autouse=True)
def _quiet_env(monkeypatch):
    for name in ("ZOOMWALL_WORKERS", "ZOOMWALL_SEARCH_CAP_EXP", "ZOOMWALL_NUDGE_DEPTH",
                 "ZOOMWALL_SCHEDULE_MARGIN", "ZOOMWALL_PLOT_SAMPLES", "ZOOMWALL_MODELS_DIR"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.setenv("ZOOMWALL_MODELS_DIR", str(MODELS))


@pytest.fixture
def p1p2():
    return builtin_model("p1p2")


@pytest.fixture
def p1p1():
    return builtin_model("p1p1")


@pytest.fixture
def p2():
    return builtin_model("p2")


# ── P¹×P²: L0 = O(1,1), L1 = O(1,2), F = (1, 3h1−2h2, 0, 0) inside rank-2 τ ──

@pytest.fixture
def worked(p1p2):
    tau = SheafType.from_parts(p1p2, "tau", 2)
    F = SheafType.from_parts(p1p2, "F", 1, [{"h1": 3, "h2": -2}])
    L0, L1 = p1p2.divisor([1, 1]), p1p2.divisor([1, 2])
    return {
        "model": p1p2,
        "tau": tau,
        "F": F,
        "L0": L0,
        "L1": L1,
        "fam": SubsheafFamily(tau, (F,)),
        "sigma": make_sigma(L0, L1),
    }


@pytest.fixture
def worked_eta(worked):
    return make_eta(worked["sigma"], "1/2", "1/4", "3/4", 2, worked["fam"])


@pytest.fixture
def worked_zeta(worked_eta):
    return make_zeta(worked_eta, "1/2", "1/4", "3/4")


# ── P¹×P¹: L0 = O(1,2), L1 = O(2,1), L̄ = O(1,1), F = O(1,−1) ──

@pytest.fixture
def surface(p1p1):
    tau = SheafType.from_parts(p1p1, "tau", 2)
    F = line_bundle(p1p1, p1p1.divisor([1, -1]), "F")
    return {
        "model": p1p1,
        "tau": tau,
        "F": F,
        "L0": p1p1.divisor([1, 2]),
        "L1": p1p1.divisor([2, 1]),
        "Lbar": p1p1.divisor([1, 1]),
        "fam": SubsheafFamily(tau, (F,)),
    }


@pytest.fixture
def run(capsys):
    """main.main(argv) -> (exit code, stdout, stderr)"""
    import main

    def _run(*argv):
        code = main.main([str(a) for a in argv])
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return _run
