"""
σ(t): the straight segment between two polarisations.
"""

import logging

from chow import GradedClass, intersection, require_divisor
from errors import InputError
from exact import LinScalar
from sheaves import BundleTerm, FormalBundleSum
from stability import Polarisation, StabilitySegment

from . import SigmaSegment

logger = logging.getLogger("zoomwall.segments.sigma")


def _coefficient_table(L0: GradedClass, L1: GradedClass) -> dict:
    """c_{ik} = ∫ c₁(L_i)·c₁(L_k)²"""
    Ls = (L0, L1)
    return {(i, k): intersection(Ls[i], Ls[k], Ls[k]) for i in (0, 1) for k in (0, 1)}


def make_sigma(L0: GradedClass, L1: GradedClass, labels: tuple[str, str] = ("L0", "L1")) -> SigmaSegment:
    """
    σ₀(t) = (1−t)/vol L₀, σ₁(t) = t/vol L₁. At t = 0 and t = 1 this is plain
    Gieseker stability for L₀ and L₁.
    """
    for L, label in zip((L0, L1), labels):
        require_divisor(L)
        if L.model.volume(L) <= 0:
            raise InputError(f"{label} has volume {L.model.volume(L)}; need positive volume", {"bundle": label})
    model = L0.model
    if L1.model is not model:
        raise InputError("L0 and L1 live in different models")

    v0, v1 = model.volume(L0), model.volume(L1)
    sigma0 = LinScalar(1 / v0, -1 / v0, "t")
    sigma1 = LinScalar(0, 1 / v1, "t")
    pairs = tuple(
        Polarisation(L, FormalBundleSum(model, (BundleTerm(coefficient, model.zero(), "O"),), "t"), label)
        for L, coefficient, label in zip((L0, L1), (sigma0, sigma1), labels)
    )
    segment = StabilitySegment(pairs, "t", "σ")

    generic = None
    if model.dim == 3:
        c = _coefficient_table(L0, L1)
        generic = all(c[(0, k)] != c[(1, k)] for k in (0, 1))
        if not generic:
            logger.warning(
                f"⚠️ {labels[0]}, {labels[1]} fail the genericity condition "
                f"(c00={c[(0, 0)]}, c10={c[(1, 0)]}, c01={c[(0, 1)]}, c11={c[(1, 1)]}); "
                f"ζ construction will be blocked"
            )

    logger.info(f"🔭 σ built: σ0(t) = {sigma0}, σ1(t) = {sigma1}")
    return SigmaSegment(L0, L1, segment, (sigma0, sigma1), generic, labels)


def coefficient_table(sigma: SigmaSegment) -> dict:
    return _coefficient_table(sigma.L0, sigma.L1)
