"""
Predicates on segments: uniformity, openness, equivalence, γ-slope.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

from sympy import Rational, expand

from exact import rat, sign_left_of, sign_right_of
from errors import InputError
from sheaves import SheafType, generic_sheaf

from . import (
    Stability,
    StabilitySegment,
    SubsheafFamily,
    difference_vector,
    family_signs,
    reduced,
    require_normalized,
)

logger = logging.getLogger("zoomwall.stability.predicates")

MODES = ("strict", "difference")


# ── Uniformity ──

@dataclass(frozen=True)
class UniformityReport:
    uniform: bool
    mode: str
    witness: Optional[dict] = None

    def __str__(self):
        if self.uniform:
            return f"uniform ({self.mode})"
        return f"not uniform ({self.mode}): {self.witness['detail']}"


def is_uniform(seg: StabilitySegment, mode: str = "difference") -> UniformityReport:
    """
    Coefficients a_{d−1}..a₁ of the reduced polynomial of a generic E must not
    move with the parameter. strict: entirely. difference: their ch(E)-dependent
    parts only, which is what comparisons p_F − p_E see.
    """
    if mode not in MODES:
        raise InputError(f"Unknown uniformity mode '{mode}'. Use one of: {', '.join(MODES)}")
    require_normalized(seg)
    E, unknowns = generic_sheaf(seg.model)
    vector = reduced(E, seg)
    d = seg.dim
    zero_ch = {x: 0 for x in unknowns}

    for i, entry in enumerate(vector.entries[: d - 1], start=1):
        slope = expand(entry.diff(seg.symbol))
        moving = slope if mode == "strict" else expand(slope - slope.subs(zero_ch))
        if moving != 0:
            power = d - i
            detail = f"k^{power}-coefficient slope {moving}"
            if mode == "difference":
                detail += " depends on ch(E)"
            witness = {"index": i, "k_power": power, "slope": str(moving), "detail": detail}
            logger.info(f"⚖️ {seg.label} not {mode}-uniform at k^{power}")
            return UniformityReport(False, mode, witness)
    return UniformityReport(True, mode)


# ── Equivalence ──

@dataclass(frozen=True)
class EquivalenceReport:
    equivalent: bool
    witnesses: tuple = ()
    left: dict = field(default_factory=dict)
    right: dict = field(default_factory=dict)

    def __str__(self):
        if self.equivalent:
            return "equivalent"
        return "not equivalent, witness " + ", ".join(self.witnesses)


def equivalent_between(seg_a: Stability, v_a, seg_b: Stability, v_b, fam: SubsheafFamily) -> EquivalenceReport:
    """Every family member compares the same way at seg_a(v_a) and seg_b(v_b)."""
    left = family_signs(fam, seg_a, v_a)
    right = family_signs(fam, seg_b, v_b)
    witnesses = tuple(name for name in left if left[name] != right[name])
    return EquivalenceReport(not witnesses, witnesses, left, right)


def equivalent_at(seg: Stability, fam: SubsheafFamily, v1, v2) -> EquivalenceReport:
    for v in (v1, v2):
        if not 0 <= rat(v) <= 1:
            raise InputError(f"Parameter value {v} outside [0,1]")
    return equivalent_between(seg, v1, seg, v2, fam)


# ── Openness ──

@dataclass(frozen=True)
class OpennessReport:
    open: bool
    witnesses: tuple = ()  # (member, endpoint)

    def __str__(self):
        if self.open:
            return "open"
        return "not open, witness " + ", ".join(f"{name} at {end}" for name, end in self.witnesses)


def _cascade(polys, side) -> int:
    for p in polys:
        s = side(p)
        if s:
            return s
    return 0


def is_open(seg: StabilitySegment, fam: SubsheafFamily) -> OpennessReport:
    """σ(0) ≡ σ(ε) and σ(1) ≡ σ(1−ε) for all small ε, member by member."""
    require_normalized(seg)
    witnesses = []
    for F in fam.usable():
        vector = difference_vector(F, fam.ambient, seg)
        polys = vector.polys()
        if vector.sign(0) != _cascade(polys, lambda p: sign_right_of(p, 0)):
            witnesses.append((F.name, 0))
        if vector.sign(1) != _cascade(polys, lambda p: sign_left_of(p, 1)):
            witnesses.append((F.name, 1))
    return OpennessReport(not witnesses, tuple(witnesses))


# ── γ-slope ──

def slope(E: SheafType, sigma: Stability, at=None) -> Rational:
    """μ_γ(E) = ∫ c₁(E)·γ / rank(E) with γ = Σ_j rank(B_j)·c₁(L_j)^{d−1}."""
    model = sigma.model
    if isinstance(sigma, StabilitySegment):
        if at is None:
            raise InputError("Slope on a segment needs a parameter value")
        sigma = sigma.at(at)
    gamma = sum(
        (p.L ** (model.dim - 1) * p.B.rank().expr for p in sigma.pairs), model.zero()
    )
    return expand((E.ch.part(1) * gamma).integrate() / E.rank)
