"""
η(s): zooming into one σ-wall t̄.

    B_j(s) = σ_j(t̄)·( s·L_j^{aσ_j(t₁)/σ_j(t̄)} + (1−s)·L_j^{aσ_j(t₀)/σ_j(t̄)} )

rank(B_j(s)) is σ_j(t̄) for every s, so the E-dependent part of the
k²-coefficient no longer moves; at s = 0, 1 the comparison reproduces σ(t₀)
and σ(t₁) once a is large.
"""

import logging
from dataclasses import dataclass
from math import lcm
from typing import Callable, Optional

from sympy import Poly, Rational, expand

from errors import InputError, InvariantViolation
from exact import LinScalar, S, T, as_poly, rat
from sheaves import BundleTerm, FormalBundleSum, SheafType, hilb_difference
from stability import Polarisation, StabilitySegment, SubsheafFamily, difference_vector
from walls import representative, segment_walls

from . import EtaSegment, SigmaSegment

logger = logging.getLogger("zoomwall.segments.eta")


def _sigma_at(seg: SigmaSegment, j: int, point):
    """σ_j at a rational or at a symbolic point such as s·t₁ + (1−s)·t₀."""
    coefficient = seg.coefficients[j]
    return expand(coefficient.constant + coefficient.slope * point)


def _check_flank_order(t_bar, t0, t1) -> tuple[Rational, Rational, Rational]:
    t_bar, t0, t1 = rat(t_bar), rat(t0), rat(t1)
    if not 0 < t0 < t_bar < t1 < 1:
        raise InputError(
            f"Need 0 < t₀ < t̄ < t₁ < 1, got t₀={t0}, t̄={t_bar}, t₁={t1}",
            {"t_bar": str(t_bar), "t0": str(t0), "t1": str(t1)},
        )
    return t_bar, t0, t1


# ── Exponents ──

def _ratios(seg: SigmaSegment, t_bar, t0, t1) -> dict:
    return {(j, i): seg.sigma(j, t) / seg.sigma(j, t_bar) for j in (0, 1) for i, t in enumerate((t0, t1))}


def minimal_divisibility_a(seg: SigmaSegment, t_bar, t0, t1) -> int:
    """Least a with a·σ_j(t_i)/σ_j(t̄) a positive integer for all i, j."""
    t_bar, t0, t1 = _check_flank_order(t_bar, t0, t1)
    return lcm(*(int(ratio.q) for ratio in _ratios(seg, t_bar, t0, t1).values()))


# ── Construction ──

def make_eta(seg: SigmaSegment, t_bar, t0, t1, a: int, fam: Optional[SubsheafFamily] = None) -> EtaSegment:
    """
    Build η around t̄. With a family, t̄ must be one of its σ-walls and the
    flanks must sit in the chambers on either side of it.
    """
    t_bar, t0, t1 = _check_flank_order(t_bar, t0, t1)
    if int(a) != a or a <= 0:
        raise InputError(f"a must be a positive integer, got {a}")
    a = int(a)
    modulus = minimal_divisibility_a(seg, t_bar, t0, t1)
    if a % modulus:
        raise InputError(
            f"a = {a} is not a multiple of {modulus}; a·σ_j(t_i)/σ_j(t̄) would not be integral",
            {"a": a, "modulus": modulus},
        )
    if fam is not None:
        _check_flank_chambers(seg, fam, t_bar, t0, t1)

    model = seg.model
    ratios = _ratios(seg, t_bar, t0, t1)
    exponents = {key: a * ratio for key, ratio in ratios.items()}
    twists = []
    for j, (L, label) in enumerate(zip(seg.polarisations, seg.labels)):
        weight = seg.sigma(j, t_bar)
        e0, e1 = exponents[(j, 0)], exponents[(j, 1)]
        twists.append(FormalBundleSum(model, (
            BundleTerm(LinScalar(0, weight, "s"), L * e1, f"{label}^{e1}", e1),
            BundleTerm(LinScalar(weight, -weight, "s"), L * e0, f"{label}^{e0}", e0),
        ), "s"))

    pairs = tuple(Polarisation(L, B, label) for L, B, label in zip(seg.polarisations, twists, seg.labels))
    segment = StabilitySegment(pairs, "s", f"η[t̄={t_bar}]")
    if not segment.is_normalized:
        raise InvariantViolation(f"η around t̄={t_bar} is not normalized: mass {segment.mass()}")

    eta = EtaSegment(seg, t_bar, t0, t1, a, {k: int(v) for k, v in exponents.items()}, tuple(twists), segment)
    _check_closed_forms(eta)
    logger.info(f"🔭 η built at t̄={t_bar}: flanks ({t0}, {t1}), a={a}, exponents {eta.exponents}")
    return eta


def _check_flank_chambers(seg: SigmaSegment, fam: SubsheafFamily, t_bar, t0, t1):
    chambers = segment_walls(seg.segment, fam)
    if t_bar not in chambers.values:
        raise InputError(
            f"t̄ = {t_bar} is not a σ-wall of the family (walls {[str(v) for v in chambers.values]})",
            {"t_bar": str(t_bar)},
        )
    left, right = chambers.neighbours(t_bar)
    for name, flank, (lo, hi) in (("t0", t0, left), ("t1", t1, right)):
        if not lo < flank < hi:
            raise InputError(
                f"{name} = {flank} is not inside the chamber ({lo}, {hi}) next to t̄ = {t_bar}",
                {name: str(flank), "chamber": [str(lo), str(hi)]},
            )


def _check_closed_forms(eta: EtaSegment):
    """rank, c₁ and ch₂ of B_j(s) against their closed forms."""
    seg, a = eta.parent, eta.a
    moving = S * eta.t1 + (1 - S) * eta.t0
    for j, (B, L) in enumerate(zip(eta.twists, seg.polarisations)):
        weight = seg.sigma(j, eta.t_bar)
        s0, s1 = seg.sigma(j, eta.t0), seg.sigma(j, eta.t1)
        expected = {
            "rank": (B.rank(), LinScalar.const(weight, "s")),
            "c1": (B.c1(), L * (a * _sigma_at(seg, j, moving))),
            "ch2": (B.ch2(), (L * L) * (a ** 2 / (2 * weight) * (S * s1 ** 2 + (1 - S) * s0 ** 2))),
        }
        for name, (got, want) in expected.items():
            same = got == want if name != "rank" else (got.constant, got.slope) == (want.constant, want.slope)
            if not same:
                raise InvariantViolation(
                    f"{name}(B_{j}(s)) = {got} differs from its closed form {want}",
                    {"j": j, "quantity": name},
                )


# ═══════════════════════════════════════════════════════════
# u-COEFFICIENTS
# ═══════════════════════════════════════════════════════════

def hit_closed_form(seg: SigmaSegment, F: SheafType, tau: SheafType, i: int) -> Poly:
    """h_i(t) = hilb_i(F,τ)·Σ_j σ_j(t)·c₁(L_j)^{d−i}, as a polynomial in t."""
    d = seg.model.dim
    if not 1 <= i <= d:
        raise InputError(f"Index {i} outside 1..{d}")
    difference = hilb_difference(F, tau, i)
    total = sum(
        ((difference * L ** (d - i)).integrate() * seg.coefficients[j].expr
         for j, L in enumerate(seg.polarisations)),
        Rational(0),
    )
    return as_poly(total, T)


def _on_flank_line(p: Poly, eta: EtaSegment) -> Poly:
    """p(s·t₁ + (1−s)·t₀) as a polynomial in s."""
    return as_poly(p.as_expr().subs(T, S * eta.t1 + (1 - S) * eta.t0), S)


def epsilon(eta: EtaSegment, F: SheafType, tau: SheafType) -> Poly:
    """ε(s) = ½·hilb₁(F,τ)·Σ_j (sσ_j(t₁)² + (1−s)σ_j(t₀)²)/σ_j(t̄)·c₁(L_j)²"""
    seg = eta.parent
    difference = hilb_difference(F, tau, 1)
    total = Rational(0)
    for j, L in enumerate(seg.polarisations):
        s0, s1, weight = seg.sigma(j, eta.t0), seg.sigma(j, eta.t1), seg.sigma(j, eta.t_bar)
        total += (difference * L * L).integrate() * (S * s1 ** 2 + (1 - S) * s0 ** 2) / weight
    return as_poly(total / 2, S)


@dataclass(frozen=True)
class UCoefficients:
    u1: Rational
    u2: Poly
    u3: Poly
    epsilon: Poly

    def entries(self) -> tuple:
        return (self.u1, self.u2.as_expr(), self.u3.as_expr())


def eta_u_coefficients(eta: EtaSegment, F: SheafType, tau: SheafType) -> UCoefficients:
    """
    u₁ = h₁(t̄), u₂(s) = h₂(t̄) + a·h₁(st₁+(1−s)t₀),
    u₃(s) = h₃(t̄) + a·h₂(st₁+(1−s)t₀) + a²·ε(s),
    checked against the difference vector of η itself.
    """
    seg = eta.parent
    if seg.model.dim != 3:
        raise InputError(f"u-coefficients are defined for threefolds, model has dimension {seg.model.dim}")
    h = {i: hit_closed_form(seg, F, tau, i) for i in (1, 2, 3)}
    eps = epsilon(eta, F, tau)
    a = eta.a
    u1 = rat(h[1].eval(eta.t_bar))
    u2 = as_poly(h[2].eval(eta.t_bar) + a * _on_flank_line(h[1], eta).as_expr(), S)
    u3 = as_poly(
        h[3].eval(eta.t_bar) + a * _on_flank_line(h[2], eta).as_expr() + a ** 2 * eps.as_expr(), S
    )
    u = UCoefficients(u1, u2, u3, eps)

    vector = difference_vector(F, tau, eta.segment)
    for i, (closed, direct) in enumerate(zip(u.entries(), vector.entries), start=1):
        if expand(closed - direct) != 0:
            raise InvariantViolation(
                f"u{i} for '{F.name}' disagrees with the η difference vector: {closed} vs {direct}",
                {"member": F.name, "index": i},
            )
    return u


# ═══════════════════════════════════════════════════════════
# FLANKS
# ═══════════════════════════════════════════════════════════

def _epsilon_form(seg: SigmaSegment, t_bar, F: SheafType, tau: SheafType) -> Poly:
    """Σ_j σ_j(x)²/σ_j(t̄)·hilb₁(F,τ)·c₁(L_j)² as a polynomial in the flank x."""
    difference = hilb_difference(F, tau, 1)
    total = sum(
        ((difference * L * L).integrate() * seg.coefficients[j].expr ** 2 / seg.sigma(j, t_bar)
         for j, L in enumerate(seg.polarisations)),
        Rational(0),
    )
    return as_poly(total, T)


def epsilon_generic(seg: SigmaSegment, t_bar, fam: SubsheafFamily) -> Callable:
    """Predicate on a flank: ε at that end is nonzero unless the member's ε-form vanishes."""
    t_bar = rat(t_bar)
    forms = [p for p in (_epsilon_form(seg, t_bar, F, fam.ambient) for F in fam.usable()) if not p.is_zero]

    def generic(flank) -> bool:
        return all(p.eval(rat(flank)) != 0 for p in forms)

    return generic


def default_flanks(seg: SigmaSegment, t_bar, fam: SubsheafFamily) -> tuple[Rational, Rational, int]:
    """Chamber representatives either side of t̄, nudged for ε-genericity. Returns (t₀, t₁, nudges)."""
    t_bar = rat(t_bar)
    chambers = segment_walls(seg.segment, fam)
    if t_bar not in chambers.values:
        raise InputError(f"t̄ = {t_bar} is not a σ-wall of the family", {"t_bar": str(t_bar)})
    left, right = chambers.neighbours(t_bar)
    generic = epsilon_generic(seg, t_bar, fam) if seg.model.dim == 3 else None
    t0 = representative(*left, predicate=generic)
    t1 = representative(*right, predicate=generic)
    return t0.value, t1.value, t0.nudges + t1.nudges
