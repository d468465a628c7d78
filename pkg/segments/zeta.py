"""
ζ(r): zooming into one η-wall s̄.

    D_j(r) = B_j(s̄) ⊗ ((1−r)·C_{j0} + r·C_{j1})

Each C_{ji} has rank 1, c₁ = 0 and ch₂ = Σ_k α_{jik}·c₁(L_k)², with the α
taken from the alphabeta solve. That keeps rank and c₁ of D_j fixed and
makes ζ uniform.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

from sympy import Rational, expand

from chow import intersection
from errors import InputError, InvariantViolation
from exact import LinScalar, R, as_poly, rat
from sheaves import SheafType, hilb_difference, tensor_sum
from stability import (
    EquivalenceReport,
    Polarisation,
    StabilitySegment,
    SubsheafFamily,
    difference_vector,
    equivalent_between,
    is_uniform,
)

from . import EtaSegment, ZetaSegment
from .eta import eta_u_coefficients
from .twists import alphabeta_lambda_min, make_zero_c1_twist, solve_alphabeta

logger = logging.getLogger("zoomwall.segments.zeta")


def _q(eta: EtaSegment, s_bar, s0, s1) -> list[list[Rational]]:
    """q_{ji} = a(s_i − s̄)(σ_j(t₁) − σ_j(t₀))/σ_j(t̄)"""
    seg = eta.parent
    return [
        [eta.a * (s_i - s_bar) * (seg.sigma(j, eta.t1) - seg.sigma(j, eta.t0)) / seg.sigma(j, eta.t_bar)
         for s_i in (s0, s1)]
        for j in (0, 1)
    ]


def _c(eta: EtaSegment) -> list[list[Rational]]:
    """c[i][k] = ∫ c₁(L_i)·c₁(L_k)²"""
    Ls = eta.parent.polarisations
    return [[intersection(Ls[i], Ls[k], Ls[k]) for k in (0, 1)] for i in (0, 1)]


def zeta_inputs(eta: EtaSegment, s_bar, s0, s1) -> dict:
    """The q, r and c data the alphabeta solve needs."""
    s_bar, s0, s1 = rat(s_bar), rat(s0), rat(s1)
    if not 0 < s0 < s_bar < s1 < 1:
        raise InputError(f"Need 0 < s₀ < s̄ < s₁ < 1, got s₀={s0}, s̄={s_bar}, s₁={s1}")
    r = [eta.parent.sigma(j, eta.t_bar) for j in (0, 1)]
    return {"q": _q(eta, s_bar, s0, s1), "r": r, "c": _c(eta)}


def make_zeta(eta: EtaSegment, s_bar, s0, s1, lam=None, b=1, gauge=0) -> ZetaSegment:
    """Without λ, use λ_min + 1. Every closed-form property is verified before returning."""
    if eta.model.dim != 3:
        raise InputError(f"ζ needs a threefold, model has dimension {eta.model.dim}")
    s_bar, s0, s1 = rat(s_bar), rat(s0), rat(s1)
    data = zeta_inputs(eta, s_bar, s0, s1)
    if lam is None:
        lam = alphabeta_lambda_min(data["q"], data["r"], data["c"], gauge) + 1
    solution = solve_alphabeta(data["q"], data["r"], data["c"], lam, b, gauge)

    seg = eta.parent
    model = eta.model
    C, exponents = {}, {}
    for j in (0, 1):
        for i in (0, 1):
            parts = []
            for k, (L, label) in enumerate(zip(seg.polarisations, seg.labels)):
                twist = make_zero_c1_twist(Rational(1, 2), solution.alpha[(j, i, k)], L, label)
                exponents[(j, i, k)] = int(twist.terms[0].power)
                parts.append(twist)
            C[(j, i)] = parts[0] + parts[1]

    D = []
    for j in (0, 1):
        base = eta.twists[j].at(s_bar)
        moving = C[(j, 0)].scaled(LinScalar(1, -1, "r")) + C[(j, 1)].scaled(LinScalar(0, 1, "r"))
        D.append(tensor_sum(base, moving))
    pairs = tuple(Polarisation(L, Dj, label) for L, Dj, label in zip(seg.polarisations, D, seg.labels))
    segment = StabilitySegment(pairs, "r", f"ζ[s̄={s_bar}]")

    provenance = {
        "lambda": solution.lam,
        "lambda_min": solution.lambda_min,
        "b": solution.b,
        "alpha": dict(solution.alpha),
        "n": exponents,
        "q": data["q"],
        "c": data["c"],
    }
    zeta = ZetaSegment(eta, s_bar, s0, s1, solution.lam, solution.b, solution, C, tuple(D), segment,
                       rat(gauge), provenance)

    report = final_twist_properties(zeta)
    if not report.ok:
        raise InvariantViolation(f"ζ at s̄={s_bar} fails {report.failed}", report.details)
    if not segment.is_normalized:
        raise InvariantViolation(f"ζ at s̄={s_bar} is not normalized: mass {segment.mass()}")
    uniformity = is_uniform(segment, "strict")
    if not uniformity.uniform:
        raise InvariantViolation(f"ζ at s̄={s_bar} is not strict-uniform", uniformity.witness)

    logger.info(f"🔭 ζ built at s̄={s_bar}: flanks ({s0}, {s1}), λ={solution.lam}, b={solution.b}")
    return zeta


# ═══════════════════════════════════════════════════════════
# PROPERTY CHECKS
# ═══════════════════════════════════════════════════════════

@dataclass(frozen=True)
class FinalTwistReport:
    properties: dict  # name -> bool
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.properties.values())

    @property
    def failed(self) -> list[str]:
        return [name for name, ok in self.properties.items() if not ok]


def final_twist_properties(zeta: ZetaSegment) -> FinalTwistReport:
    """
    (1) rank(D_j) = rank(B_j(s̄)), c₁(D_j) = c₁(B_j(s̄));
    (2) Σ_j ch₂(D_j(i)) = b·Σ_j rank(B_j(s̄))(λ + q_{ji})·c₁(L_j)² + Σ_j ch₂(B_j(s̄)) for i = 0, 1;
    (3) Σ_j c₁(L_j)·ch₂(D_j(r)) does not depend on r;
    plus strict positivity of every D_j coefficient on (0,1).
    """
    eta = zeta.parent
    seg = eta.parent
    Ls = seg.polarisations
    B = [eta.twists[j].at(zeta.s_bar) for j in (0, 1)]
    q = zeta.provenance["q"]
    properties, details = {}, {}

    rank_ok = all(
        zeta.D[j].rank().is_constant and zeta.D[j].rank().constant == B[j].rank().at(0) for j in (0, 1)
    )
    c1_ok = all(zeta.D[j].c1() == B[j].c1() for j in (0, 1))
    properties["rank and c1 fixed"] = rank_ok and c1_ok

    for i in (0, 1):
        lhs = sum((zeta.D[j].at(i).ch2() for j in (0, 1)), zeta.model.zero())
        rhs = sum(
            ((Ls[j] * Ls[j]) * (zeta.b * B[j].rank().at(0) * (zeta.lam + q[j][i])) + B[j].ch2() for j in (0, 1)),
            zeta.model.zero(),
        )
        properties[f"ch2 at r={i}"] = lhs == rhs
        if lhs != rhs:
            details[f"ch2 at r={i}"] = {"lhs": repr(lhs), "rhs": repr(rhs)}

    pairing = sum((Ls[j] * zeta.D[j].ch2() for j in (0, 1)), zeta.model.zero())
    properties["L·ch2 constant in r"] = pairing.diff(R).is_zero
    if not properties["L·ch2 constant in r"]:
        details["L·ch2 constant in r"] = {"pairing": repr(pairing)}

    # linear in r: positive on (0,1) iff nonnegative at both ends and not both zero
    properties["positive coefficients"] = all(
        min(term.coefficient.at(0), term.coefficient.at(1)) >= 0
        and max(term.coefficient.at(0), term.coefficient.at(1)) > 0
        for Dj in zeta.D for term in Dj.terms
    )
    return FinalTwistReport(properties, details)


@dataclass(frozen=True)
class DeltaReport:
    ok: bool
    direct: str
    closed_form: str
    from_vector: str


def delta_identity_check(zeta: ZetaSegment, F: SheafType, tau: SheafType) -> DeltaReport:
    """
    δ(r) three ways: from the C_{ji} ch₂ data, from
    b[λu₁ + (1−r)u₂(s₀) + r·u₂(s₁) − u₂(s̄)], and as the third ζ entry minus u₃(s̄).
    """
    eta = zeta.parent
    ranks = [eta.parent.sigma(j, eta.t_bar) for j in (0, 1)]
    difference = hilb_difference(F, tau, 1)

    moving = sum(
        (zeta.C[(j, 0)].ch2() * (ranks[j] * (1 - R)) + zeta.C[(j, 1)].ch2() * (ranks[j] * R) for j in (0, 1)),
        zeta.model.zero(),
    )
    direct = expand((difference * moving).integrate())

    u = eta_u_coefficients(eta, F, tau)
    closed = expand(zeta.b * (
        zeta.lam * u.u1 + (1 - R) * u.u2.eval(zeta.s0) + R * u.u2.eval(zeta.s1) - u.u2.eval(zeta.s_bar)
    ))

    vector = difference_vector(F, tau, zeta.segment)
    from_vector = expand(vector.entries[2] - u.u3.eval(zeta.s_bar))

    ok = expand(direct - closed) == 0 and expand(from_vector - closed) == 0
    report = DeltaReport(ok, str(as_poly(direct, R).as_expr()), str(closed), str(from_vector))
    if not ok:
        raise InvariantViolation(
            f"δ identity fails for '{F.name}': direct {direct}, closed form {closed}, vector {from_vector}",
            {"member": F.name},
        )
    return report


def wall_point_check(eta: EtaSegment, zeta: ZetaSegment, fam: SubsheafFamily) -> EquivalenceReport:
    """η(s̄) against ζ(r̃) with (1−r̃)s₀ + r̃s₁ = s̄."""
    return equivalent_between(eta.segment, zeta.s_bar, zeta.segment, zeta.r_tilde, fam)
