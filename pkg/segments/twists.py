"""
Twist builders with prescribed Chern data.

make_zero_c1_twist:  α(Aⁿ + A⁻ⁿ) + (λ−2α)·O_X with α = μ/n²
                     → rank λ, c₁ = 0, ch₂ = μ·c₁(A)²
solve_alphabeta:     the eight weights α_{jik} > 0 with
                       Σ_j r_j α_{jik} = r_k·b·(λ + q_{ki})            (i = 0, 1)
                       r₀c₀ₖ(α₀₁ₖ − α₀₀ₖ) = r₁c₁ₖ(α₁₀ₖ − α₁₁ₖ)
"""

import logging
from dataclasses import dataclass, field
from math import isqrt

from sympy import Matrix, Rational

from chow import GradedClass, require_divisor
from errors import CheckFailure, InputError, InvariantViolation, PositivityError
from exact import LinScalar, rat
from sheaves import BundleTerm, FormalBundleSum

logger = logging.getLogger("zoomwall.segments.twists")


def make_zero_c1_twist(lam, mu, A: GradedClass, label: str = "A") -> FormalBundleSum:
    """rank λ, c₁ = 0, ch₂ = μ·c₁(A)², with the smallest n such that μ/n² < λ/2."""
    lam, mu = rat(lam), rat(mu)
    if lam <= 0 or mu <= 0:
        raise InputError(f"Twist needs λ > 0 and μ > 0, got λ={lam}, μ={mu}")
    require_divisor(A)
    bound = 2 * mu / lam
    n = isqrt(int(bound.p // bound.q)) + 1
    alpha = mu / n ** 2
    model = A.model
    terms = (
        BundleTerm(LinScalar.const(alpha), A * n, f"{label}^{n}", Rational(n)),
        BundleTerm(LinScalar.const(alpha), A * (-n), f"{label}^{-n}", Rational(-n)),
        BundleTerm(LinScalar.const(lam - 2 * alpha), model.zero(), "O"),
    )
    logger.debug(f"Twist λ={lam}, μ={mu} on {label}: n={n}, α={alpha}")
    return FormalBundleSum(model, terms)


# ═══════════════════════════════════════════════════════════
# THE α/β LINEAR SYSTEM
# ═══════════════════════════════════════════════════════════

@dataclass(frozen=True)
class AlphaBetaSolution:
    alpha: dict  # (j, i, k) -> α_{jik}
    beta: dict  # (j, i, k) -> β_{ji} in the system for k
    lam: Rational
    b: Rational
    lambda_min: Rational
    gauge: Rational = Rational(0)
    checks: dict = field(default_factory=dict)

    def ordered(self, k: int) -> tuple:
        """(α₀₀ₖ, α₀₁ₖ, α₁₀ₖ, α₁₁ₖ)"""
        return tuple(self.alpha[(j, i, k)] for j in (0, 1) for i in (0, 1))


def _validate_inputs(q, r, c):
    r0, r1 = (rat(x) for x in r)
    if r0 <= 0 or r1 <= 0:
        raise InputError(f"Ranks r₀={r0}, r₁={r1} must be positive")
    for k in (0, 1):
        if rat(c[0][k]) == rat(c[1][k]):
            raise CheckFailure(
                f"alphabeta precondition fails for k={k}: c0{k} = c1{k} = {c[0][k]} "
                f"(L0, L1 not generic)",
                {"k": k, "c0k": str(c[0][k]), "c1k": str(c[1][k])},
            )
    return r0, r1


def _beta(q, r, c, k: int, gauge) -> dict:
    """Solve for β with β₀₀ fixed to the gauge value."""
    r0, r1 = (rat(x) for x in r)
    rk = (r0, r1)[k]
    c0k, c1k = rat(c[0][k]), rat(c[1][k])
    b00 = rat(gauge)
    b10 = (rk * rat(q[k][0]) - r0 * b00) / r1
    system = Matrix([[r0, r1], [r0 * c0k, r1 * c1k]])
    rhs = Matrix([rk * rat(q[k][1]), r1 * c1k * b10 + r0 * c0k * b00])
    b01, b11 = system.LUsolve(rhs)
    return {(0, 0): b00, (0, 1): rat(b01), (1, 0): b10, (1, 1): rat(b11)}


def alphabeta_lambda_min(q, r, c, gauge=0) -> Rational:
    """Infimum of the λ making every α_{jik} positive (α > 0 ⇔ λ > λ_min)."""
    r0, r1 = _validate_inputs(q, r, c)
    rs = (r0, r1)
    bound = Rational(0)
    for k in (0, 1):
        beta = _beta(q, r, c, k, gauge)
        for (j, i), value in beta.items():
            bound = max(bound, -2 * rs[j] * value / rs[k])
    return bound


def solve_alphabeta(q, r, c, lam, b, gauge=0) -> AlphaBetaSolution:
    """
    q[j][i], r = (r₀, r₁), c[i][k]. Canonical gauge β₀₀ = 0; then
    α_{jik} = b·(β_{ji} + λ·r_k/(2r_j)). Every constraint is re-checked by substitution.
    """
    r0, r1 = _validate_inputs(q, r, c)
    lam, b = rat(lam), rat(b)
    if b <= 0:
        raise InputError(f"b must be positive, got {b}")
    rs = (r0, r1)

    alpha, beta, checks = {}, {}, {}
    for k in (0, 1):
        solved = _beta(q, r, c, k, gauge)
        for (j, i), value in solved.items():
            beta[(j, i, k)] = value
            alpha[(j, i, k)] = b * (value + lam * rs[k] / (2 * rs[j]))

        c0k, c1k = rat(c[0][k]), rat(c[1][k])
        for i in (0, 1):
            lhs = r0 * alpha[(0, i, k)] + r1 * alpha[(1, i, k)]
            rhs = rs[k] * b * (lam + rat(q[k][i]))
            checks[f"sum k={k} i={i}"] = lhs == rhs
        lhs = r0 * c0k * (alpha[(0, 1, k)] - alpha[(0, 0, k)])
        rhs = r1 * c1k * (alpha[(1, 0, k)] - alpha[(1, 1, k)])
        checks[f"balance k={k}"] = lhs == rhs

    failed = [name for name, ok in checks.items() if not ok]
    if failed:
        raise InvariantViolation(f"alphabeta solution fails {', '.join(failed)}", {"failed": failed})

    lambda_min = alphabeta_lambda_min(q, r, c, gauge)
    bad = [key for key, value in alpha.items() if value <= 0]
    if bad:
        raise PositivityError(
            f"λ = {lam} leaves {len(bad)} weight(s) non-positive; need λ > {lambda_min}",
            lambda_min,
            {"lambda": str(lam), "lambda_min": str(lambda_min), "weights": [list(key) for key in bad]},
        )
    logger.info(f"🧮 alphabeta solved: λ={lam}, b={b}, λ_min={lambda_min}")
    return AlphaBetaSolution(alpha, beta, lam, b, lambda_min, rat(gauge), checks)
