"""
🔭 ZoomWall Segments — the σ → η → ζ zoom

  σ(t)  joins plain Gieseker stability for L₀ and L₁.
  η(s)  zooms into one σ-wall t̄ with twists B_j(s) built from powers of L_j.
  ζ(r)  zooms into one η-wall s̄ with zero-c₁ twists C_{ji} chosen so the
        segment is uniform.

Each constructor checks the closed-form Chern data of what it built and
raises InvariantViolation when an identity fails.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

from sympy import Rational

from chow import GradedClass
from exact import LinScalar
from sheaves import FormalBundleSum
from stability import StabilitySegment

logger = logging.getLogger("zoomwall.segments")


@dataclass(frozen=True, eq=False)
class SigmaSegment:
    """σ(t) = (L₀, L₁; (1−t)/vol L₀, t/vol L₁)"""

    L0: GradedClass
    L1: GradedClass
    segment: StabilitySegment
    coefficients: tuple[LinScalar, LinScalar]
    generic: Optional[bool] = None  # c₀ₖ ≠ c₁ₖ for k = 0, 1 (threefolds only)
    labels: tuple[str, str] = ("L0", "L1")

    @property
    def model(self):
        return self.L0.model

    @property
    def polarisations(self) -> tuple[GradedClass, GradedClass]:
        return (self.L0, self.L1)

    def sigma(self, j: int, t) -> Rational:
        """σ_j(t)"""
        return self.coefficients[j].at(t)


@dataclass(frozen=True, eq=False)
class EtaSegment:
    """η(s) = (L₀, L₁; B₀(s), B₁(s)) around the σ-wall t̄."""

    parent: SigmaSegment
    t_bar: Rational
    t0: Rational
    t1: Rational
    a: int
    exponents: dict  # (j, i) -> a·σ_j(t_i)/σ_j(t̄)
    twists: tuple[FormalBundleSum, FormalBundleSum]
    segment: StabilitySegment

    @property
    def model(self):
        return self.parent.model


@dataclass(frozen=True, eq=False)
class ZetaSegment:
    """ζ(r) = (L₀, L₁; D₀(r), D₁(r)) around the η-wall s̄."""

    parent: EtaSegment
    s_bar: Rational
    s0: Rational
    s1: Rational
    lam: Rational
    b: Rational
    solution: "AlphaBetaSolution"
    C: dict  # (j, i) -> FormalBundleSum
    D: tuple[FormalBundleSum, FormalBundleSum]
    segment: StabilitySegment
    gauge: Rational = Rational(0)
    provenance: dict = field(default_factory=dict)

    @property
    def model(self):
        return self.parent.model

    @property
    def r_tilde(self) -> Rational:
        """The r with (1−r)s₀ + r s₁ = s̄."""
        return (self.s_bar - self.s0) / (self.s1 - self.s0)


from .twists import AlphaBetaSolution, make_zero_c1_twist, solve_alphabeta, alphabeta_lambda_min  # noqa: E402
from .sigma import coefficient_table, make_sigma  # noqa: E402
from .eta import (  # noqa: E402
    UCoefficients,
    default_flanks,
    epsilon,
    epsilon_generic,
    eta_u_coefficients,
    hit_closed_form,
    make_eta,
    minimal_divisibility_a,
)
from .zeta import (  # noqa: E402
    DeltaReport,
    FinalTwistReport,
    delta_identity_check,
    final_twist_properties,
    make_zeta,
    wall_point_check,
    zeta_inputs,
)
from .search import SearchOutcome, doubling_search, search_a, search_b  # noqa: E402
