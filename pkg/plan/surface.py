"""
Surfaces: one uniform segment is enough.

    σ(t) = (L̄, L̄; (t/vol L̄)·L₁^a, ((1−t)/vol L̄)·L₀^a)

with L̄ an integral class on the wall separating L₀ and L₁. The k-coefficient
difference is hilb₁(F,τ)·c₁(L̄)/vol L̄ for every t, so the segment is
difference-uniform and its flip schedule is emitted directly.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

from sympy import Rational

from chow import GradedClass, require_divisor
from config import get_schedule_margin
from errors import CheckFailure, InputError
from exact import LinScalar
from sheaves import BundleTerm, FormalBundleSum
from stability import Polarisation, StabilitySegment, SubsheafFamily, is_open, is_uniform
from walls import segment_walls

from . import FlipSchedule, Ledger, default_window, flip_schedule

logger = logging.getLogger("zoomwall.plan.surface")


@dataclass
class SurfacePlan:
    segment: StabilitySegment
    a: int
    walls: list[Rational]
    ledger: Ledger
    schedule: Optional[FlipSchedule] = None
    error: Optional[dict] = None
    labels: tuple = field(default=("L0", "L1", "Lbar"))

    @property
    def complete(self) -> bool:
        return self.ledger.complete and self.error is None

    @property
    def status(self) -> str:
        return "plan complete" if self.complete else "plan incomplete"


def surface_segment(L0: GradedClass, L1: GradedClass, Lbar: GradedClass, a: int,
                    labels: tuple[str, str, str] = ("L0", "L1", "Lbar")) -> StabilitySegment:
    model = Lbar.model
    if model.dim != 2:
        raise InputError(f"The surface plan needs a surface, model has dimension {model.dim}")
    for L in (L0, L1, Lbar):
        require_divisor(L)
    if any(c.q != 1 for c in model.divisor_coords(Lbar)):
        raise InputError(f"{labels[2]} = {Lbar!r} is not integral", {"bundle": labels[2]})
    if int(a) != a or a <= 0:
        raise InputError(f"a must be a positive integer, got {a}")
    vol = model.volume(Lbar)
    if vol <= 0:
        raise InputError(f"{labels[2]} has volume {vol}; need positive volume")

    a = int(a)
    towards_one = FormalBundleSum(model, (
        BundleTerm(LinScalar(0, 1 / vol, "t"), L1 * a, f"{labels[1]}^{a}", Rational(a)),
    ), "t")
    towards_zero = FormalBundleSum(model, (
        BundleTerm(LinScalar(1 / vol, -1 / vol, "t"), L0 * a, f"{labels[0]}^{a}", Rational(a)),
    ), "t")
    pairs = (
        Polarisation(Lbar, towards_one, labels[2]),
        Polarisation(Lbar, towards_zero, labels[2]),
    )
    return StabilitySegment(pairs, "t", f"σ[{labels[2]}, a={a}]")


def surface_plan(L0: GradedClass, L1: GradedClass, Lbar: GradedClass, fam: SubsheafFamily, a: int,
                 labels: tuple[str, str, str] = ("L0", "L1", "Lbar")) -> SurfacePlan:
    segment = surface_segment(L0, L1, Lbar, a, labels)
    ledger = Ledger()
    subject = segment.label

    uniform = is_uniform(segment, "difference")
    ledger.record("uniform(difference)", subject, uniform.uniform, str(uniform))
    openness = is_open(segment, fam)
    ledger.record("open", subject, openness.open, str(openness))

    walls = segment_walls(segment, fam).values
    plan = SurfacePlan(segment, int(a), walls, ledger, labels=labels)
    try:
        plan.schedule = flip_schedule(segment, fam, *default_window(walls, get_schedule_margin()))
        ledger.record("schedule", subject, True, " ; ".join(plan.schedule.describe()))
    except CheckFailure as e:
        plan.error = e.to_dict()
        ledger.record("schedule", subject, False, e.detail)
    logger.info(f"🗺️ surface {plan.status}: walls {[str(w) for w in walls]}")
    return plan
