"""
🗺️ ZoomWall Plan — flip schedules and the σ → η → ζ variation pipeline

A FlipSchedule lists the anchors t′ = t₀ < t₁ < … < t_N = t″ of a uniform
segment (its walls in between) and one intermediate point per interval.
A VariationPlan is the full zoom tree with a ledger of every check run on
it; the plan is complete when every required ledger entry passed.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

from sympy import Rational

from errors import CheckFailure, InputError
from exact import rat
from stability import StabilitySegment, SubsheafFamily, is_uniform
from walls import segment_walls

logger = logging.getLogger("zoomwall.plan")


# ═══════════════════════════════════════════════════════════
# FLIP SCHEDULES
# ═══════════════════════════════════════════════════════════

@dataclass(frozen=True)
class FlipSchedule:
    segment: str
    anchors: tuple[Rational, ...]
    intermediates: tuple[Rational, ...]

    def __post_init__(self):
        if any(a >= b for a, b in zip(self.anchors, self.anchors[1:])):
            raise InputError(f"Schedule anchors for {self.segment} are not increasing")
        for t, (lo, hi) in zip(self.intermediates, zip(self.anchors, self.anchors[1:])):
            if not lo < t < hi:
                raise InputError(f"Intermediate {t} is not inside ({lo}, {hi})")

    @property
    def intervals(self) -> list[tuple[Rational, Rational]]:
        return list(zip(self.anchors, self.anchors[1:]))

    def describe(self) -> list[str]:
        """One line per Thaddeus flip: M(t_i) ← M(t′_i) → M(t_{i+1})."""
        return [
            f"M({lo}) <- M({mid}) -> M({hi})"
            for (lo, hi), mid in zip(self.intervals, self.intermediates)
        ]


def schedule_from_walls(label: str, wall_values, start, end) -> FlipSchedule:
    start, end = rat(start), rat(end)
    if not 0 < start < end < 1:
        raise InputError(f"Need 0 < t′ < t″ < 1, got t′={start}, t″={end}")
    inside = sorted(v for v in wall_values if start < v < end)
    anchors = (start, *inside, end)
    intermediates = tuple((lo + hi) / 2 for lo, hi in zip(anchors, anchors[1:]))
    return FlipSchedule(label, anchors, intermediates)


def flip_schedule(seg: StabilitySegment, fam: SubsheafFamily, start, end) -> FlipSchedule:
    """Anchors {t′} ∪ walls in (t′, t″) ∪ {t″}; only for difference-uniform segments."""
    report = is_uniform(seg, "difference")
    if not report.uniform:
        raise CheckFailure(f"{seg.label} is not uniform; no flip schedule", report.witness)
    schedule = schedule_from_walls(seg.label, segment_walls(seg, fam).values, start, end)
    logger.info(f"🗺️ Schedule for {seg.label}: anchors {[str(a) for a in schedule.anchors]}")
    return schedule


def default_window(wall_values, margin) -> tuple[Rational, Rational]:
    """t′ = min(margin, first wall/2), t″ = max(1 − margin, (1 + last wall)/2)."""
    margin = rat(margin)
    values = sorted(wall_values)
    start = min(margin, values[0] / 2) if values else margin
    end = max(1 - margin, (1 + values[-1]) / 2) if values else 1 - margin
    return start, end


# ═══════════════════════════════════════════════════════════
# LEDGER
# ═══════════════════════════════════════════════════════════

@dataclass(frozen=True)
class LedgerRow:
    check: str
    subject: str
    passed: bool
    detail: str = ""
    required: bool = True


@dataclass
class Ledger:
    rows: list[LedgerRow] = field(default_factory=list)

    def record(self, check: str, subject: str, passed: bool, detail: str = "", required: bool = True) -> bool:
        self.rows.append(LedgerRow(check, subject, bool(passed), detail, required))
        if not passed:
            log = logger.warning if required else logger.info
            log(f"⚠️ {check} failed on {subject}: {detail}")
        return passed

    @property
    def complete(self) -> bool:
        return all(row.passed for row in self.rows if row.required)

    @property
    def failures(self) -> list[LedgerRow]:
        return [row for row in self.rows if row.required and not row.passed]


# ═══════════════════════════════════════════════════════════
# THE ZOOM TREE
# ═══════════════════════════════════════════════════════════

@dataclass
class ZetaLevel:
    s_bar: Rational
    s0: Optional[Rational] = None
    s1: Optional[Rational] = None
    zeta: Optional[object] = None  # ZetaSegment
    tries: int = 0
    walls: list[Rational] = field(default_factory=list)
    schedule: Optional[FlipSchedule] = None
    error: Optional[dict] = None


@dataclass
class EtaLevel:
    t_bar: Rational
    t0: Optional[Rational] = None
    t1: Optional[Rational] = None
    nudges: int = 0
    eta: Optional[object] = None  # EtaSegment
    tries: int = 0
    walls: list[Rational] = field(default_factory=list)
    zetas: list[ZetaLevel] = field(default_factory=list)
    error: Optional[dict] = None


@dataclass
class VariationPlan:
    sigma: object  # SigmaSegment
    family: SubsheafFamily
    walls: list[Rational]
    levels: list[EtaLevel]
    ledger: Ledger
    outline: Optional[FlipSchedule] = None
    separation: str = ""

    @property
    def complete(self) -> bool:
        failed_levels = any(
            level.error or any(z.error for z in level.zetas) for level in self.levels
        )
        return self.ledger.complete and not failed_levels

    @property
    def status(self) -> str:
        return "plan complete" if self.complete else "plan incomplete"


from .pipeline import build_plan  # noqa: E402
from .surface import SurfacePlan, surface_plan  # noqa: E402
from .document import (  # noqa: E402
    EtaRecord,
    LedgerEntry,
    PlanDocument,
    ScheduleRecord,
    SigmaRecord,
    SurfaceRecord,
    ZetaRecord,
    overrides_from_document,
    surface_document,
    to_document,
)
