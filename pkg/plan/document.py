"""
Plan documents: the zoom tree and its ledger as JSON.

Every rational is written as a "p/q" string. The document embeds the
problem it was built from, so `replan --verify` needs nothing else.
"""

import logging
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from exact import rat, rat_str

from . import FlipSchedule, Ledger, VariationPlan

logger = logging.getLogger("zoomwall.plan.document")


# ── Records ──

class LedgerEntry(BaseModel):
    check: str
    subject: str
    passed: bool
    detail: str = ""
    required: bool = True


class ScheduleRecord(BaseModel):
    segment: str
    anchors: list[str]
    intermediates: list[str]
    flips: list[str] = []


class ZetaRecord(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    s_bar: str
    s0: Optional[str] = None
    s1: Optional[str] = None
    lam: Optional[str] = Field(default=None, alias="lambda")
    lambda_min: Optional[str] = None
    b: Optional[str] = None
    tries: int = 0
    alpha: dict[str, str] = {}
    n: dict[str, int] = {}
    walls: list[str] = []
    schedule: Optional[ScheduleRecord] = None
    error: Optional[dict] = None


class EtaRecord(BaseModel):
    t_bar: str
    t0: Optional[str] = None
    t1: Optional[str] = None
    a: Optional[int] = None
    tries: int = 0
    nudges: int = 0
    exponents: dict[str, int] = {}
    walls: list[str] = []
    zetas: list[ZetaRecord] = []
    error: Optional[dict] = None


class SigmaRecord(BaseModel):
    L0: list[str]
    L1: list[str]
    sigma0: str
    sigma1: str
    generic: Optional[bool] = None
    separation: str = ""
    walls: list[str] = []
    outline: Optional[ScheduleRecord] = None


class SurfaceRecord(BaseModel):
    L0: list[str]
    L1: list[str]
    Lbar: list[str]
    a: int
    walls: list[str] = []
    schedule: Optional[ScheduleRecord] = None
    error: Optional[dict] = None


class PlanDocument(BaseModel):
    kind: str = "variation"  # variation | surface
    status: str
    problem: dict
    sigma: Optional[SigmaRecord] = None
    etas: list[EtaRecord] = []
    surface: Optional[SurfaceRecord] = None
    ledger: list[LedgerEntry] = []

    def dumps(self) -> str:
        return self.model_dump_json(indent=2, by_alias=True) + "\n"

    @property
    def complete(self) -> bool:
        return self.status == "plan complete"


# ── Building records ──

def _strings(values) -> list[str]:
    return [rat_str(v) for v in values]


def _key(*indices) -> str:
    return ",".join(str(i) for i in indices)


def schedule_record(schedule: Optional[FlipSchedule]) -> Optional[ScheduleRecord]:
    if schedule is None:
        return None
    return ScheduleRecord(
        segment=schedule.segment,
        anchors=_strings(schedule.anchors),
        intermediates=_strings(schedule.intermediates),
        flips=schedule.describe(),
    )


def ledger_entries(ledger: Ledger) -> list[LedgerEntry]:
    return [
        LedgerEntry(check=row.check, subject=row.subject, passed=row.passed, detail=row.detail, required=row.required)
        for row in ledger.rows
    ]


def _zeta_record(level) -> ZetaRecord:
    record = ZetaRecord(
        s_bar=rat_str(level.s_bar),
        s0=rat_str(level.s0) if level.s0 is not None else None,
        s1=rat_str(level.s1) if level.s1 is not None else None,
        tries=level.tries,
        schedule=schedule_record(level.schedule),
        error=level.error,
    )
    zeta = level.zeta
    if zeta is not None:
        provenance = zeta.provenance
        record.lam = rat_str(zeta.lam)
        record.lambda_min = rat_str(provenance["lambda_min"])
        record.b = rat_str(zeta.b)
        record.alpha = {_key(*k): rat_str(v) for k, v in sorted(provenance["alpha"].items())}
        record.n = {_key(*k): v for k, v in sorted(provenance["n"].items())}
        record.walls = _strings(level.walls)
    return record


def _eta_record(level) -> EtaRecord:
    record = EtaRecord(
        t_bar=rat_str(level.t_bar),
        t0=rat_str(level.t0) if level.t0 is not None else None,
        t1=rat_str(level.t1) if level.t1 is not None else None,
        tries=level.tries,
        nudges=level.nudges,
        walls=_strings(level.walls),
        zetas=[_zeta_record(z) for z in level.zetas],
        error=level.error,
    )
    if level.eta is not None:
        record.a = level.eta.a
        record.exponents = {_key(*k): v for k, v in sorted(level.eta.exponents.items())}
    return record


def to_document(plan: VariationPlan, problem: dict) -> PlanDocument:
    sigma = plan.sigma
    model = sigma.model
    record = SigmaRecord(
        L0=_strings(model.divisor_coords(sigma.L0)),
        L1=_strings(model.divisor_coords(sigma.L1)),
        sigma0=str(sigma.coefficients[0]),
        sigma1=str(sigma.coefficients[1]),
        generic=sigma.generic,
        separation=plan.separation,
        walls=_strings(plan.walls),
        outline=schedule_record(plan.outline),
    )
    return PlanDocument(
        kind="variation",
        status=plan.status,
        problem=problem,
        sigma=record,
        etas=[_eta_record(level) for level in plan.levels],
        ledger=ledger_entries(plan.ledger),
    )


def surface_document(plan, L0, L1, Lbar, problem: dict) -> PlanDocument:
    model = Lbar.model
    record = SurfaceRecord(
        L0=_strings(model.divisor_coords(L0)),
        L1=_strings(model.divisor_coords(L1)),
        Lbar=_strings(model.divisor_coords(Lbar)),
        a=plan.a,
        walls=_strings(plan.walls),
        schedule=schedule_record(plan.schedule),
        error=plan.error,
    )
    return PlanDocument(
        kind="surface", status=plan.status, problem=problem, surface=record, ledger=ledger_entries(plan.ledger)
    )


# ── Reading parameters back ──

def overrides_from_document(doc: PlanDocument) -> dict:
    """Stored a, flanks, nudge counts, λ and b per wall, keyed by Rational wall values."""
    overrides = {}
    for eta in doc.etas:
        if eta.a is None:
            continue
        zetas = {
            rat(z.s_bar): {"s0": z.s0, "s1": z.s1, "lambda": z.lam, "b": z.b}
            for z in eta.zetas
            if z.lam is not None
        }
        overrides[rat(eta.t_bar)] = {"t0": eta.t0, "t1": eta.t1, "a": eta.a, "nudges": eta.nudges, "zetas": zetas}
    return overrides
