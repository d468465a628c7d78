"""
build_plan: σ → walls → η per wall → η-walls → ζ per η-wall → schedules.

Walls are zoomed independently (through stability.sweep) and their ledger
rows are merged in wall order, so the document does not depend on threads.
With `overrides` (from a stored plan) no search runs: the stored a, flanks,
λ and b are used as they are and every check is repeated.
"""

import logging
from typing import Optional

from chow import GradedClass
from config import get_schedule_margin
from errors import CheckFailure, InvariantViolation
from exact import rat
from segments import (
    EtaSegment,
    ZetaSegment,
    default_flanks,
    delta_identity_check,
    final_twist_properties,
    make_eta,
    make_sigma,
    make_zeta,
    search_a,
    search_b,
    wall_point_check,
)
from stability import SubsheafFamily, equivalent_between, is_open, is_uniform, sweep
from walls import Separation, classify_separation, representative, segment_walls

from . import (
    EtaLevel,
    Ledger,
    VariationPlan,
    ZetaLevel,
    default_window,
    flip_schedule,
    schedule_from_walls,
)

logger = logging.getLogger("zoomwall.plan.pipeline")


def _equivalence(ledger: Ledger, label: str, subject: str, seg_a, v_a, seg_b, v_b, fam, required=True):
    report = equivalent_between(seg_a, v_a, seg_b, v_b, fam)
    ledger.record(f"equiv {label}", subject, report.equivalent, str(report), required)


def _check_eta(ledger: Ledger, eta: EtaSegment, fam: SubsheafFamily, subject: str):
    sigma = eta.parent
    _equivalence(ledger, "eta(0)~sigma(t0)", subject, eta.segment, 0, sigma.segment, eta.t0, fam)
    _equivalence(ledger, "eta(1)~sigma(t1)", subject, eta.segment, 1, sigma.segment, eta.t1, fam)
    openness = is_open(eta.segment, fam)
    ledger.record("open", subject, openness.open, str(openness))


def _check_zeta(ledger: Ledger, eta: EtaSegment, zeta: ZetaSegment, fam: SubsheafFamily, subject: str):
    properties = final_twist_properties(zeta)
    ledger.record("finaltwist properties", subject, properties.ok,
                  "all hold" if properties.ok else ", ".join(properties.failed))
    uniform = is_uniform(zeta.segment, "strict")
    ledger.record("uniform(strict)", subject, uniform.uniform, str(uniform))
    openness = is_open(zeta.segment, fam)
    ledger.record("open", subject, openness.open, str(openness))
    _equivalence(ledger, "zeta(0)~eta(s0)", subject, zeta.segment, 0, eta.segment, zeta.s0, fam)
    _equivalence(ledger, "zeta(1)~eta(s1)", subject, zeta.segment, 1, eta.segment, zeta.s1, fam)
    for F in fam.usable():
        delta = delta_identity_check(zeta, F, fam.ambient)
        ledger.record("delta identity", f"{subject} {F.name}", delta.ok, f"δ(r) = {delta.closed_form}")
    point = wall_point_check(eta, zeta, fam)
    ledger.record("equiv eta(s_bar)~zeta(r_tilde)", subject, point.equivalent, str(point), required=False)


def _missing(level, subject: str, check: str):
    """A stored plan with no parameters for a wall the rebuilt tree has."""
    ledger = Ledger()
    detail = "no stored parameters for this wall"
    level.error = {"error": "CheckFailure", "detail": detail, "witness": {"subject": subject}}
    ledger.record(check, subject, False, detail)
    return level, ledger


def _zoom_eta_wall(eta: EtaSegment, s_bar, fam: SubsheafFamily, chambers, stored: Optional[dict],
                   ledger: Ledger, subject: str, margin) -> ZetaLevel:
    level = ZetaLevel(s_bar)
    try:
        if stored is not None:
            level.s0, level.s1 = rat(stored["s0"]), rat(stored["s1"])
            zeta = make_zeta(eta, s_bar, level.s0, level.s1, stored["lambda"], stored["b"])
        else:
            left, right = chambers.neighbours(s_bar)
            level.s0, level.s1 = representative(*left).value, representative(*right).value
            outcome = search_b(eta, s_bar, level.s0, level.s1, fam)
            zeta, level.tries = outcome.result, outcome.tries
    except InvariantViolation:
        raise
    except CheckFailure as e:
        level.error = e.to_dict()
        ledger.record("construct zeta", subject, False, e.detail)
        return level

    level.zeta = zeta
    _check_zeta(ledger, eta, zeta, fam, subject)
    try:
        level.walls = segment_walls(zeta.segment, fam).values
        level.schedule = flip_schedule(zeta.segment, fam, *default_window(level.walls, margin))
        ledger.record("schedule", subject, True, " ; ".join(level.schedule.describe()))
    except CheckFailure as e:
        level.error = e.to_dict()
        ledger.record("schedule", subject, False, e.detail)
    return level


def _zoom_sigma_wall(sigma, t_bar, fam: SubsheafFamily, stored: Optional[dict], margin) -> tuple[EtaLevel, Ledger]:
    ledger = Ledger()
    level = EtaLevel(t_bar)
    subject = f"eta[t_bar={t_bar}]"
    try:
        if stored is not None:
            level.t0, level.t1 = rat(stored["t0"]), rat(stored["t1"])
            level.nudges = int(stored.get("nudges", 0))
            eta = make_eta(sigma, t_bar, level.t0, level.t1, int(stored["a"]), fam)
        else:
            level.t0, level.t1, level.nudges = default_flanks(sigma, t_bar, fam)
            outcome = search_a(sigma, t_bar, level.t0, level.t1, fam)
            eta, level.tries = outcome.result, outcome.tries
    except InvariantViolation:
        raise
    except CheckFailure as e:
        level.error = e.to_dict()
        ledger.record("construct eta", subject, False, e.detail)
        return level, ledger

    level.eta = eta
    if level.nudges:
        ledger.record("flank nudging", subject, True, f"{level.nudges} nudge(s)", required=False)
    _check_eta(ledger, eta, fam, subject)

    chambers = segment_walls(eta.segment, fam)
    level.walls = chambers.values
    stored_zetas = (stored or {}).get("zetas", {})
    for s_bar in level.walls:
        zeta_subject = f"zeta[t_bar={t_bar},s_bar={s_bar}]"
        if stored is not None and s_bar not in stored_zetas:
            missing, rows = _missing(ZetaLevel(s_bar), zeta_subject, "construct zeta")
            level.zetas.append(missing)
            ledger.rows.extend(rows.rows)
            continue
        level.zetas.append(_zoom_eta_wall(
            eta, s_bar, fam, chambers, stored_zetas.get(s_bar), ledger, zeta_subject, margin,
        ))
    return level, ledger


def build_plan(L0: GradedClass, L1: GradedClass, fam: SubsheafFamily,
               labels: tuple[str, str] = ("L0", "L1"), overrides: Optional[dict] = None) -> VariationPlan:
    """
    The full zoom for the line from L₀ to L₁. `overrides` maps each σ-wall to
    {"t0", "t1", "a", "nudges", "zetas": {s̄: {"s0", "s1", "lambda", "b"}}}.
    """
    margin = get_schedule_margin()
    sigma = make_sigma(L0, L1, labels)
    ledger = Ledger()

    separation = classify_separation(fam, fam.ambient, L0, L1)
    single = separation.verdict == Separation.SINGLE_FIRST_KIND
    if not single:
        logger.warning(
            f"⚠️ {labels[0]} and {labels[1]} are not separated by a single wall of the first kind "
            f"({separation}); ζ endpoint equivalences are not guaranteed"
        )
    ledger.record("separation single_first_kind", "sigma", single, str(separation), required=False)
    if sigma.generic is not None:
        ledger.record("genericity c0k != c1k", "sigma", sigma.generic, "", required=False)

    openness = is_open(sigma.segment, fam)
    ledger.record("open", "sigma", openness.open, str(openness))
    uniform = is_uniform(sigma.segment, "difference")
    ledger.record("uniform(difference)", "sigma", uniform.uniform, str(uniform), required=False)

    walls = segment_walls(sigma.segment, fam).values
    outline = schedule_from_walls("σ", walls, *default_window(walls, margin))

    def zoom(t_bar):
        if overrides is not None and t_bar not in overrides:
            return _missing(EtaLevel(t_bar), f"eta[t_bar={t_bar}]", "construct eta")
        stored = overrides[t_bar] if overrides is not None else None
        return _zoom_sigma_wall(sigma, t_bar, fam, stored, margin)

    levels = []
    for level, rows in sweep(zoom, walls):
        levels.append(level)
        ledger.rows.extend(rows.rows)

    plan = VariationPlan(sigma, fam, walls, levels, ledger, outline, separation.verdict.value)
    logger.info(f"🗺️ {plan.status}: {len(walls)} σ-wall(s), {len(ledger.rows)} ledger row(s)")
    return plan
