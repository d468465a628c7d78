"""
Constructive "sufficiently large": doubling searches for a and b.

Each step builds the candidate segment and accepts it when every family
member compares the same way at the matching endpoints and the new segment
is open. The cap is 2^ZOOMWALL_SEARCH_CAP_EXP times the starting value.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

from sympy import Rational

from config import get_search_limits
from errors import CheckFailure
from exact import rat
from stability import SubsheafFamily, equivalent_between, is_open

from . import EtaSegment, SigmaSegment, ZetaSegment
from .eta import make_eta, minimal_divisibility_a
from .zeta import make_zeta

logger = logging.getLogger("zoomwall.segments.search")


@dataclass(frozen=True)
class SearchOutcome:
    value: Any
    tries: int
    result: Any = None
    checks: dict = field(default_factory=dict)


def doubling_search(start, accept: Callable, what: str = "value", cap_exponent: Optional[int] = None) -> SearchOutcome:
    """
    Try start, 2·start, 4·start, … up to start·2^cap. `accept(v)` returns
    (ok, result, witness); the last witness is reported when the cap is hit.
    """
    cap_exponent = get_search_limits()["cap_exponent"] if cap_exponent is None else cap_exponent
    value = last = start
    witness: dict = {}
    for tries in range(1, cap_exponent + 2):
        last = value
        ok, result, witness = accept(value)
        if ok:
            logger.info(f"✅ {what} = {value} accepted after {tries} tr{'y' if tries == 1 else 'ies'}")
            return SearchOutcome(value, tries, result, witness)
        logger.debug(f"{what} = {value} rejected: {witness}")
        value = value * 2
    raise CheckFailure(
        f"No {what} up to {last} (= {start}·2^{cap_exponent}) passes the checks",
        {"what": what, "cap": str(last), **witness},
    )


def _endpoint_checks(pairs, fam: SubsheafFamily) -> tuple[bool, dict]:
    """pairs: (label, seg_a, v_a, seg_b, v_b). Returns (ok, witness)."""
    witness = {}
    for label, seg_a, v_a, seg_b, v_b in pairs:
        report = equivalent_between(seg_a, v_a, seg_b, v_b, fam)
        if not report.equivalent:
            witness[label] = list(report.witnesses)
    return not witness, witness


def search_a(seg: SigmaSegment, t_bar, t0, t1, fam: SubsheafFamily) -> SearchOutcome:
    """Least doubled multiple of the divisibility modulus with η(0) ≡ σ(t₀), η(1) ≡ σ(t₁) and η open."""
    t_bar, t0, t1 = rat(t_bar), rat(t0), rat(t1)
    modulus = minimal_divisibility_a(seg, t_bar, t0, t1)

    def accept(a):
        eta = make_eta(seg, t_bar, t0, t1, a)
        ok, witness = _endpoint_checks((
            ("eta(0)~sigma(t0)", seg.segment, t0, eta.segment, 0),
            ("eta(1)~sigma(t1)", seg.segment, t1, eta.segment, 1),
        ), fam)
        if ok:
            openness = is_open(eta.segment, fam)
            if not openness.open:
                ok, witness = False, {"open": [f"{name}@{end}" for name, end in openness.witnesses]}
        return ok, eta, witness

    return doubling_search(modulus, accept, f"a at t̄={t_bar}")


def search_b(eta: EtaSegment, s_bar, s0, s1, fam: SubsheafFamily, lam=None, gauge=0) -> SearchOutcome:
    """Least b in 1, 2, 4, … with ζ(0) ≡ η(s₀), ζ(1) ≡ η(s₁) and ζ open."""
    s_bar, s0, s1 = rat(s_bar), rat(s0), rat(s1)

    def accept(b):
        zeta: ZetaSegment = make_zeta(eta, s_bar, s0, s1, lam, b, gauge)
        ok, witness = _endpoint_checks((
            ("zeta(0)~eta(s0)", eta.segment, s0, zeta.segment, 0),
            ("zeta(1)~eta(s1)", eta.segment, s1, zeta.segment, 1),
        ), fam)
        if ok:
            openness = is_open(zeta.segment, fam)
            if not openness.open:
                ok, witness = False, {"open": [f"{name}@{end}" for name, end in openness.witnesses]}
        return ok, zeta, witness

    return doubling_search(Rational(1), accept, f"b at s̄={s_bar}")
