"""
🧱 ZoomWall Walls — Gieseker walls in the ample cone, walls on segments

Ample cone side: for a member F of the family and i = 1..d the wall
function is β_{F,i}(L) = ∫ hilb_i(F,τ)·c₁(L)^{d−i}, a form of degree d−i
in the divisor coordinates. Segment side: the walls of σ(t) are the roots
in (0,1) of the entries of p_F − p_τ that are not identically zero.

Exactness rules here: triviality is decided symbolically, never by
sampling, and irrational walls are reported as isolating intervals.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

from sympy import Expr, Poly, Rational, Symbol, expand

from chow import GradedClass, require_divisor
from config import get_search_limits
from errors import CheckFailure, InputError
from exact import RootReport, as_poly, exact_decimal, isolate_roots, rat, sign_of
from sheaves import FormalBundleSum, SheafType, hilb_difference
from stability import (
    Polarisation,
    StabilityParameter,
    StabilitySegment,
    SubsheafFamily,
    difference_vector,
    require_normalized,
    sweep,
)

logger = logging.getLogger("zoomwall.walls")

U = Symbol("u")


# ═══════════════════════════════════════════════════════════
# WALL FUNCTIONS IN THE AMPLE CONE
# ═══════════════════════════════════════════════════════════

class WallKind(str, Enum):
    EMPTY = "empty"
    EVERYTHING = "everything"
    NONTRIVIAL = "nontrivial"


@dataclass(frozen=True, eq=False)
class WallFunction:
    """L ↦ β_{F,i}(L) as a polynomial in the degree-1 coordinates."""

    subsheaf: SheafType
    index: int
    form: Expr
    coords: tuple[Symbol, ...]

    @property
    def kind(self) -> WallKind:
        """
        everything: the form vanishes identically.
        empty: a nonzero constant (i = d, or a degenerate F).
        nontrivial: anything else. Whether it meets the ample cone is not decided here.
        """
        if self.form == 0:
            return WallKind.EVERYTHING
        if not self.form.free_symbols:
            return WallKind.EMPTY
        return WallKind.NONTRIVIAL

    @property
    def is_trivial(self) -> bool:
        return self.kind == WallKind.EVERYTHING

    def at(self, L: GradedClass) -> Rational:
        values = L.model.divisor_coords(L)
        return rat(self.form.subs(dict(zip(self.coords, values))))

    def on_line(self, L0: GradedClass, L1: GradedClass) -> Poly:
        """u ↦ β((1−u)L₀ + uL₁)"""
        a = L0.model.divisor_coords(L0)
        b = L1.model.divisor_coords(L1)
        line = {y: (1 - U) * x0 + U * x1 for y, x0, x1 in zip(self.coords, a, b)}
        return as_poly(expand(self.form.subs(line)), U)


def wall_function(F: SheafType, tau: SheafType, i: int) -> WallFunction:
    model = tau.model
    if not 1 <= i <= model.dim:
        raise InputError(f"Wall index {i} outside 1..{model.dim}")
    coords = tuple(Symbol(f"y_{label}") for label in model.basis[1])
    L = model.from_coords(dict(zip(model.basis[1], coords)))
    form = expand((hilb_difference(F, tau, i) * L ** (model.dim - i)).integrate())
    return WallFunction(F, i, form, coords)


def polarisation(L: GradedClass, label: str = "L") -> StabilityParameter:
    """The plain Gieseker parameter (L; (1/vol L)·O_X)."""
    require_divisor(L)
    vol = L.model.volume(L)
    if vol <= 0:
        raise InputError(f"{label} has volume {vol}; an ample class needs positive volume")
    return StabilityParameter((Polarisation(L, FormalBundleSum.trivial(L.model, 1 / vol), label),), label)


def beta(F: SheafType, tau: SheafType, L: GradedClass) -> tuple[Rational, ...]:
    """(β₁..β_d) at L, read off the difference of reduced Hilbert polynomials."""
    sigma = polarisation(L)
    vol = L.model.volume(L)
    vector = difference_vector(F, tau, sigma)
    return tuple(rat(vol * e) for e in vector.entries)


def walls_on_ample_line(F: SheafType, tau: SheafType, L0: GradedClass, L1: GradedClass, i: int) -> RootReport:
    return isolate_roots(wall_function(F, tau, i).on_line(L0, L1), 0, 1)


# ── Separation of two polarisations ──

class Separation(str, Enum):
    NO_WALL = "no_wall"
    SINGLE_FIRST_KIND = "single_first_kind"
    OTHER = "other"


@dataclass(frozen=True)
class SeparationReport:
    verdict: Separation
    counts: dict = field(default_factory=dict)  # i -> number of distinct counted roots in (0,1)
    roots: dict = field(default_factory=dict)  # i -> list of (member, root-or-interval)
    endpoint_hits: tuple = ()  # (member, i, endpoint)
    detail: str = ""
    touching: dict = field(default_factory=dict)  # i=1 -> roots of even multiplicity, not counted

    def __str__(self):
        return self.verdict.value + (f" ({self.detail})" if self.detail else "")


def classify_separation(fam: SubsheafFamily, tau: SheafType, L0: GradedClass, L1: GradedClass) -> SeparationReport:
    """Does the line from L₀ to L₁ cross exactly one wall, of the first kind?

    First-kind walls count only where β_{F,1} changes sign; a root of even
    multiplicity leaves every verdict unchanged and goes to `touching`.
    Walls of higher index count wherever the line meets them.
    """
    d = tau.model.dim
    counts: dict[int, int] = {}
    roots: dict[int, list] = {}
    touching: dict[int, list] = {}
    hits = []

    for i in range(1, d):
        distinct: set = set()
        intervals = []
        roots[i] = []
        for F in fam.usable():
            wall = wall_function(F, tau, i)
            if wall.is_trivial:
                continue
            for end, L in ((0, L0), (1, L1)):
                if wall.at(L) == 0:
                    hits.append((F.name, i, end))
            report = isolate_roots(wall.on_line(L0, L1), 0, 1)
            if i == 1:
                exact, pairs = report.sign_change_roots, report.sign_change_intervals
                if report.touching_roots:
                    touching.setdefault(i, []).extend((F.name, str(r)) for r in report.touching_roots)
            else:
                exact, pairs = report.exact_roots, report.irrational_root_intervals
            distinct.update(exact)
            intervals.extend(pairs)
            roots[i] += [(F.name, str(r)) for r in exact]
            roots[i] += [(F.name, f"({lo}, {hi})") for lo, hi in pairs]
        counts[i] = len(distinct) + len(intervals)

    if hits:
        verdict, detail = Separation.OTHER, "an endpoint lies on a wall"
    elif all(n == 0 for n in counts.values()):
        verdict, detail = Separation.NO_WALL, ""
    elif d == 3 and counts.get(1) == 1 and counts.get(2) == 0:
        verdict, detail = Separation.SINGLE_FIRST_KIND, ""
    elif d == 3 and counts.get(2, 0) > 0:
        verdict, detail = Separation.OTHER, "second-kind wall present"
    elif d == 3:
        verdict, detail = Separation.OTHER, f"{counts.get(1)} first-kind walls"
    else:
        verdict = Separation.OTHER
        detail = "per-index counts " + ", ".join(f"i={i}: {n}" for i, n in counts.items())
    logger.info(f"🧱 Separation {verdict.value}: counts {counts}")
    return SeparationReport(verdict, counts, roots, tuple(hits), detail, touching)


# ── Point membership ──

@dataclass(frozen=True)
class MembershipReport:
    ok: bool
    values: dict = field(default_factory=dict)  # (member, i) -> β value
    witnesses: tuple = ()  # (member, i)

    def __str__(self):
        if self.ok:
            return "yes"
        return "no, witness " + ", ".join(f"({name}, {i})" for name, i in self.witnesses)


def _membership(L: GradedClass, fam: SubsheafFamily, tau: SheafType, indices) -> MembershipReport:
    values, witnesses = {}, []
    for F in fam.usable():
        for i in indices:
            wall = wall_function(F, tau, i)
            value = wall.at(L)
            values[(F.name, i)] = value
            if value == 0 and not wall.is_trivial:
                witnesses.append((F.name, i))
    return MembershipReport(not witnesses, values, tuple(witnesses))


def is_general(L: GradedClass, fam: SubsheafFamily, tau: SheafType) -> MembershipReport:
    """L lies on no nontrivial wall W_{F,i}, i = 1..d−1."""
    return _membership(L, fam, tau, range(1, tau.model.dim))


def second_kind_membership(omega: GradedClass, fam: SubsheafFamily, tau: SheafType) -> MembershipReport:
    """ω avoids every nontrivial wall with i ≥ 2; signs of β_{F,i}(ω) reported."""
    return _membership(omega, fam, tau, range(2, tau.model.dim))


def membership_signs(report: MembershipReport) -> dict:
    return {key: sign_of(value) for key, value in report.values.items()}


# ═══════════════════════════════════════════════════════════
# WALLS AND CHAMBERS ON A SEGMENT
# ═══════════════════════════════════════════════════════════

@dataclass(frozen=True)
class Wall:
    value: Rational
    tags: tuple = ()  # (member, i)


@dataclass(frozen=True)
class ChamberDecomposition:
    walls: tuple[Wall, ...] = ()

    @property
    def values(self) -> list[Rational]:
        return [w.value for w in self.walls]

    @property
    def chambers(self) -> list[tuple[Rational, Rational]]:
        points = [Rational(0)] + self.values + [Rational(1)]
        return list(zip(points, points[1:]))

    @property
    def representatives(self) -> list[Rational]:
        return [(lo + hi) / 2 for lo, hi in self.chambers]

    def chamber_of(self, value) -> int:
        value = rat(value)
        for n, (lo, hi) in enumerate(self.chambers):
            if lo < value < hi:
                return n
        raise InputError(f"{value} lies on a wall or outside (0,1)")

    def neighbours(self, wall_value) -> tuple[tuple, tuple]:
        """The chambers left and right of a wall."""
        wall_value = rat(wall_value)
        n = self.values.index(wall_value)
        chambers = self.chambers
        return chambers[n], chambers[n + 1]


@dataclass(frozen=True)
class Representative:
    value: Rational
    nudges: int = 0


def representative(lo, hi, predicate: Optional[Callable] = None, depth: Optional[int] = None) -> Representative:
    """
    Midpoint of (lo, hi). When a genericity predicate rejects it, retry at the
    midpoint of the lower half, at most `depth` times.
    """
    lo, hi = rat(lo), rat(hi)
    depth = get_search_limits()["nudge_depth"] if depth is None else depth
    value = (lo + hi) / 2
    if predicate is None:
        return Representative(value)
    for nudges in range(depth + 1):
        if predicate(value):
            if nudges:
                logger.warning(f"🎯 Representative of ({lo}, {hi}) nudged {nudges}x to {value}")
            return Representative(value, nudges)
        value = (lo + value) / 2
    raise CheckFailure(
        f"No generic representative in ({lo}, {hi}) within {depth} nudges",
        {"interval": [str(lo), str(hi)], "depth": depth},
    )


def segment_walls(seg: StabilitySegment, fam: SubsheafFamily) -> ChamberDecomposition:
    """All roots in (0,1) of the non-vanishing entries of p_F − p_τ, merged and tagged."""
    require_normalized(seg)

    def member_roots(F: SheafType) -> list[tuple]:
        found = []
        for i, poly in enumerate(difference_vector(F, fam.ambient, seg).polys(), start=1):
            report = isolate_roots(poly, 0, 1)
            if report.has_irrational:
                raise CheckFailure(
                    f"Irrational wall for '{F.name}' (entry {i}) on {seg.label}; "
                    f"re-parameterize the segment so walls are rational",
                    {"member": F.name, "index": i,
                     "intervals": [[str(a), str(b)] for a, b in report.irrational_root_intervals]},
                )
            found += [(root, F.name, i) for root in report.exact_roots]
        return found

    tagged: dict[Rational, list] = {}
    for roots in sweep(member_roots, fam.usable()):
        for root, name, i in roots:
            tagged.setdefault(root, []).append((name, i))

    walls = tuple(Wall(value, tuple(tags)) for value, tags in sorted(tagged.items()))
    logger.info(f"🧱 {seg.label}: {len(walls)} wall(s) {[str(w.value) for w in walls]}")
    return ChamberDecomposition(walls)


# ── Plot data along the ample line ──

def ample_line_table(F: SheafType, tau: SheafType, L0: GradedClass, L1: GradedClass, samples: int) -> list[dict]:
    """β_{F,i}((1−u)L₀+uL₁) at u = j/samples and at every rational wall."""
    d = tau.model.dim
    polys = {i: wall_function(F, tau, i).on_line(L0, L1) for i in range(1, d + 1)}
    walls = set()
    for i in range(1, d):
        walls.update(isolate_roots(polys[i], 0, 1).exact_roots)
    points = sorted({Rational(j, samples) for j in range(samples + 1)} | walls)
    return [
        {"u": exact_decimal(u), "wall": "1" if u in walls else "",
         **{f"beta{i}": exact_decimal(p.eval(u)) for i, p in polys.items()}}
        for u in points
    ]
