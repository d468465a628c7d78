"""
⚖️ ZoomWall Stability — parameters, segments and multi-Gieseker comparison

A stability parameter is a list of pairs (L_j, B_j): an ample class and a
formal twist. The multi-Hilbert polynomial of E is

    P_E(k) = Σ_j χ(E ⊗ L_j^k ⊗ B_j)

and E is compared with a subsheaf F through the lexicographic sign of the
coefficient vector ⟨⟨p₁||…||p_d⟩⟩ of p_F − p_E. A segment is the same data
with coefficients linear in a parameter.

Every verdict is relative to a user-supplied SubsheafFamily.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Callable, Iterable, Optional, Sequence, Union

from sympy import Expr, Poly, Rational, expand, factorial

from chow import GradedClass, NumericalModel, require_divisor
from config import get_workers
from errors import InputError, InvariantViolation
from exact import K, LinScalar, as_poly, lex_sign, parameter, rat
from sheaves import FormalBundleSum, SheafType, euler_characteristic

logger = logging.getLogger("zoomwall.stability")


# ═══════════════════════════════════════════════════════════
# PARAMETERS AND SEGMENTS
# ═══════════════════════════════════════════════════════════

@dataclass(frozen=True, eq=False)
class Polarisation:
    """One (L_j, B_j) pair. Ampleness of L is the user's assertion."""

    L: GradedClass
    B: FormalBundleSum
    label: str = "L"

    def __post_init__(self):
        require_divisor(self.L)


class _PairsMixin:
    pairs: tuple[Polarisation, ...]

    @property
    def model(self) -> NumericalModel:
        return self.pairs[0].L.model

    @property
    def dim(self) -> int:
        return self.model.dim

    def mass(self) -> Expr:
        """Σ_j rank(B_j)·vol(L_j), in the parameter for segments."""
        return expand(sum(
            (p.B.rank().expr * self.model.volume(p.L) for p in self.pairs), Rational(0)
        ))

    def _validate_pairs(self):
        if not self.pairs:
            raise InputError("A stability parameter needs at least one (L, B) pair")
        models = {id(p.L.model) for p in self.pairs}
        if len(models) != 1:
            raise InputError("All polarisations must live in one model")
        if not any(p.B.has_positive_coefficient() for p in self.pairs):
            raise InputError("A stability parameter needs at least one positive twist coefficient")


@dataclass(frozen=True, eq=False)
class StabilityParameter(_PairsMixin):
    pairs: tuple[Polarisation, ...]
    label: str = "σ"

    def __post_init__(self):
        self._validate_pairs()
        for p in self.pairs:
            if not p.B.is_constant:
                raise InputError(f"Twist on {p.label} depends on a parameter; use a StabilitySegment")

    @property
    def is_normalized(self) -> bool:
        return self.mass() == 1

    def scaled(self, c) -> "StabilityParameter":
        c = rat(c)
        if c <= 0:
            raise InputError(f"Scaling factor must be positive, got {c}")
        return StabilityParameter(
            tuple(Polarisation(p.L, p.B.scaled(c), p.label) for p in self.pairs), self.label
        )


@dataclass(frozen=True, eq=False)
class StabilitySegment(_PairsMixin):
    """σ(v), v ∈ [0,1], with every twist coefficient linear in v."""

    pairs: tuple[Polarisation, ...]
    variable: str = "t"
    label: str = "σ"

    def __post_init__(self):
        self._validate_pairs()
        parameter(self.variable)
        for p in self.pairs:
            if not p.B.is_constant and p.B.variable != self.variable:
                raise InputError(f"Twist on {p.label} is in {p.B.variable}, segment is in {self.variable}")
        # Ranks are linear and nonnegative: positive at both ends means positive throughout.
        for end in (0, 1):
            if not any(p.B.rank().at(end) > 0 for p in self.pairs):
                raise InputError(
                    f"{self.label}: every twist has rank 0 at {self.variable} = {end}",
                    {"at": str(end)},
                )

    @property
    def symbol(self):
        return parameter(self.variable)

    @property
    def is_normalized(self) -> bool:
        # Mass is linear in the parameter: both endpoints suffice.
        mass = self.mass()
        return all(mass.subs(self.symbol, v) == 1 for v in (0, 1))

    def at(self, value) -> StabilityParameter:
        value = rat(value)
        return StabilityParameter(
            tuple(Polarisation(p.L, p.B.at(value), p.label) for p in self.pairs),
            f"{self.label}({value})",
        )

    @classmethod
    def constant(cls, sigma: StabilityParameter, variable: str = "t") -> "StabilitySegment":
        return cls(sigma.pairs, variable, sigma.label)


Stability = Union[StabilityParameter, StabilitySegment]


def require_normalized(sigma: Stability) -> Stability:
    if not sigma.is_normalized:
        raise InputError(
            f"{sigma.label} is not normalized: Σ rank(B_j)·vol(L_j) = {sigma.mass()}",
            {"mass": str(sigma.mass())},
        )
    return sigma


def variable_of(sigma: Stability) -> Optional[str]:
    return sigma.variable if isinstance(sigma, StabilitySegment) else None


# ═══════════════════════════════════════════════════════════
# COEFFICIENT VECTORS
# ═══════════════════════════════════════════════════════════

@dataclass(frozen=True)
class CoefficientVector:
    """⟨⟨p₁||…||p_d⟩⟩ with p(k) = Σ p_i k^{d−i}/(d−i)!"""

    entries: tuple
    variable: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(expand(e) for e in self.entries))

    @property
    def dim(self) -> int:
        return len(self.entries)

    def at(self, value) -> "CoefficientVector":
        if self.variable is None:
            return self
        symbol = parameter(self.variable)
        return CoefficientVector(tuple(e.subs(symbol, rat(value)) for e in self.entries))

    def polys(self) -> list[Poly]:
        variable = self.variable or "t"
        return [as_poly(e, parameter(variable)) for e in self.entries]

    def sign(self, at=None) -> int:
        return lex_sign(self.entries, at, self.variable or "t")

    @property
    def is_zero(self) -> bool:
        return all(e == 0 for e in self.entries)

    def __sub__(self, other: "CoefficientVector") -> "CoefficientVector":
        return CoefficientVector(
            tuple(a - b for a, b in zip(self.entries, other.entries)), self.variable or other.variable
        )

    def as_strings(self) -> list[str]:
        return [str(e) for e in self.entries]

    def __str__(self):
        return "⟨⟨" + " || ".join(self.as_strings()) + "⟩⟩"


# ═══════════════════════════════════════════════════════════
# MULTI-HILBERT POLYNOMIALS
# ═══════════════════════════════════════════════════════════

def multi_hilbert(E: SheafType, sigma: Stability) -> Poly:
    """P_E(k) = Σ_j χ(E ⊗ L_j^k ⊗ B_j)."""
    if E.model is not sigma.model:
        raise InputError(f"Sheaf '{E.name}' and {sigma.label} live in different models")
    total = sum((euler_characteristic(E, p.L, p.B).as_expr() for p in sigma.pairs), Rational(0))
    return Poly(expand(total), K)


def multiplicity(E: SheafType, sigma: Stability) -> Expr:
    """α_d: d! times the k^d coefficient of P_E."""
    d = sigma.dim
    return expand(multi_hilbert(E, sigma).coeff_monomial(K ** d) * factorial(d))


@lru_cache(maxsize=4096)
def reduced(E: SheafType, sigma: Stability) -> CoefficientVector:
    """
    Coefficient vector of p_E = P_E / α_d (leading 1/d! implied).
    For normalized parameters α_d is rank(E); that equality is checked.
    """
    d = sigma.dim
    P = multi_hilbert(E, sigma)
    alpha = expand(P.coeff_monomial(K ** d) * factorial(d))
    if alpha == 0:
        raise InputError(f"Zero multiplicity for '{E.name}' under {sigma.label}", {"sheaf": E.name})
    if sigma.is_normalized and expand(alpha - E.rank) != 0:
        raise InvariantViolation(
            f"Multiplicity {alpha} of '{E.name}' differs from its rank {E.rank} under a normalized parameter"
        )
    entries = tuple(
        expand(P.coeff_monomial(K ** (d - i)) * factorial(d - i) / alpha) for i in range(1, d + 1)
    )
    return CoefficientVector(entries, variable_of(sigma))


@lru_cache(maxsize=4096)
def difference_vector(F: SheafType, E: SheafType, sigma: Stability) -> CoefficientVector:
    """Coefficient vector of p_F − p_E."""
    for X in (F, E):
        if not X.rank > 0:
            raise InputError(f"Type '{X.name}' must have positive rank, has {X.rank}")
    return reduced(F, sigma) - reduced(E, sigma)


def compare(F: SheafType, E: SheafType, sigma: Stability, at=None) -> int:
    """Sign of p_F − p_E (−: F does not destabilize, +: it does)."""
    return difference_vector(F, E, sigma).sign(at)


# ═══════════════════════════════════════════════════════════
# FAMILIES AND VERDICTS
# ═══════════════════════════════════════════════════════════

class Verdict(str, Enum):
    STABLE = "stable"
    PROPERLY_SEMISTABLE = "properly_semistable"
    UNSTABLE = "unstable"


@dataclass(frozen=True, eq=False)
class SubsheafFamily:
    """Candidate saturated destabilizers of the ambient type."""

    ambient: SheafType
    members: tuple[SheafType, ...] = ()

    def usable(self) -> tuple[SheafType, ...]:
        """Members with 0 < rank < rank(τ); the rest are excluded with a warning."""
        keep = []
        for F in self.members:
            if F.model is not self.ambient.model:
                raise InputError(f"Member '{F.name}' lives in a different model than '{self.ambient.name}'")
            if 0 < F.rank < self.ambient.rank:
                keep.append(F)
            else:
                logger.warning(
                    f"⚠️ Member '{F.name}' has rank {F.rank} (ambient rank {self.ambient.rank}); "
                    f"excluded from verdicts"
                )
        return tuple(keep)

    @property
    def names(self) -> list[str]:
        return [F.name for F in self.usable()]


def sweep(fn: Callable, items: Iterable) -> list:
    """Map over family members; threads when ZOOMWALL_WORKERS > 1, order kept."""
    items = list(items)
    workers = get_workers()
    if workers > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


def family_signs(fam: SubsheafFamily, sigma: Stability, at=None) -> dict[str, int]:
    members = fam.usable()
    signs = sweep(lambda F: compare(F, fam.ambient, sigma, at), members)
    return {F.name: s for F, s in zip(members, signs)}


@dataclass(frozen=True)
class FamilyVerdict:
    verdict: Verdict
    signs: dict = field(default_factory=dict)
    relative_to: str = "family"

    def __str__(self):
        return f"{self.verdict.value} (relative to {self.relative_to})"


def semistable(E: SheafType, fam: SubsheafFamily, sigma: Stability, at=None) -> FamilyVerdict:
    if not (fam.ambient is E or fam.ambient.same_type(E)):
        raise InputError(f"Family ambient '{fam.ambient.name}' is not '{E.name}'")
    signs = family_signs(fam, sigma, at)
    worst = max(signs.values(), default=-1)
    verdict = {1: Verdict.UNSTABLE, 0: Verdict.PROPERLY_SEMISTABLE}.get(worst, Verdict.STABLE)
    return FamilyVerdict(verdict, signs, f"family of {len(signs)} member(s)")


def verdict_vector(fam: SubsheafFamily, sigma: Stability, at=None) -> tuple[int, ...]:
    """Signs of all members in family order; equal vectors mean equal stability."""
    return tuple(family_signs(fam, sigma, at).values())


from .predicates import (  # noqa: E402
    EquivalenceReport,
    OpennessReport,
    UniformityReport,
    equivalent_at,
    equivalent_between,
    is_open,
    is_uniform,
    slope,
)
