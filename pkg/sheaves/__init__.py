"""
🧵 ZoomWall Sheaves — topological types and formal sums of line bundles

A SheafType is a Chern character. Everything the stability code needs
from a sheaf (Hilb_i, hilb_i, χ of its twists) is computed from ch(E) and
Todd(X) by Riemann–Roch, without ever touching cohomology groups.

A FormalBundleSum Σ b_i·B_i is a nonnegative combination of line bundles
whose coefficients may be linear in one segment parameter. Its rank, c₁
and ch are extended linearly from ch(L) = e^{c₁(L)}.
"""

import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional

from sympy import Expr, Poly, Rational, Symbol, expand

from chow import GradedClass, NumericalModel, require_divisor
from errors import InputError
from exact import K, LinScalar, rat

logger = logging.getLogger("zoomwall.sheaves")


# ═══════════════════════════════════════════════════════════
# SHEAF TYPES
# ═══════════════════════════════════════════════════════════

@dataclass(frozen=True, eq=False)
class SheafType:
    """Topological type of a sheaf, given by its Chern character."""

    name: str
    ch: GradedClass

    @property
    def model(self) -> NumericalModel:
        return self.ch.model

    @property
    def rank(self) -> Expr:
        return self.ch.components[0][0]

    @classmethod
    def from_parts(cls, model: NumericalModel, name: str, rank, parts: Iterable[dict] = ()):
        """rank plus one {basis name: value} dict per degree 1, 2, ..."""
        coords = {model.unit_name: rat(rank)}
        for degree, part in enumerate(parts, start=1):
            for label, value in part.items():
                if label not in model.index or model.index[label][0] != degree:
                    raise InputError(f"Sheaf '{name}': '{label}' is not a degree-{degree} basis class")
                coords[label] = rat(value)
        return cls(name, model.from_coords(coords))

    def same_type(self, other: "SheafType") -> bool:
        return self.ch == other.ch

    def __repr__(self):
        return f"SheafType({self.name!r}, ch={self.ch!r})"


def structure_sheaf(model: NumericalModel) -> SheafType:
    return SheafType("O", model.one())


def line_bundle(model: NumericalModel, L: GradedClass, name: str = "L") -> SheafType:
    return SheafType(name, model.exp_class(require_divisor(L)))


def generic_sheaf(model: NumericalModel, name: str = "E") -> tuple[SheafType, list[Symbol]]:
    """
    Rank-1 type whose higher Chern character entries are free symbols.
    Reduced polynomials only see ch/rank, so this is the general case.
    """
    unknowns = []
    coords = {model.unit_name: 1}
    for degree in range(1, model.dim + 1):
        for label in model.basis[degree]:
            symbol = Symbol(f"x_{label}")
            unknowns.append(symbol)
            coords[label] = symbol
    return SheafType(name, model.from_coords(coords)), unknowns


def Hilb(E: SheafType, i: int) -> GradedClass:
    """(ch(E)·Todd(X))_i"""
    if not 0 <= i <= E.model.dim:
        raise InputError(f"Hilb index {i} outside 0..{E.model.dim}")
    return (E.ch * E.model.todd).part(i)


def hilb(E: SheafType, i: int) -> GradedClass:
    """Hilb_i(E) / rank(E)"""
    if E.rank == 0:
        raise InputError(f"hilb of rank-0 type '{E.name}'")
    return Hilb(E, i) / E.rank


def hilb_difference(F: SheafType, E: SheafType, i: int) -> GradedClass:
    """hilb_i(F,E) := hilb_i(F) − hilb_i(E)"""
    return hilb(F, i) - hilb(E, i)


# ═══════════════════════════════════════════════════════════
# FORMAL SUMS OF LINE BUNDLES
# ═══════════════════════════════════════════════════════════

@dataclass(frozen=True, eq=False)
class BundleTerm:
    coefficient: LinScalar
    c1: GradedClass
    label: str = "O"
    power: Optional[Rational] = None  # a, when the bundle is L^a for a named L


@dataclass(frozen=True, eq=False)
class FormalBundleSum:
    """Σ b_i(v)·B_i with b_i linear in v and nonnegative on [0,1]."""

    model: NumericalModel
    terms: tuple[BundleTerm, ...] = field(default_factory=tuple)
    variable: str = "t"

    def __post_init__(self):
        for term in self.terms:
            require_divisor(term.c1)
            if not term.coefficient.nonnegative_on_unit():
                raise InputError(
                    f"Coefficient {term.coefficient} of {term.label} is negative somewhere on [0,1]",
                    {"term": term.label},
                )
            if not term.coefficient.is_constant and term.coefficient.variable != self.variable:
                raise InputError(
                    f"Term {term.label} depends on {term.coefficient.variable}, sum is in {self.variable}"
                )

    # ── constructors ──

    @classmethod
    def trivial(cls, model: NumericalModel, coefficient, variable: str = "t") -> "FormalBundleSum":
        """coefficient · O_X"""
        return cls(model, (BundleTerm(_lin(coefficient, variable), model.zero(), "O"),), variable)

    @classmethod
    def power(cls, model: NumericalModel, L: GradedClass, a, coefficient,
              base: str = "L", variable: str = "t") -> "FormalBundleSum":
        """coefficient · L^a"""
        a = rat(a)
        label = base if a == 1 else f"{base}^{a}"
        return cls(model, (BundleTerm(_lin(coefficient, variable), L * a, label, a),), variable)

    # ── linear algebra of sums ──

    def __add__(self, other: "FormalBundleSum") -> "FormalBundleSum":
        if other.model is not self.model:
            raise InputError("Bundle sums from different models")
        variable = self.variable if not self.is_constant else other.variable
        if not self.is_constant and not other.is_constant and self.variable != other.variable:
            raise InputError(f"Cannot add sums in {self.variable} and {other.variable}")
        return FormalBundleSum(self.model, self.terms + other.terms, variable)

    def scaled(self, c) -> "FormalBundleSum":
        terms = tuple(
            BundleTerm(t.coefficient * c, t.c1, t.label, t.power) for t in self.terms
        )
        variable = c.variable if isinstance(c, LinScalar) and not c.is_constant else self.variable
        return FormalBundleSum(self.model, terms, variable)

    def merged(self) -> "FormalBundleSum":
        """Collect terms with equal c₁; drop zero coefficients."""
        out: list[BundleTerm] = []
        for term in self.terms:
            for i, seen in enumerate(out):
                if seen.c1 == term.c1:
                    out[i] = BundleTerm(seen.coefficient + term.coefficient, seen.c1, seen.label, seen.power)
                    break
            else:
                out.append(term)
        return FormalBundleSum(self.model, tuple(t for t in out if not t.coefficient.is_zero), self.variable)

    @property
    def is_constant(self) -> bool:
        return all(t.coefficient.is_constant for t in self.terms)

    def has_positive_coefficient(self) -> bool:
        # Nonnegative linear functions on [0,1] vanish inside only when ≡ 0.
        return any(not t.coefficient.is_zero for t in self.terms)

    def at(self, value) -> "FormalBundleSum":
        terms = tuple(
            BundleTerm(LinScalar.const(t.coefficient.at(value), self.variable), t.c1, t.label, t.power)
            for t in self.terms
        )
        return FormalBundleSum(self.model, terms, self.variable)

    # ── Chern data ──

    def rank(self) -> LinScalar:
        return sum((t.coefficient for t in self.terms), LinScalar.const(0, self.variable))

    def c1(self) -> GradedClass:
        return sum((t.c1 * t.coefficient.expr for t in self.terms), self.model.zero())

    def ch2(self) -> GradedClass:
        return sum(((t.c1 * t.c1) * (t.coefficient.expr / 2) for t in self.terms), self.model.zero())

    def ch(self) -> GradedClass:
        return sum(
            (self.model.exp_class(t.c1) * t.coefficient.expr for t in self.terms), self.model.zero()
        )

    def describe(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({t.coefficient})·{t.label}" for t in self.terms)


def _lin(coefficient, variable: str) -> LinScalar:
    if isinstance(coefficient, LinScalar):
        return coefficient
    return LinScalar.from_expr(coefficient, variable)


# ── Module-level operations ──

def sum_rank(B: FormalBundleSum) -> LinScalar:
    return B.rank()


def sum_c1(B: FormalBundleSum) -> GradedClass:
    return B.c1()


def sum_ch2(B: FormalBundleSum) -> GradedClass:
    return B.ch2()


def tensor_sum(B: FormalBundleSum, C: FormalBundleSum) -> FormalBundleSum:
    """Distribute B ⊗ C term by term. At most one factor may vary."""
    if B.model is not C.model:
        raise InputError("Bundle sums from different models")
    if not B.is_constant and not C.is_constant:
        raise InputError("Tensor of two parameter-dependent sums is not linear")
    variable = C.variable if B.is_constant else B.variable
    terms = []
    for b in B.terms:
        for c in C.terms:
            label = c.label if b.label == "O" else b.label if c.label == "O" else f"{b.label}⊗{c.label}"
            terms.append(BundleTerm(b.coefficient * c.coefficient, b.c1 + c.c1, label))
    return FormalBundleSum(B.model, tuple(terms), variable).merged()


def euler_characteristic(E: SheafType, L: GradedClass, B: Optional[FormalBundleSum] = None) -> Poly:
    """χ(E ⊗ L^k ⊗ B) = ∫ ch(E)·e^{k c₁(L)}·ch(B)·Todd(X), as a polynomial in k."""
    model = E.model
    twist = B.ch() if B is not None else model.one()
    base = E.ch * twist * model.todd
    expr = sum(
        (K ** i * (term * base).integrate() for i, term in enumerate(model.exp_divisor(L))),
        Rational(0),
    )
    return Poly(expand(expr), K)
