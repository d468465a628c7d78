"""
📐 ZoomWall Chow — numerical even-cohomology ring of X

A NumericalModel is the whole arena: named basis classes per degree, a
product table of structure constants, the Todd class and the point
normalization. GradedClass is an element of it. Coefficients are sympy
expressions so that parameter-dependent classes (c₁(B_j(t)), symbolic
ch(E)) ride through the same arithmetic as plain rationals.
"""

import logging
import re
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from sympy import Expr, Rational, S as SympyS, expand, sympify

from errors import InputError
from exact import rat

logger = logging.getLogger("zoomwall.chow")

ProductTable = dict[tuple[str, str], dict[str, Rational]]


class GradedClass:
    """An element of the numerical ring: one coordinate vector per degree."""

    __slots__ = ("model", "components")

    def __init__(self, model: "NumericalModel", components: Sequence[Sequence]):
        self.model = model
        self.components = tuple(tuple(expand(sympify(x)) for x in comp) for comp in components)

    # ── arithmetic ──

    def _check(self, other: "GradedClass"):
        if other.model is not self.model:
            raise InputError(
                f"Model mismatch: '{self.model.name}' vs '{other.model.name}'",
                {"left": self.model.name, "right": other.model.name},
            )

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self  # lets sum() work
        self._check(other)
        return GradedClass(self.model, [
            [a + b for a, b in zip(ca, cb)] for ca, cb in zip(self.components, other.components)
        ])

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, GradedClass):
            return self.model.multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, other):
        return self.scale(1 / sympify(other))

    def __pow__(self, n: int):
        result = self.model.one()
        for _ in range(n):
            result = result * self
        return result

    def scale(self, c) -> "GradedClass":
        c = sympify(c)
        return GradedClass(self.model, [[c * x for x in comp] for comp in self.components])

    def __eq__(self, other):
        if not isinstance(other, GradedClass) or other.model is not self.model:
            return NotImplemented
        return all(
            expand(a - b) == 0
            for ca, cb in zip(self.components, other.components)
            for a, b in zip(ca, cb)
        )

    __hash__ = None

    # ── structure ──

    def part(self, degree: int) -> "GradedClass":
        """The degree-i component as a class of its own."""
        return GradedClass(self.model, [
            comp if i == degree else [SympyS.Zero] * len(comp)
            for i, comp in enumerate(self.components)
        ])

    def coords(self, degree: int) -> dict[str, Expr]:
        return dict(zip(self.model.basis[degree], self.components[degree]))

    @property
    def is_zero(self) -> bool:
        return all(x == 0 for comp in self.components for x in comp)

    def is_pure(self, degree: int) -> bool:
        return all(x == 0 for i, comp in enumerate(self.components) if i != degree for x in comp)

    @property
    def free_symbols(self) -> set:
        return set().union(*(x.free_symbols for comp in self.components for x in comp))

    def subs(self, *args) -> "GradedClass":
        return GradedClass(self.model, [[x.subs(*args) for x in comp] for comp in self.components])

    def diff(self, symbol) -> "GradedClass":
        return GradedClass(self.model, [[x.diff(symbol) for x in comp] for comp in self.components])

    def integrate(self) -> Expr:
        return self.model.integrate(self)

    def __repr__(self):
        terms = []
        for names, comp in zip(self.model.basis, self.components):
            for name, x in zip(names, comp):
                if x == 0:
                    continue
                if name == self.model.unit_name:
                    terms.append(f"{x}")
                elif x == 1:
                    terms.append(name)
                else:
                    terms.append(f"({x})*{name}")
        return " + ".join(terms) if terms else "0"


# ═══════════════════════════════════════════════════════════
# MODEL VALIDATION REPORT
# ═══════════════════════════════════════════════════════════

@dataclass(frozen=True)
class Violation:
    kind: str  # commutativity, associativity, identity, normalization, grading, todd, basis
    where: str
    detail: str = ""


@dataclass
class ModelReport:
    model: str
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        if self.ok:
            return "model valid"
        lines = [f"model invalid: {len(self.violations)} violation(s)"]
        lines += [f"  - {v.kind} at {v.where}: {v.detail}" for v in self.violations]
        return "\n".join(lines)


# ═══════════════════════════════════════════════════════════
# THE MODEL
# ═══════════════════════════════════════════════════════════

_DIVISOR_RE = re.compile(r"^\s*O\s*(?:\((?P<args>[^)]*)\))?\s*$")


class NumericalModel:
    """
    Numerical ring of a smooth projective X of dimension d.
    Degree 0 and degree d are one-dimensional; the degree-0 generator is the
    unit and the degree-d generator is the point class.
    """

    def __init__(
        self,
        name: str,
        dim: int,
        basis: Sequence[Sequence[str]],
        products: Mapping[tuple[str, str], Mapping[str, object]],
        todd: Mapping[str, object],
        point_value=1,
        validate: bool = True,
    ):
        self.name = name
        self.dim = int(dim)
        self.basis = tuple(tuple(names) for names in basis)
        self.point_value = rat(point_value)
        self.index: dict[str, tuple[int, int]] = {}

        if self.dim < 1 or len(self.basis) != self.dim + 1:
            raise InputError(f"Model '{name}': need basis lists for degrees 0..{self.dim}")
        for degree, names in enumerate(self.basis):
            for pos, label in enumerate(names):
                if label in self.index:
                    raise InputError(f"Model '{name}': basis name '{label}' used twice")
                self.index[label] = (degree, pos)

        self.products: ProductTable = {}
        for (a, b), result in products.items():
            for label in (a, b, *result):
                if label not in self.index:
                    raise InputError(f"Model '{name}': unknown basis name '{label}' in product table")
            self.products[(a, b)] = {label: rat(v) for label, v in result.items()}

        for label in todd:
            if label not in self.index:
                raise InputError(f"Model '{name}': unknown basis name '{label}' in Todd class")
        self.todd = self.from_coords({label: rat(v) for label, v in todd.items()})

        if validate:
            report = self.validate()
            if not report.ok:
                raise InputError(report.summary(), {"violations": [v.__dict__ for v in report.violations]})

    def __repr__(self):
        return f"NumericalModel({self.name!r}, dim={self.dim})"

    # ── element constructors ──

    @property
    def unit_name(self) -> str:
        return self.basis[0][0]

    @property
    def point_name(self) -> str:
        return self.basis[self.dim][0]

    def zero(self) -> GradedClass:
        return GradedClass(self, [[SympyS.Zero] * len(names) for names in self.basis])

    def from_coords(self, coords: Mapping[str, object]) -> GradedClass:
        components = [[SympyS.Zero] * len(names) for names in self.basis]
        for label, value in coords.items():
            if label not in self.index:
                raise InputError(f"Unknown basis name '{label}' in model '{self.name}'")
            degree, pos = self.index[label]
            components[degree][pos] = sympify(value)
        return GradedClass(self, components)

    def element(self, label: str) -> GradedClass:
        return self.from_coords({label: 1})

    def one(self) -> GradedClass:
        return self.element(self.unit_name)

    def point(self) -> GradedClass:
        return self.element(self.point_name)

    def divisor(self, coords: Sequence) -> GradedClass:
        """Degree-1 class from coordinates in the degree-1 basis order."""
        names = self.basis[1]
        if len(coords) != len(names):
            raise InputError(
                f"Divisor needs {len(names)} coordinate(s) ({', '.join(names)}) on '{self.name}', "
                f"got {len(coords)}"
            )
        return self.from_coords({label: rat(v) for label, v in zip(names, coords)})

    def parse_divisor(self, text: str) -> GradedClass:
        """'O(1,2)' → h1 + 2·h2; a bare 'O' is the trivial bundle."""
        match = _DIVISOR_RE.match(text)
        if not match:
            raise InputError(f"Cannot read divisor '{text}' (expected O(a,b,...))")
        args = match.group("args")
        if args is None:
            return self.zero()
        return self.divisor([part for part in args.split(",")])

    def divisor_coords(self, c: GradedClass) -> tuple[Rational, ...]:
        require_divisor(c)
        return tuple(rat(x) for x in c.components[1])

    # ── ring structure ──

    def product_of(self, a: str, b: str) -> dict[str, Rational]:
        """Structure constants for a·b, read symmetrically from the table."""
        if (a, b) in self.products:
            return self.products[(a, b)]
        if (b, a) in self.products:
            return self.products[(b, a)]
        if a == self.unit_name:
            return {b: Rational(1)}
        if b == self.unit_name:
            return {a: Rational(1)}
        return {}

    def multiply(self, a: GradedClass, b: GradedClass) -> GradedClass:
        a._check(b)
        if a.model is not self:
            raise InputError(f"Class from '{a.model.name}' multiplied in '{self.name}'")
        result = [[SympyS.Zero] * len(names) for names in self.basis]
        for p, comp_a in enumerate(a.components):
            for i, x in enumerate(comp_a):
                if x == 0:
                    continue
                for q in range(self.dim + 1 - p):
                    for j, y in enumerate(b.components[q]):
                        if y == 0:
                            continue
                        for label, c in self.product_of(self.basis[p][i], self.basis[q][j]).items():
                            degree, pos = self.index[label]
                            if degree == p + q:
                                result[degree][pos] += x * y * c
        return GradedClass(self, result)

    def integrate(self, a: GradedClass) -> Expr:
        return expand(a.components[self.dim][0] * self.point_value)

    def volume(self, L: GradedClass) -> Expr:
        require_divisor(L)
        return self.integrate(L ** self.dim)

    def exp_divisor(self, L: GradedClass) -> tuple[GradedClass, ...]:
        """e^{k c₁(L)} as its k-coefficients: entry i is c₁(L)^i / i!."""
        require_divisor(L)
        terms = [self.one()]
        for i in range(1, self.dim + 1):
            terms.append(terms[-1] * L / i)
        return tuple(terms)

    def exp_class(self, c1: GradedClass) -> GradedClass:
        """ch of a line bundle: e^{c₁} truncated at degree d."""
        return sum(self.exp_divisor(c1), self.zero())

    # ── validation ──

    def validate(self) -> ModelReport:
        report = ModelReport(self.name)
        add = report.violations.append
        d = self.dim

        for degree in (0, d):
            if len(self.basis[degree]) != 1:
                add(Violation("basis", f"degree {degree}", "must be one-dimensional"))
        if self.point_value != 1:
            add(Violation("normalization", self.point_name, f"point integral is {self.point_value}, not 1"))
        if self.todd.components[0][0] != 1:
            add(Violation("todd", self.unit_name, f"Todd_0 is {self.todd.components[0][0]}, not 1"))

        for (a, b), result in sorted(self.products.items()):
            expected = self.index[a][0] + self.index[b][0]
            for label, value in result.items():
                if value != 0 and self.index[label][0] != expected:
                    add(Violation("grading", f"({a},{b})", f"lands in degree {self.index[label][0]}"))
            if (b, a) in self.products and a < b and _nonzero(self.products[(b, a)]) != _nonzero(result):
                add(Violation("commutativity", f"({a},{b})", f"{a}·{b} ≠ {b}·{a}"))

        unit = self.one()
        for names in self.basis:
            for label in names:
                x = self.element(label)
                if unit * x != x or x * unit != x:
                    add(Violation("identity", label, f"1·{label} ≠ {label}"))

        positive = [label for names in self.basis[1:] for label in names]
        for a in positive:
            for b in positive:
                for c in positive:
                    if self.index[a][0] + self.index[b][0] + self.index[c][0] > d:
                        continue
                    x, y, z = self.element(a), self.element(b), self.element(c)
                    if (x * y) * z != x * (y * z):
                        add(Violation("associativity", f"({a},{b},{c})", "(ab)c ≠ a(bc)"))

        if report.ok:
            logger.debug(f"📐 Model '{self.name}' valid")
        else:
            logger.warning(f"📐 Model '{self.name}' has {len(report.violations)} violation(s)")
        return report


def _nonzero(result: Mapping[str, Rational]) -> dict[str, Rational]:
    return {label: v for label, v in result.items() if v != 0}


def require_divisor(c: GradedClass) -> GradedClass:
    if not c.is_pure(1):
        raise InputError(f"Expected a divisor class (degree 1 only), got {c!r}")
    return c


def intersection(*classes: GradedClass) -> Expr:
    """∫ of a product of classes."""
    if not classes:
        raise InputError("Nothing to intersect")
    product = classes[0]
    for c in classes[1:]:
        product = product * c
    return product.integrate()
