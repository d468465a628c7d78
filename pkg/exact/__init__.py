"""
🔢 ZoomWall Exact — rationals, parameter-linear scalars, lexicographic signs

Everything downstream is exact. Scalars are sympy Rationals, polynomials
are sympy Polys over QQ in one of the named symbols below, and nothing in
the computation path ever touches a float.

Symbols:
  t, s, r   segment parameters (σ, η, ζ)
  k         the twisting exponent of Hilbert polynomials
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

from sympy import Expr, Poly, Rational, Symbol, SympifyError, factorial, sympify

from errors import InputError
from .roots import (
    RootReport,
    as_poly,
    isolate_roots,
    sign_at,
    sign_left_of,
    sign_right_of,
    sign_of,
)

logger = logging.getLogger("zoomwall.exact")

T = Symbol("t")
S = Symbol("s")
R = Symbol("r")
K = Symbol("k")

PARAMETERS = {"t": T, "s": S, "r": R}

Scalar = Union[Rational, Expr]

__all__ = [
    "T", "S", "R", "K", "PARAMETERS",
    "rat", "rat_str", "exact_decimal", "parameter",
    "LinScalar", "lex_sign", "stabilization_bound",
    "RootReport", "as_poly", "isolate_roots",
    "sign_at", "sign_left_of", "sign_right_of", "sign_of",
]


def parameter(name: str) -> Symbol:
    """Segment parameter symbol by name."""
    if name not in PARAMETERS:
        raise InputError(f"Unknown parameter '{name}'. Use one of: {', '.join(PARAMETERS)}")
    return PARAMETERS[name]


def rat(value) -> Rational:
    """
    Parse anything exact into a Rational.
    Accepts ints, Fractions, sympy numbers and strings like "3/2", "-4", "0.25".
    Floats are refused: they are already rounded.
    """
    if isinstance(value, bool):
        raise InputError(f"Not a rational number: {value!r}")
    if isinstance(value, float):
        raise InputError(f"Binary floats are not accepted, write {value!r} as 'p/q'")
    if isinstance(value, Fraction):
        return Rational(value.numerator, value.denominator)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise InputError("Empty string is not a rational number")
        try:
            parsed = Rational(text)
        except (TypeError, ValueError, SympifyError, ZeroDivisionError) as e:
            raise InputError(f"Not a rational number: '{value}' ({e})")
        return parsed
    try:
        parsed = sympify(value)
    except SympifyError as e:
        raise InputError(f"Not a rational number: {value!r} ({e})")
    if not parsed.is_Rational:
        raise InputError(f"Not a rational number: {value!r}")
    return Rational(parsed)


def rat_str(value) -> str:
    """Serialize a Rational as 'p/q' (or 'n' when integral)."""
    return str(rat(value))


def exact_decimal(value) -> str:
    """Terminating decimal expansion when one exists, else 'p/q'."""
    q = rat(value)
    p, d = int(q.p), int(q.q)
    twos = fives = 0
    rest = d
    while rest % 2 == 0:
        rest //= 2
        twos += 1
    while rest % 5 == 0:
        rest //= 5
        fives += 1
    if rest != 1:
        return f"{p}/{d}"
    digits = max(twos, fives)
    if digits == 0:
        return str(p)
    scaled = abs(p) * (10 ** digits) // d
    sign = "-" if p < 0 else ""
    whole, frac = divmod(scaled, 10 ** digits)
    return f"{sign}{whole}.{str(frac).rjust(digits, '0')}"


# ═══════════════════════════════════════════════════════════
# PARAMETER-LINEAR SCALARS
# ═══════════════════════════════════════════════════════════

@dataclass(frozen=True)
class LinScalar:
    """c + m·v for a segment parameter v ∈ [0,1]."""

    constant: Rational
    slope: Rational = Rational(0)
    variable: str = "t"

    def __post_init__(self):
        object.__setattr__(self, "constant", rat(self.constant))
        object.__setattr__(self, "slope", rat(self.slope))
        parameter(self.variable)

    @classmethod
    def const(cls, value, variable: str = "t") -> "LinScalar":
        return cls(rat(value), Rational(0), variable)

    @classmethod
    def from_expr(cls, expr, variable: str) -> "LinScalar":
        """Read c + m·v back from a sympy expression; anything else is an error."""
        var = parameter(variable)
        expr = sympify(expr)
        if expr.free_symbols - {var}:
            raise InputError(f"'{expr}' depends on more than the parameter {variable}")
        poly = Poly(expr, var)
        if poly.degree() > 1:
            raise InputError(f"'{expr}' is not linear in {variable}")
        return cls(rat(poly.coeff_monomial(var ** 0)), rat(poly.coeff_monomial(var)), variable)

    @property
    def expr(self) -> Expr:
        return self.constant + self.slope * PARAMETERS[self.variable]

    @property
    def is_constant(self) -> bool:
        return self.slope == 0

    @property
    def is_zero(self) -> bool:
        return self.constant == 0 and self.slope == 0

    def at(self, value) -> Rational:
        return self.constant + self.slope * rat(value)

    def nonnegative_on_unit(self) -> bool:
        return self.at(0) >= 0 and self.at(1) >= 0

    def _merge_variable(self, other: "LinScalar") -> str:
        if self.is_constant:
            return other.variable
        if other.is_constant or other.variable == self.variable:
            return self.variable
        raise InputError(f"Cannot combine scalars in {self.variable} and {other.variable}")

    def __add__(self, other):
        if not isinstance(other, LinScalar):
            other = LinScalar.const(other, self.variable)
        return LinScalar(self.constant + other.constant, self.slope + other.slope,
                         self._merge_variable(other))

    __radd__ = __add__

    def __neg__(self):
        return LinScalar(-self.constant, -self.slope, self.variable)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, LinScalar):
            if self.is_constant:
                return LinScalar(self.constant * other.constant, self.constant * other.slope,
                                 other.variable)
            if other.is_constant:
                return LinScalar(self.constant * other.constant, self.slope * other.constant,
                                 self.variable)
            raise InputError("Product of two parameter-dependent scalars is not linear")
        c = rat(other)
        return LinScalar(self.constant * c, self.slope * c, self.variable)

    __rmul__ = __mul__

    def __str__(self):
        return str(self.expr)


# ═══════════════════════════════════════════════════════════
# LEXICOGRAPHIC SIGNS
# ═══════════════════════════════════════════════════════════

def _evaluate(entry, at, variable: str):
    if isinstance(entry, Poly):
        expr = entry.as_expr()
        if at is not None:
            expr = expr.subs(entry.gens[0], rat(at))
        return expr
    if isinstance(entry, LinScalar):
        return entry.at(at)
    expr = sympify(entry)
    if at is not None:
        expr = expr.subs(parameter(variable), rat(at))
    return expr


def lex_sign(entries: Iterable, at=None, variable: str = "t") -> int:
    """
    Sign of ⟨⟨p₁||…||p_d⟩⟩ against zero: the sign of the first nonzero entry.
    Parameter-dependent entries are evaluated at `at` first.
    """
    for entry in entries:
        value = _evaluate(entry, at, variable)
        if not value.is_Number:
            raise InputError(f"Entry '{value}' still depends on a parameter; pass at=")
        if value != 0:
            return sign_of(value)
    return 0


def stabilization_bound(entries: Iterable) -> Rational:
    """
    A k₀ beyond which Σ p_i k^{d−i}/(d−i)! has the sign lex_sign(p).
    Cauchy bound on the polynomial trimmed to its leading nonzero entry.
    """
    values = [rat(v) for v in entries]
    d = len(values)
    coeffs = [v / factorial(d - 1 - i) for i, v in enumerate(values)]
    lead_index: Optional[int] = next((i for i, c in enumerate(coeffs) if c != 0), None)
    if lead_index is None:
        return Rational(0)
    lead = coeffs[lead_index]
    tail = [abs(c / lead) for c in coeffs[lead_index + 1:]]
    return Rational(1) + (max(tail) if tail else Rational(0))
