"""
🔍 Real-root isolation over QQ

Linear and quadratic polynomials are settled directly: the discriminant
says whether the roots are rational. Higher degrees are factored over QQ
(every linear factor is a rational root). Irreducible factors of degree
≥ 2 have no rational roots, so their roots are isolated with Sturm
sequences and bisection, then the intervals are refined until they are
pairwise disjoint and miss every exact root.

Multiplicities are kept: a root of even multiplicity touches zero without
a sign change.
"""

import logging
from dataclasses import dataclass, field

from sympy import Poly, QQ, Rational, Symbol, sqrt, sympify

from errors import InputError

logger = logging.getLogger("zoomwall.exact.roots")

_DEFAULT_VAR = Symbol("t")


@dataclass(frozen=True)
class RootReport:
    """Every real root of a polynomial inside an open interval.

    exact_multiplicities and interval_multiplicities run parallel to
    exact_roots and irrational_root_intervals.
    """

    exact_roots: tuple = ()
    irrational_root_intervals: tuple = ()
    identically_zero: bool = False
    exact_multiplicities: tuple = ()
    interval_multiplicities: tuple = ()

    def __post_init__(self):
        if not self.exact_multiplicities:
            object.__setattr__(self, "exact_multiplicities", (1,) * len(self.exact_roots))
        if not self.interval_multiplicities:
            object.__setattr__(self, "interval_multiplicities", (1,) * len(self.irrational_root_intervals))

    @property
    def count(self) -> int:
        return len(self.exact_roots) + len(self.irrational_root_intervals)

    @property
    def has_irrational(self) -> bool:
        return bool(self.irrational_root_intervals)

    @property
    def sign_change_roots(self) -> tuple:
        return tuple(r for r, m in zip(self.exact_roots, self.exact_multiplicities) if m % 2)

    @property
    def sign_change_intervals(self) -> tuple:
        return tuple(
            pair for pair, m in zip(self.irrational_root_intervals, self.interval_multiplicities) if m % 2
        )

    @property
    def touching_roots(self) -> tuple:
        """Exact roots where the polynomial keeps its sign."""
        return tuple(r for r, m in zip(self.exact_roots, self.exact_multiplicities) if not m % 2)

    @property
    def sign_changes(self) -> int:
        return len(self.sign_change_roots) + len(self.sign_change_intervals)

def sign_of(value) -> int:
    if value > 0:
        return 1
    if value < 0:
        return -1
    return 0


def as_poly(p, variable=None) -> Poly:
    """Coerce a Rational, expression or Poly into a univariate Poly over QQ."""
    if isinstance(p, Poly):
        if len(p.gens) != 1:
            raise InputError(f"Expected a univariate polynomial, got gens {p.gens}")
        return p
    expr = sympify(p)
    free = expr.free_symbols
    if variable is None:
        if len(free) > 1:
            raise InputError(f"'{expr}' is not univariate")
        variable = next(iter(free)) if free else _DEFAULT_VAR
    elif isinstance(variable, str):
        variable = Symbol(variable)
    if free - {variable}:
        raise InputError(f"'{expr}' depends on symbols other than {variable}")
    return Poly(expr, variable, domain=QQ)


def sign_at(p, x) -> int:
    poly = as_poly(p)
    return sign_of(poly.eval(Rational(x)))


def sign_right_of(p, x) -> int:
    """Sign on (x, x+ε): the first nonvanishing derivative at x decides."""
    poly = as_poly(p)
    if poly.is_zero:
        return 0
    x = Rational(x)
    while True:
        value = poly.eval(x)
        if value != 0:
            return sign_of(value)
        poly = poly.diff()


def sign_left_of(p, x) -> int:
    """Sign on (x−ε, x): like sign_right_of, with odd derivatives flipped."""
    poly = as_poly(p)
    if poly.is_zero:
        return 0
    x = Rational(x)
    order = 0
    while True:
        value = poly.eval(x)
        if value != 0:
            return sign_of(value) * (-1) ** order
        poly = poly.diff()
        order += 1


# ── Sturm machinery ──

@dataclass
class _Isolating:
    lo: Rational
    hi: Rational
    sturm: list = field(repr=False)
    multiplicity: int = 1

    def variations(self, x) -> int:
        values = [q.eval(x) for q in self.sturm]
        signs = [sign_of(v) for v in values if v != 0]
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    def count(self, lo, hi) -> int:
        # Irreducible of degree ≥ 2: never zero at a rational point.
        return self.variations(lo) - self.variations(hi)

    def refine(self):
        mid = (self.lo + self.hi) / 2
        if self.count(self.lo, mid) == 1:
            self.hi = mid
        else:
            self.lo = mid

    def overlaps(self, other: "_Isolating") -> bool:
        return self.lo < other.hi and other.lo < self.hi

    def contains(self, x) -> bool:
        return self.lo < x < self.hi




def _isolate_irreducible(factor: Poly, lo, hi, multiplicity: int = 1) -> list[_Isolating]:
    sturm = factor.sturm()
    counter = _Isolating(lo, hi, sturm)
    found = []
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        n = counter.count(a, b)
        if n == 0:
            continue
        if n == 1:
            found.append(_Isolating(a, b, sturm, multiplicity))
            continue
        mid = (a + b) / 2
        stack.extend([(mid, b), (a, mid)])
    return found


def _small_degree_roots(poly: Poly) -> dict | None:
    """Roots of a linear or quadratic poly with multiplicities, None if irrational."""
    coeffs = [Rational(c) for c in poly.all_coeffs()]
    if len(coeffs) == 2:
        a, b = coeffs
        return {-b / a: 1}
    a, b, c = coeffs
    disc = b * b - 4 * a * c
    if disc < 0:
        return {}
    if disc == 0:
        return {-b / (2 * a): 2}
    root = sqrt(disc)
    if not root.is_Rational:
        return None
    return {(-b - root) / (2 * a): 1, (-b + root) / (2 * a): 1}


def isolate_roots(p, lo, hi) -> RootReport:
    """Every real root of p in the open interval (lo, hi)."""
    lo, hi = Rational(lo), Rational(hi)
    if not lo < hi:
        raise InputError(f"Empty interval ({lo}, {hi})")
    poly = as_poly(p)
    if poly.is_zero:
        return RootReport(identically_zero=True)
    if poly.degree() < 1:
        return RootReport()

    exact: dict = {}
    pending: list[_Isolating] = []
    shortcut = _small_degree_roots(poly) if poly.degree() <= 2 else None
    if shortcut is not None:
        exact = {r: m for r, m in shortcut.items() if lo < r < hi}
    elif poly.degree() <= 2:
        # Irreducible quadratic.
        pending.extend(_isolate_irreducible(poly, lo, hi))
    else:
        _, factors = poly.factor_list()
        for factor, multiplicity in factors:
            degree = factor.degree()
            if degree < 1:
                continue
            if degree == 1:
                a, b = factor.all_coeffs()
                root = Rational(-b) / Rational(a)
                if lo < root < hi:
                    exact[root] = exact.get(root, 0) + multiplicity
            else:
                pending.extend(_isolate_irreducible(factor, lo, hi, multiplicity))

    # Separate intervals from each other and from the exact roots.
    clashing = True
    while clashing:
        clashing = False
        for i, item in enumerate(pending):
            hit = any(item.contains(x) for x in exact) or any(
                item.overlaps(other) for j, other in enumerate(pending) if j != i
            )
            if hit:
                item.refine()
                clashing = True

    pending.sort(key=lambda it: it.lo)
    if pending:
        logger.debug(f"Isolated {len(pending)} irrational root(s) of {poly.as_expr()}")
    roots = tuple(sorted(exact))
    return RootReport(
        exact_roots=roots,
        irrational_root_intervals=tuple((it.lo, it.hi) for it in pending),
        exact_multiplicities=tuple(exact[r] for r in roots),
        interval_multiplicities=tuple(it.multiplicity for it in pending),
    )
