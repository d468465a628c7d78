"""Multi-Hilbert comparison, verdicts and segment predicates."""

import pytest
from sympy import Poly, Rational, expand

from errors import InputError
from exact import K, R, T
from segments import make_sigma
from sheaves import FormalBundleSum, SheafType, structure_sheaf
from stability import (
    Polarisation,
    StabilityParameter,
    StabilitySegment,
    SubsheafFamily,
    Verdict,
    compare,
    difference_vector,
    equivalent_at,
    equivalent_between,
    is_open,
    is_uniform,
    multi_hilbert,
    multiplicity,
    semistable,
    slope,
    sweep,
    verdict_vector,
)


def test_worked_difference_vector(worked):
    vector = difference_vector(worked["F"], worked["tau"], worked["sigma"].segment)
    h1, h2, h3 = vector.entries
    assert expand(h1 - (2 * T - 1) / 3) == 0
    assert expand(h2 - (2 * T - 1) / 6) == 0
    assert h3 == 0


@pytest.mark.parametrize("t, verdict", [
    ("1/4", Verdict.STABLE),
    ("1/2", Verdict.PROPERLY_SEMISTABLE),
    ("3/4", Verdict.UNSTABLE),
])
def test_worked_verdicts(worked, t, verdict):
    result = semistable(worked["tau"], worked["fam"], worked["sigma"].segment, Rational(t))
    assert result.verdict == verdict
    assert "relative to family of 1 member(s)" in str(result)


def test_compare_at_fixed_parameter(worked):
    sigma_at = worked["sigma"].segment.at("1/4")
    assert isinstance(sigma_at, StabilityParameter)
    assert sigma_at.is_normalized
    assert compare(worked["F"], worked["tau"], sigma_at) == -1


def test_multiplicity_is_rank_when_normalized(worked):
    seg = worked["sigma"].segment
    assert seg.is_normalized
    assert multiplicity(worked["tau"], seg) == 2
    assert multiplicity(worked["F"], seg) == 1


def test_unnormalized_parameter(worked):
    model = worked["model"]
    pair = Polarisation(worked["L0"], FormalBundleSum.trivial(model, 1), "L0")
    sigma = StabilityParameter((pair,))
    assert sigma.mass() == 3
    assert not sigma.is_normalized
    assert sigma.scaled(Rational(1, 3)).is_normalized
    # plain Gieseker for L0: the leading coefficient is rank·vol
    assert multiplicity(worked["tau"], sigma) == 6


def test_parameter_needs_a_positive_twist(worked):
    model = worked["model"]
    pair = Polarisation(worked["L0"], FormalBundleSum.trivial(model, 0), "L0")
    with pytest.raises(InputError):
        StabilityParameter((pair,))
    with pytest.raises(InputError):
        StabilityParameter(())


@pytest.mark.parametrize("coefficients, end", [
    (("1 - t", "0"), "1"),
    (("0", "t"), "0"),
    (("(1 - t)/3", "(1 - t)/12"), "1"),
])
def test_segment_needs_a_positive_twist_at_both_ends(worked, coefficients, end):
    model = worked["model"]
    pairs = tuple(
        Polarisation(L, FormalBundleSum.trivial(model, c), label)
        for L, c, label in zip((worked["L0"], worked["L1"]), coefficients, ("L0", "L1"))
    )
    with pytest.raises(InputError) as info:
        StabilitySegment(pairs, "t")
    assert info.value.witness == {"at": end}


def test_segment_twist_may_vanish_where_another_is_positive(worked):
    sigma = worked["sigma"].segment
    assert sigma.pairs[0].B.rank().at(1) == 0
    assert sigma.at(1).pairs[1].B.rank().at(0) > 0
    assert multiplicity(worked["tau"], sigma.at(1)) == 2


def test_multi_hilbert_is_a_sum_of_chis(worked):
    model = worked["model"]
    O = structure_sheaf(model)
    pair = Polarisation(worked["L0"], FormalBundleSum.trivial(model, 1), "L0")
    P = multi_hilbert(O, StabilityParameter((pair,)))
    assert P.eval(3) == 40


def test_family_excludes_bad_ranks(worked, caplog):
    model = worked["model"]
    too_big = SheafType.from_parts(model, "G", 2)
    fam = SubsheafFamily(worked["tau"], (worked["F"], too_big))
    assert fam.names == ["F"]
    assert "excluded from verdicts" in caplog.text


def test_verdict_vector_and_sweep(worked, monkeypatch):
    seg = worked["sigma"].segment
    assert verdict_vector(worked["fam"], seg, "1/4") == (-1,)
    monkeypatch.setenv("ZOOMWALL_WORKERS", "4")
    assert sweep(lambda x: x * x, range(6)) == [0, 1, 4, 9, 16, 25]


# ── Uniformity ──

def test_sigma_is_not_difference_uniform(worked):
    report = is_uniform(worked["sigma"].segment, "difference")
    assert not report.uniform
    assert report.witness["k_power"] == 2
    assert report.witness["index"] == 1
    assert str(report).startswith("not uniform (difference)")


def test_unknown_uniformity_mode(worked):
    with pytest.raises(InputError):
        is_uniform(worked["sigma"].segment, "loose")


def test_zeta_is_strictly_uniform(worked_zeta):
    assert is_uniform(worked_zeta.segment, "strict").uniform
    assert str(is_uniform(worked_zeta.segment, "difference")) == "uniform (difference)"


def test_constant_segment_is_strictly_uniform(worked):
    sigma = worked["sigma"].segment.at("1/3")
    assert is_uniform(StabilitySegment.constant(sigma), "strict").uniform


def test_uniform_cross_products_are_linear(worked, worked_zeta, rng):
    seg = worked_zeta.segment
    model = worked["model"]
    tau_poly = multi_hilbert(worked["tau"], seg).as_expr()
    for _ in range(10):
        F = SheafType.from_parts(model, "G", 1, [
            {"h1": rng.randint(-4, 4), "h2": rng.randint(-4, 4)},
            {"h1h2": Rational(rng.randint(-6, 6), 2), "h2^2": rng.randint(-3, 3)},
            {"h1h2^2": Rational(rng.randint(-6, 6), 3)},
        ])
        F_poly = multi_hilbert(F, seg).as_expr()
        for _ in range(10):
            n, m = rng.randint(0, 20), rng.randint(0, 20)
            cross = expand(
                F_poly.subs(K, n) * tau_poly.subs(K, m) - tau_poly.subs(K, n) * F_poly.subs(K, m)
            )
            assert cross.free_symbols <= {R}
            assert cross == 0 or Poly(cross, R).degree() <= 1


# ── Openness and equivalence ──

def test_worked_sigma_is_open(worked):
    report = is_open(worked["sigma"].segment, worked["fam"])
    assert report.open
    assert str(report) == "open"


def test_segment_ending_on_a_wall_is_not_open(worked):
    sigma = make_sigma(worked["L0"], worked["L1"])
    # the half of σ ending at the wall t = 1/2
    model = worked["model"]
    pairs = tuple(
        Polarisation(p.L, FormalBundleSum.trivial(model, c), p.label)
        for p, c in zip(sigma.segment.pairs, ("(1 - t/2)/3", "t/24"))
    )
    half = StabilitySegment(pairs, "t", "σ½")
    report = is_open(half, worked["fam"])
    assert not report.open
    assert report.witnesses == (("F", 1),)


def test_equivalence(worked):
    seg, fam = worked["sigma"].segment, worked["fam"]
    assert equivalent_at(seg, fam, "1/4", "1/3").equivalent
    report = equivalent_at(seg, fam, "1/4", "3/4")
    assert not report.equivalent
    assert report.witnesses == ("F",)
    assert str(report) == "not equivalent, witness F"
    with pytest.raises(InputError):
        equivalent_at(seg, fam, "1/4", "5/4")


def test_equivalence_across_segments(worked, worked_eta):
    sigma, fam = worked["sigma"].segment, worked["fam"]
    assert equivalent_between(worked_eta.segment, 0, sigma, "1/4", fam).equivalent
    assert equivalent_between(worked_eta.segment, 1, sigma, "3/4", fam).equivalent
    assert not equivalent_between(worked_eta.segment, 0, sigma, "3/4", fam).equivalent


# ── Slope ──

@pytest.mark.parametrize("t, mu", [("0", "-1/3"), ("1/4", "-1/6"), ("1/2", "0"), ("1", "1/3")])
def test_slope_along_sigma(worked, t, mu):
    assert slope(worked["F"], worked["sigma"].segment, Rational(t)) == Rational(mu)
    assert slope(worked["tau"], worked["sigma"].segment, Rational(t)) == 0


def test_slope_needs_a_parameter_on_segments(worked):
    with pytest.raises(InputError):
        slope(worked["F"], worked["sigma"].segment)
