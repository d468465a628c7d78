"""Walls in the ample cone and walls on segments."""

import pytest
from sympy import Rational

from chow.builtin import builtin_model
from errors import CheckFailure, InputError
from sheaves import SheafType
from stability import SubsheafFamily
from walls import (
    ChamberDecomposition,
    Separation,
    Wall,
    WallKind,
    ample_line_table,
    beta,
    classify_separation,
    is_general,
    representative,
    second_kind_membership,
    segment_walls,
    wall_function,
    walls_on_ample_line,
)


def test_beta_at_the_worked_endpoints(worked):
    F, tau = worked["F"], worked["tau"]
    assert beta(F, tau, worked["L0"]) == (-1, Rational(-1, 2), 0)
    assert beta(F, tau, worked["L1"])[0] == 4


def test_wall_kinds(worked):
    F, tau = worked["F"], worked["tau"]
    assert wall_function(F, tau, 1).kind == WallKind.NONTRIVIAL
    assert wall_function(F, tau, 3).kind == WallKind.EVERYTHING
    assert wall_function(F, tau, 3).is_trivial
    G = SheafType.from_parts(worked["model"], "G", 1, [{}, {}, {"h1h2^2": 1}])
    assert wall_function(G, tau, 3).kind == WallKind.EMPTY
    with pytest.raises(InputError):
        wall_function(F, tau, 0)


def test_first_kind_wall_on_the_ample_line(worked):
    F, tau, L0, L1 = worked["F"], worked["tau"], worked["L0"], worked["L1"]
    assert walls_on_ample_line(F, tau, L0, L1, 1).exact_roots == (Rational(1, 3),)
    assert walls_on_ample_line(F, tau, L0, L1, 2).exact_roots == (Rational(1, 5),)
    on_line = wall_function(F, tau, 1).on_line(L0, L1)
    assert on_line.eval(0) == -1
    assert on_line.eval(1) == 4


def test_worked_separation_has_a_second_kind_wall(worked):
    report = classify_separation(worked["fam"], worked["tau"], worked["L0"], worked["L1"])
    assert report.verdict == Separation.OTHER
    assert report.counts == {1: 1, 2: 1}
    assert "second-kind" in str(report)


def test_single_first_kind_when_the_second_wall_vanishes(worked):
    model, tau = worked["model"], worked["tau"]
    F = SheafType.from_parts(model, "F'", 1, [
        {"h1": 3, "h2": -2},
        {"h1h2": Rational(-5, 2), "h2^2": 3},
    ])
    assert wall_function(F, tau, 2).is_trivial
    report = classify_separation(SubsheafFamily(tau, (F,)), tau, worked["L0"], worked["L1"])
    assert report.verdict == Separation.SINGLE_FIRST_KIND
    assert report.roots[1] == [("F'", "1/3")]


def test_separation_flags_an_endpoint_on_a_wall(worked):
    model, tau = worked["model"], worked["tau"]
    on_wall = model.divisor([3, 4])
    report = classify_separation(worked["fam"], tau, on_wall, worked["L1"])
    assert report.verdict == Separation.OTHER
    assert ("F", 1, 0) in report.endpoint_hits


def test_surface_separation_reports_counts(surface):
    report = classify_separation(surface["fam"], surface["tau"], surface["L0"], surface["L1"])
    assert report.verdict == Separation.OTHER
    assert report.counts == {1: 1}
    assert report.detail == "per-index counts i=1: 1"


def test_general_and_second_kind_membership(worked):
    model, fam, tau = worked["model"], worked["fam"], worked["tau"]
    assert is_general(worked["L0"], fam, tau).ok
    report = is_general(model.divisor([3, 4]), fam, tau)
    assert not report.ok
    assert report.witnesses == (("F", 1),)
    assert str(report) == "no, witness (F, 1)"
    assert second_kind_membership(model.divisor([3, 4]), fam, tau).ok
    assert second_kind_membership(model.divisor([5, 6]), fam, tau).witnesses == (("F", 2),)


# ── Segments ──

def test_worked_sigma_walls(worked):
    chambers = segment_walls(worked["sigma"].segment, worked["fam"])
    assert chambers.values == [Rational(1, 2)]
    assert chambers.walls[0].tags == (("F", 1), ("F", 2))
    assert chambers.chambers == [(0, Rational(1, 2)), (Rational(1, 2), 1)]
    assert chambers.representatives == [Rational(1, 4), Rational(3, 4)]


def test_chamber_lookup():
    chambers = ChamberDecomposition((Wall(Rational(1, 3)), Wall(Rational(2, 3))))
    assert chambers.chamber_of("1/2") == 1
    assert chambers.neighbours("2/3") == ((Rational(1, 3), Rational(2, 3)), (Rational(2, 3), 1))
    with pytest.raises(InputError):
        chambers.chamber_of("1/3")
    with pytest.raises(InputError):
        chambers.chamber_of("3/2")


def test_representative_nudges_into_the_lower_half():
    assert representative(0, "1/2").value == Rational(1, 4)
    picked = representative(0, "1/2", lambda v: v != Rational(1, 4))
    assert picked.value == Rational(1, 8)
    assert picked.nudges == 1
    with pytest.raises(CheckFailure):
        representative(0, 1, lambda v: False, depth=3)


def test_ample_line_table_marks_walls(worked):
    rows = ample_line_table(worked["F"], worked["tau"], worked["L0"], worked["L1"], 4)
    assert [row["u"] for row in rows] == ["0", "0.2", "0.25", "1/3", "0.5", "0.75", "1"]
    walls = [row["u"] for row in rows if row["wall"]]
    assert walls == ["0.2", "1/3"]
    assert rows[0]["beta1"] == "-1"
    assert rows[1]["beta2"] == "0"
    assert rows[3]["beta1"] == "0"
    assert set(rows[0]) == {"u", "wall", "beta1", "beta2", "beta3"}


# ── Walls that touch the line without crossing it ──

@pytest.fixture
def touching():
    """On P¹×P¹×P¹, β_{F,1} along L0 → L1 is 2(2u − 1)²: zero at 1/2, positive elsewhere."""
    model = builtin_model("p1p1p1")
    tau = SheafType.from_parts(model, "tau", 2)
    F = SheafType.from_parts(model, "F", 1, [{"h1": 1, "h2": 3, "h3": -3}])
    return {
        "model": model,
        "tau": tau,
        "F": F,
        "L0": model.divisor([1, 1, 1]),
        "L1": model.divisor([1, 5, 2]),
        "fam": SubsheafFamily(tau, (F,)),
    }


def test_double_root_is_reported_with_its_multiplicity(touching):
    report = walls_on_ample_line(touching["F"], touching["tau"], touching["L0"], touching["L1"], 1)
    assert report.exact_roots == (Rational(1, 2),)
    assert report.exact_multiplicities == (2,)
    assert report.sign_change_roots == ()
    assert report.touching_roots == (Rational(1, 2),)


def test_double_root_is_not_a_first_kind_crossing(touching):
    report = classify_separation(touching["fam"], touching["tau"], touching["L0"], touching["L1"])
    assert report.counts == {1: 0, 2: 0}
    assert report.roots[1] == []
    assert report.touching == {1: [("F", "1/2")]}
    assert report.verdict == Separation.NO_WALL


def test_touching_wall_next_to_a_crossing_wall(touching):
    # H = O(0, 3, −2): β₁ ∝ 1 − 5u crosses at 1/5, β₂ = −4 − 5u never vanishes.
    model, tau = touching["model"], touching["tau"]
    H = SheafType.from_parts(model, "H", 1, [{"h2": 3, "h3": -2}])
    fam = SubsheafFamily(tau, (touching["F"], H))
    report = classify_separation(fam, tau, touching["L0"], touching["L1"])
    assert report.counts == {1: 1, 2: 0}
    assert report.roots[1] == [("H", "1/5")]
    assert report.touching == {1: [("F", "1/2")]}
    assert report.verdict == Separation.SINGLE_FIRST_KIND


# ── Properties ──

def _random_type(model, name, rng):
    parts = [
        {label: Rational(rng.randint(-4, 4), rng.randint(1, 3)) for label in model.basis[degree]}
        for degree in range(1, model.dim + 1)
    ]
    return SheafType.from_parts(model, name, 1, parts)


def _random_ample(model, rng):
    return model.divisor([Rational(rng.randint(1, 9), rng.randint(1, 4)) for _ in model.basis[1]])


def test_top_wall_function_does_not_see_the_polarisation(worked, rng):
    model, tau = worked["model"], worked["tau"]
    for _ in range(20):
        F = _random_type(model, "F", rng)
        top = wall_function(F, tau, model.dim)
        assert not top.form.free_symbols
        values = {beta(F, tau, _random_ample(model, rng))[-1] for _ in range(5)}
        assert values == {top.form}


def test_walls_depend_only_on_the_chern_character(worked, rng):
    model, tau, sigma = worked["model"], worked["tau"], worked["sigma"].segment
    for _ in range(10):
        F = _random_type(model, "F", rng)
        twin = SheafType("twin", F.ch)
        for i in range(1, model.dim + 1):
            assert wall_function(F, tau, i).form == wall_function(twin, tau, i).form
        L = _random_ample(model, rng)
        assert beta(F, tau, L) == beta(twin, tau, L)
        alone = segment_walls(sigma, SubsheafFamily(tau, (F,))).values
        assert segment_walls(sigma, SubsheafFamily(tau, (twin,))).values == alone
