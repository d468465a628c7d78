"""σ, η and ζ construction, twists, and the doubling searches."""

import pytest
from sympy import Rational, expand, sympify

from errors import CheckFailure, InputError, PositivityError
from exact import R, S, T
from segments import (
    alphabeta_lambda_min,
    coefficient_table,
    default_flanks,
    delta_identity_check,
    doubling_search,
    epsilon,
    eta_u_coefficients,
    final_twist_properties,
    hit_closed_form,
    make_eta,
    make_sigma,
    make_zeta,
    minimal_divisibility_a,
    search_a,
    search_b,
    solve_alphabeta,
    wall_point_check,
    zeta_inputs,
)
from sheaves import SheafType
from stability import SubsheafFamily, difference_vector, is_open, is_uniform, verdict_vector
from walls import segment_walls

Q = [[Rational(1, 2), Rational(-1, 2)], [Rational(-1, 2), Rational(1, 2)]]
RANKS = [Rational(1, 6), Rational(1, 24)]
C = [[3, 8], [5, 12]]


# ── σ ──

def test_sigma_coefficients(worked):
    sigma = worked["sigma"]
    assert sigma.sigma(0, "1/4") == Rational(1, 4)
    assert sigma.sigma(1, "1/2") == Rational(1, 24)
    assert coefficient_table(sigma) == {(0, 0): 3, (0, 1): 8, (1, 0): 5, (1, 1): 12}
    assert sigma.generic is True


def test_sigma_flags_non_generic_pairs(worked, caplog):
    L = worked["L0"]
    assert make_sigma(L, L).generic is False
    assert "genericity" in caplog.text


def test_sigma_refuses_zero_volume(p1p2):
    with pytest.raises(InputError):
        make_sigma(p1p2.divisor([1, 0]), p1p2.divisor([1, 1]))


def test_hit_closed_form(worked):
    h1 = hit_closed_form(worked["sigma"], worked["F"], worked["tau"], 1)
    assert expand(h1.as_expr() - (2 * T - 1) / 3) == 0
    assert hit_closed_form(worked["sigma"], worked["F"], worked["tau"], 3).is_zero


# ── η ──

def test_divisibility_modulus(worked):
    assert minimal_divisibility_a(worked["sigma"], "1/2", "1/4", "3/4") == 2


def test_eta_exponents(worked_eta):
    assert worked_eta.a == 2
    assert worked_eta.exponents == {(0, 0): 3, (0, 1): 1, (1, 0): 1, (1, 1): 3}
    assert worked_eta.segment.is_normalized


def test_eta_u_coefficients(worked, worked_eta):
    u = eta_u_coefficients(worked_eta, worked["F"], worked["tau"])
    assert u.u1 == 0
    assert expand(u.u2.as_expr() - (2 * S - 1) / 3) == 0
    assert expand(u.epsilon.as_expr() - (2 * S - 1) / 6) == 0
    assert expand(u.u3.as_expr() - 5 * (2 * S - 1) / 6) == 0
    assert epsilon(worked_eta, worked["F"], worked["tau"]) == u.epsilon


def test_eta_walls_and_openness(worked, worked_eta):
    assert segment_walls(worked_eta.segment, worked["fam"]).values == [Rational(1, 2)]
    assert is_open(worked_eta.segment, worked["fam"]).open


def test_make_eta_rejects_bad_input(worked):
    sigma, fam = worked["sigma"], worked["fam"]
    with pytest.raises(InputError) as info:
        make_eta(sigma, "1/2", "1/4", "3/4", 3)
    assert info.value.witness == {"a": 3, "modulus": 2}
    with pytest.raises(InputError):
        make_eta(sigma, "1/2", "3/4", "1/4", 2)
    a = minimal_divisibility_a(sigma, "1/3", "1/4", "3/4")
    with pytest.raises(InputError):
        make_eta(sigma, "1/3", "1/4", "3/4", a, fam)


def test_default_flanks_are_chamber_midpoints(worked):
    assert default_flanks(worked["sigma"], "1/2", worked["fam"]) == (Rational(1, 4), Rational(3, 4), 0)


def test_search_a_accepts_the_modulus(worked):
    outcome = search_a(worked["sigma"], "1/2", "1/4", "3/4", worked["fam"])
    assert outcome.value == 2
    assert outcome.tries == 1
    assert outcome.result.exponents == {(0, 0): 3, (0, 1): 1, (1, 0): 1, (1, 1): 3}


def test_search_a_doubles_past_the_modulus(worked):
    # ch₂ = 4h₂² moves h₂(t̄) to 5/6 while h₁(t₀) stays −1/6: η(0) matches σ(t₀) once a > 5.
    model, tau, sigma = worked["model"], worked["tau"], worked["sigma"]
    F = SheafType.from_parts(model, "F", 1, [{"h1": 3, "h2": -2}, {"h2^2": 4}])
    fam = SubsheafFamily(tau, (F,))
    h2 = hit_closed_form(sigma, F, tau, 2)
    h1 = hit_closed_form(sigma, F, tau, 1)
    assert h2.eval(Rational(1, 2)) == Rational(5, 6)
    assert h1.eval(Rational(1, 4)) == Rational(-1, 6)

    outcome = search_a(sigma, "1/2", "1/4", "3/4", fam)
    assert minimal_divisibility_a(sigma, "1/2", "1/4", "3/4") == 2
    assert outcome.value == 8
    assert outcome.tries == 3
    assert outcome.result.a == 8
    u = eta_u_coefficients(outcome.result, F, tau)
    assert u.u2.eval(0) == Rational(-1, 2)


# ── alphabeta ──

def test_alphabeta_worked_solve():
    solution = solve_alphabeta(Q, RANKS, C, 6, 1)
    assert solution.ordered(0) == (3, Rational(1, 2), 14, 20)
    assert solution.ordered(1) == (Rational(3, 4), Rational(3, 2), Rational(5, 2), Rational(1, 2))
    assert solution.lambda_min == 5
    assert all(solution.checks.values())


@pytest.mark.parametrize("lam", [4, 5])
def test_alphabeta_positivity_failure(lam):
    with pytest.raises(PositivityError) as info:
        solve_alphabeta(Q, RANKS, C, lam, 1)
    assert info.value.lambda_min == 5
    assert info.value.exit_code == 1


def test_alphabeta_precondition_names_k():
    with pytest.raises(CheckFailure) as info:
        solve_alphabeta(Q, RANKS, [[3, 8], [3, 12]], 6, 1)
    assert info.value.witness["k"] == 0
    with pytest.raises(CheckFailure) as info:
        solve_alphabeta(Q, RANKS, [[3, 8], [5, 8]], 6, 1)
    assert info.value.witness["k"] == 1


def test_alphabeta_random(rng):
    def rational(lo, hi, den=6):
        return Rational(rng.randint(lo * den, hi * den), den)

    for _ in range(100):
        q = [[rational(-3, 3), rational(-3, 3)] for _ in range(2)]
        r = [Rational(rng.randint(1, 9), rng.randint(1, 48)) for _ in range(2)]
        top = [rng.randint(1, 20) for _ in range(2)]
        c = [top, [x + rng.choice([-1, 1]) * rng.randint(1, 5) for x in top]]
        b = Rational(rng.randint(1, 8), rng.randint(1, 3))
        lam = alphabeta_lambda_min(q, r, c) + Rational(rng.randint(1, 12), 4)
        solution = solve_alphabeta(q, r, c, lam, b)
        for k in (0, 1):
            for i in (0, 1):
                total = r[0] * solution.alpha[(0, i, k)] + r[1] * solution.alpha[(1, i, k)]
                assert total == r[k] * b * (lam + q[k][i])
            assert r[0] * c[0][k] * (solution.alpha[(0, 1, k)] - solution.alpha[(0, 0, k)]) == \
                r[1] * c[1][k] * (solution.alpha[(1, 0, k)] - solution.alpha[(1, 1, k)])
        assert all(value > 0 for value in solution.alpha.values())


# ── ζ ──

def test_zeta_inputs(worked_eta):
    data = zeta_inputs(worked_eta, "1/2", "1/4", "3/4")
    assert data["q"] == Q
    assert data["r"] == RANKS
    assert data["c"] == C
    with pytest.raises(InputError):
        zeta_inputs(worked_eta, "1/2", "3/4", "1/4")


def test_worked_zeta(worked, worked_zeta):
    assert worked_zeta.lam == 6
    assert worked_zeta.b == 1
    assert worked_zeta.solution.lambda_min == 5
    assert worked_zeta.r_tilde == Rational(1, 2)
    assert final_twist_properties(worked_zeta).ok
    assert segment_walls(worked_zeta.segment, worked["fam"]).values == [Rational(1, 2)]


def test_zeta_delta_identity(worked, worked_zeta):
    report = delta_identity_check(worked_zeta, worked["F"], worked["tau"])
    assert report.ok
    assert expand(sympify(report.closed_form) - (2 * R - 1) / 6) == 0


def test_zeta_wall_point(worked, worked_eta, worked_zeta):
    assert wall_point_check(worked_eta, worked_zeta, worked["fam"]).equivalent


def test_zeta_rejects_small_lambda(worked_eta):
    with pytest.raises(PositivityError) as info:
        make_zeta(worked_eta, "1/2", "1/4", "3/4", lam=4)
    assert info.value.lambda_min == 5


@pytest.mark.parametrize("gauge", [1, Rational(1, 3), Rational(-1, 2)])
def test_zeta_does_not_depend_on_the_gauge(worked, worked_eta, gauge):
    F, tau, fam = worked["F"], worked["tau"], worked["fam"]
    data = zeta_inputs(worked_eta, "1/2", "1/4", "3/4")
    lam = max(alphabeta_lambda_min(data["q"], data["r"], data["c"], g) for g in (0, gauge)) + 1
    canonical = make_zeta(worked_eta, "1/2", "1/4", "3/4", lam=lam)
    shifted = make_zeta(worked_eta, "1/2", "1/4", "3/4", lam=lam, gauge=gauge)
    assert shifted.gauge == gauge
    assert shifted.solution.alpha != canonical.solution.alpha

    for r in ("0", "1/8", "1/2", "2/3", "1"):
        expected = difference_vector(F, tau, canonical.segment.at(r))
        assert difference_vector(F, tau, shifted.segment.at(r)).entries == expected.entries
        assert verdict_vector(fam, shifted.segment, Rational(r)) == verdict_vector(fam, canonical.segment, Rational(r))
    assert segment_walls(shifted.segment, fam).values == segment_walls(canonical.segment, fam).values


def test_search_b_accepts_one(worked, worked_eta):
    outcome = search_b(worked_eta, "1/2", "1/4", "3/4", worked["fam"])
    assert outcome.value == 1
    assert outcome.result.lam == 6


def test_search_b_needs_b_above_the_threshold(worked, worked_eta):
    # ch₃ = 8: u₁ = u₂(s̄) = 0, u₃(s̄) = 5/3, u₂(s₀) = −1/6, so ζ(0) ≡ η(s₀) needs b > 10.
    model, tau = worked["model"], worked["tau"]
    F = SheafType.from_parts(model, "F", 1, [{"h1": 3, "h2": -2}, {}, {"h1h2^2": 8}])
    fam = SubsheafFamily(tau, (F,))
    u = eta_u_coefficients(worked_eta, F, tau)
    assert u.u1 == 0
    assert u.u2.eval(Rational(1, 2)) == 0
    assert u.u3.eval(Rational(1, 2)) == Rational(5, 3)
    assert u.u2.eval(Rational(1, 4)) == Rational(-1, 6)

    outcome = search_b(worked_eta, "1/2", "1/4", "3/4", fam)
    assert outcome.value == 16
    assert outcome.tries == 5
    assert outcome.result.b == 16
    assert delta_identity_check(outcome.result, F, tau).ok


def test_search_b_with_an_empty_family(worked, worked_eta):
    outcome = search_b(worked_eta, "1/2", "1/4", "3/4", SubsheafFamily(worked["tau"], ()))
    assert outcome.value == 1


def test_random_zeta_constructions(worked, rng):
    sigma = worked["sigma"]
    for _ in range(100):
        t0 = Rational(rng.choice([1, 2, 3]), 8)
        t1 = Rational(rng.choice([5, 6, 7]), 8)
        eta = make_eta(sigma, "1/2", t0, t1, minimal_divisibility_a(sigma, "1/2", t0, t1))
        s0 = Rational(rng.randint(1, 3), 8)
        s_bar = Rational(rng.randint(int(32 * s0) + 1, 15), 32)
        s1 = Rational(rng.randint(4, 7), 8)
        b = Rational(rng.randint(1, 4))
        zeta = make_zeta(eta, s_bar, s0, s1, b=b)
        assert final_twist_properties(zeta).ok
        assert delta_identity_check(zeta, worked["F"], worked["tau"]).ok
        assert is_uniform(zeta.segment, "strict").uniform


def test_zeta_needs_a_threefold(surface):
    sigma = make_sigma(surface["L0"], surface["L1"])
    assert sigma.generic is None
    eta = make_eta(sigma, "1/2", "1/4", "3/4", 2)
    with pytest.raises(InputError):
        make_zeta(eta, "1/2", "1/4", "3/4")
    with pytest.raises(InputError):
        eta_u_coefficients(eta, surface["F"], surface["tau"])


# ── Doubling ──

def test_doubling_search_finds_the_first_accepted_power():
    outcome = doubling_search(1, lambda v: (v >= 16, v * 10, {"v": v}), "lookup")
    assert outcome.value == 16
    assert outcome.tries == 5
    assert outcome.result == 160


def test_doubling_search_gives_up_at_the_cap():
    with pytest.raises(CheckFailure) as info:
        doubling_search(1, lambda v: (False, None, {"last": v}), "lookup", cap_exponent=3)
    assert info.value.witness["cap"] == "8"
    assert info.value.witness["last"] == 8
