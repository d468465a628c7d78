"""Numerical ring: products, integration, exponentials, model validation and loading."""

import json
from pathlib import Path

import pytest
from sympy import Rational

from chow import NumericalModel, intersection
from chow.builtin import builtin_model
from cli.formats import load_model_file, resolve_model
from errors import InputError

MODELS = Path(__file__).resolve().parent.parent / "models"


def test_products_on_p1p2(p1p2):
    h1, h2 = p1p2.divisor([1, 0]), p1p2.divisor([0, 1])
    assert (h1 + h2) ** 2 == 2 * p1p2.element("h1h2") + p1p2.element("h2^2")
    assert h1 * h1 == p1p2.zero()
    assert intersection(h1, h2, h2) == 1
    assert p1p2.volume(p1p2.divisor([1, 2])) == 12
    assert p1p2.volume(p1p2.divisor([1, 1])) == 3


def test_products_on_surfaces(p1p1, p2):
    assert p1p1.volume(p1p1.divisor([1, 1])) == 2
    assert p1p1.volume(p1p1.divisor([1, 2])) == 4
    assert p2.volume(p2.divisor([3])) == 9


def test_exp_divisor(p1p2):
    L = p1p2.divisor([1, 1])
    one, first, second, third = p1p2.exp_divisor(L)
    assert one == p1p2.one()
    assert first == L
    assert second == (L * L) / 2
    assert third.integrate() == Rational(1, 2)
    assert p1p2.exp_class(L).integrate() == Rational(1, 2)


def test_parse_divisor(p1p2):
    assert p1p2.parse_divisor("O(1,2)") == p1p2.divisor([1, 2])
    assert p1p2.parse_divisor("O").is_zero
    assert p1p2.divisor_coords(p1p2.parse_divisor("O(3, -1)")) == (3, -1)
    with pytest.raises(InputError):
        p1p2.parse_divisor("L(1,2)")
    with pytest.raises(InputError):
        p1p2.divisor([1])


def test_classes_from_different_models_do_not_mix(p1p1, p2):
    with pytest.raises(InputError):
        p1p1.divisor([1, 0]) * p2.divisor([1])


def test_builtin_models_are_valid_and_shared():
    for name in ("p2", "p1p1", "p1p2", "p1p1p1"):
        assert builtin_model(name).validate().ok
    assert builtin_model("P1xP2") is builtin_model("p1p2")
    with pytest.raises(InputError):
        builtin_model("p3")


def test_ring_is_bilinear_and_associative(p1p2, rng):
    def random_class():
        coords = {label: Rational(rng.randint(-5, 5), rng.randint(1, 3))
                  for names in p1p2.basis for label in names}
        return p1p2.from_coords(coords)

    for _ in range(50):
        x, y, z = random_class(), random_class(), random_class()
        c = Rational(rng.randint(-4, 4), rng.randint(1, 4))
        assert x * (y + z) == x * y + x * z
        assert (x * c) * y == (x * y) * c
        assert (x * y) * z == x * (y * z)
        assert x * y == y * x


@pytest.mark.parametrize("name", ["p2", "p1p1", "p1p2", "p1p1p1"])
def test_volume_is_homogeneous(name, rng):
    model = builtin_model(name)
    for _ in range(30):
        L = model.divisor([Rational(rng.randint(-6, 6), rng.randint(1, 4)) for _ in model.basis[1]])
        c = Rational(rng.randint(-5, 5), rng.randint(1, 5))
        assert model.volume(L * c) == c ** model.dim * model.volume(L)


def test_volume_on_p1p1p1():
    model = builtin_model("p1p1p1")
    # (x h1 + y h2 + z h3)³ = 6xyz
    assert model.volume(model.divisor([1, 1, 1])) == 6
    assert model.volume(model.divisor([1, 5, 2])) == 60


# ── Validation ──

P1P1_PRODUCTS = {("h1", "h2"): {"h1h2": 1}}
P1P1_TODD = {"1": 1, "h1": 1, "h2": 1, "h1h2": 1}
P1P1_BASIS = [["1"], ["h1", "h2"], ["h1h2"]]


def test_validate_reports_commutativity_defect():
    products = {**P1P1_PRODUCTS, ("h2", "h1"): {"h1h2": 2}}
    model = NumericalModel("bad", 2, P1P1_BASIS, products, P1P1_TODD, validate=False)
    report = model.validate()
    assert not report.ok
    assert "commutativity" in {v.kind for v in report.violations}
    with pytest.raises(InputError):
        NumericalModel("bad", 2, P1P1_BASIS, products, P1P1_TODD)


def test_validate_reports_normalization_defect():
    model = NumericalModel("bad", 2, P1P1_BASIS, P1P1_PRODUCTS, P1P1_TODD, point_value=2, validate=False)
    report = model.validate()
    assert [v.kind for v in report.violations] == ["normalization"]
    assert report.summary().startswith("model invalid: 1 violation(s)")


def test_validate_reports_grading_defect():
    products = {("h1", "h2"): {"h1": 1}}
    model = NumericalModel("bad", 2, P1P1_BASIS, products, P1P1_TODD, validate=False)
    assert "grading" in {v.kind for v in model.validate().violations}


def test_unknown_basis_name_is_an_input_error():
    with pytest.raises(InputError):
        NumericalModel("bad", 2, P1P1_BASIS, {("h1", "h3"): {"h1h2": 1}}, P1P1_TODD)


# ── Model files ──

def test_model_files_match_builtins():
    for name in ("p2", "p1p1", "p1p2", "p1p1p1"):
        loaded = load_model_file(str(MODELS / f"{name}.model"))
        builtin = builtin_model(name)
        assert loaded.basis == builtin.basis
        L = loaded.divisor([1] * len(loaded.basis[1]))
        assert loaded.volume(L) == builtin.volume(builtin.divisor([1] * len(builtin.basis[1])))
        assert loaded.todd.components == builtin.todd.components


def test_model_file_with_bad_product_key(tmp_path):
    path = tmp_path / "broken.model"
    path.write_text(json.dumps({
        "dim": 2, "basis": P1P1_BASIS, "products": {"h1h2": {}}, "todd": {"1": "1"},
    }))
    with pytest.raises(InputError) as info:
        load_model_file(str(path))
    assert info.value.witness["loc"] == "products"


def test_resolve_model_by_name_and_path():
    assert resolve_model("p1p2") is builtin_model("p1p2")
    assert resolve_model(str(MODELS / "p1p1.model")).name == "p1p1"
    with pytest.raises(InputError):
        resolve_model("no-such-model")
