"""
📄 File formats: .model and .prob files

Both are JSON. Rationals are "p/q" strings (plain integers and exact
decimals such as "0.25" are accepted too). Divisors are "O(a,b,...)" in the
model's degree-1 basis, or {"h1": "1", "h2": "2"}.

    model file:   {"name", "dim", "basis", "products": {"h1*h2": {"h1h2": "1"}}, "todd", "point_value"}
    problem file: {"model": "p1p2" | path | {model file},
                   "bundles": {"L0": {"class": "O(1,1)", "ample": true}},
                   "sheaves": {"tau": {"rank": "2"}, "F": {"rank": "1", "ch": [{"h1": "3", "h2": "-2"}]},
                               "G": {"line": "O(1,-1)"}},
                   "family": {"ambient": "tau", "members": ["F"]},
                   "plan": {"L0": "L0", "L1": "L1"},
                   "surface": {"L0": "L0", "L1": "L1", "Lbar": "Lbar", "a": 4}}
"""

import json
import logging
import os
from dataclasses import dataclass
from typing import Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from chow import GradedClass, NumericalModel
from chow.builtin import BUILTIN_MODELS, builtin_model
from config import get_models_dir
from errors import InputError
from exact import rat
from plan import PlanDocument
from sheaves import SheafType, line_bundle, structure_sheaf
from stability import SubsheafFamily

logger = logging.getLogger("zoomwall.cli.formats")

Number = Union[str, int]


def _exact(value) -> str:
    """Field validator body: anything rat() accepts, kept as its 'p/q' string."""
    try:
        return str(rat(value))
    except InputError as e:
        raise ValueError(e.detail)


# ═══════════════════════════════════════════════════════════
# SCHEMAS
# ═══════════════════════════════════════════════════════════

class ModelFile(BaseModel):
    name: str = "model"
    dim: int
    basis: list[list[str]]
    products: dict[str, dict[str, Number]] = {}
    todd: dict[str, Number]
    point_value: Number = "1"

    @field_validator("products")
    @classmethod
    def _products(cls, v):
        for key in v:
            if key.count("*") != 1:
                raise ValueError(f"product key '{key}' must look like 'a*b'")
        return {key: {label: _exact(value) for label, value in result.items()} for key, result in v.items()}

    @field_validator("todd")
    @classmethod
    def _todd(cls, v):
        return {label: _exact(value) for label, value in v.items()}

    @field_validator("point_value")
    @classmethod
    def _point(cls, v):
        return _exact(v)

    def build(self, validate: bool = True) -> NumericalModel:
        products = {tuple(key.split("*")): result for key, result in self.products.items()}
        return NumericalModel(self.name, self.dim, self.basis, products, self.todd, self.point_value, validate)


class BundleEntry(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    divisor: Union[str, dict[str, Number]] = Field(alias="class")
    ample: bool = False


class SheafEntry(BaseModel):
    rank: Optional[Number] = None
    ch: list[dict[str, Number]] = []
    line: Optional[str] = None

    @field_validator("rank")
    @classmethod
    def _rank(cls, v):
        return None if v is None else _exact(v)

    @field_validator("ch")
    @classmethod
    def _ch(cls, v):
        return [{label: _exact(value) for label, value in part.items()} for part in v]


class FamilyEntry(BaseModel):
    ambient: str
    members: Optional[list[str]] = None


class PlanRequest(BaseModel):
    L0: str = "L0"
    L1: str = "L1"


class SurfaceRequest(BaseModel):
    L0: str = "L0"
    L1: str = "L1"
    Lbar: str = "Lbar"
    a: int = 1


class ProblemFile(BaseModel):
    model: Union[str, ModelFile]
    bundles: dict[str, BundleEntry] = {}
    sheaves: dict[str, SheafEntry] = {}
    family: Optional[FamilyEntry] = None
    plan: Optional[PlanRequest] = None
    surface: Optional[SurfaceRequest] = None


# ═══════════════════════════════════════════════════════════
# LOADERS
# ═══════════════════════════════════════════════════════════

def _read_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError(f"No such file: {path}")
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: line {e.lineno}, column {e.colno}: {e.msg}", {"line": e.lineno})


def _parse(schema, data: dict, source: str):
    try:
        return schema.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        loc = ".".join(str(part) for part in first["loc"])
        raise InputError(f"{source}: {loc}: {first['msg']}", {"loc": loc, "errors": len(e.errors())})


def load_model_file(path: str, validate: bool = True) -> NumericalModel:
    return _parse(ModelFile, _read_json(path), path).build(validate)


def resolve_model(spec: Union[str, ModelFile], validate: bool = True) -> NumericalModel:
    """Built-in name, a .model path, or a name under ZOOMWALL_MODELS_DIR."""
    if isinstance(spec, ModelFile):
        return spec.build(validate)
    key = spec.lower().replace("×", "x").replace("x", "")
    if key in BUILTIN_MODELS and not os.path.exists(spec):
        return builtin_model(key)
    if os.path.exists(spec):
        return load_model_file(spec, validate)
    candidate = os.path.join(get_models_dir(), f"{spec}.model")
    if os.path.exists(candidate):
        return load_model_file(candidate, validate)
    raise InputError(f"Unknown model '{spec}': not built in ({', '.join(BUILTIN_MODELS)}) and no such file")


def parse_divisor(model: NumericalModel, value, bundles: Optional[dict] = None) -> GradedClass:
    """'O(1,2)', {"h1": "1"} or the name of a bundle already defined."""
    if isinstance(value, dict):
        coords = {label: rat(v) for label, v in value.items()}
        for label in coords:
            if label not in model.index or model.index[label][0] != 1:
                raise InputError(f"'{label}' is not a degree-1 basis class of '{model.name}'")
        return model.from_coords(coords)
    if bundles and value in bundles:
        return bundles[value]
    return model.parse_divisor(value)


def parse_sheaf(model: NumericalModel, name: str, value: str, sheaves: Optional[dict] = None,
                bundles: Optional[dict] = None) -> SheafType:
    """A named sheaf, 'O' for the structure sheaf, or a line bundle 'O(a,b)'."""
    if sheaves and value in sheaves:
        return sheaves[value]
    if value.strip() == "O":
        return structure_sheaf(model)
    return line_bundle(model, parse_divisor(model, value, bundles), name)


@dataclass
class Problem:
    model: NumericalModel
    bundles: dict[str, GradedClass]
    ample: set
    sheaves: dict[str, SheafType]
    family: Optional[SubsheafFamily]
    spec: ProblemFile
    raw: dict
    source: str = ""

    def bundle(self, name: str) -> GradedClass:
        if name not in self.bundles:
            raise InputError(f"Unknown bundle '{name}' in {self.source}. Defined: {', '.join(self.bundles)}")
        if name not in self.ample:
            logger.warning(f"⚠️ Bundle '{name}' is not asserted ample")
        return self.bundles[name]

    def require_family(self) -> SubsheafFamily:
        if self.family is None:
            raise InputError(f"{self.source} has no 'family' section")
        return self.family


def problem_from_dict(raw: dict, source: str = "<problem>") -> Problem:
    spec = _parse(ProblemFile, raw, source)
    model = resolve_model(spec.model)

    bundles, ample = {}, set()
    for name, entry in spec.bundles.items():
        bundles[name] = parse_divisor(model, entry.divisor)
        if entry.ample:
            ample.add(name)

    sheaves: dict[str, SheafType] = {}
    for name, entry in spec.sheaves.items():
        if entry.line is not None:
            if entry.ch:
                raise InputError(f"{source}: sheaves.{name}: give either 'line' or 'ch', not both")
            sheaves[name] = line_bundle(model, parse_divisor(model, entry.line, bundles), name)
            continue
        if entry.rank is None:
            raise InputError(f"{source}: sheaves.{name}.rank: field required", {"loc": f"sheaves.{name}.rank"})
        if len(entry.ch) > model.dim:
            raise InputError(f"{source}: sheaves.{name}.ch: at most {model.dim} parts")
        sheaves[name] = SheafType.from_parts(model, name, entry.rank, entry.ch)

    family = None
    if spec.family is not None:
        if spec.family.ambient not in sheaves:
            raise InputError(f"{source}: family.ambient: unknown sheaf '{spec.family.ambient}'")
        names = spec.family.members
        if names is None:
            names = [n for n in sheaves if n != spec.family.ambient]
        for n in names:
            if n not in sheaves:
                raise InputError(f"{source}: family.members: unknown sheaf '{n}'")
        family = SubsheafFamily(sheaves[spec.family.ambient], tuple(sheaves[n] for n in names))

    logger.debug(f"📄 Problem {source}: model {model.name}, {len(sheaves)} sheaves")
    return Problem(model, bundles, ample, sheaves, family, spec, raw, source)


def load_problem(path: str) -> Problem:
    return problem_from_dict(_read_json(path), path)


def load_plan(path: str) -> PlanDocument:
    return _parse(PlanDocument, _read_json(path), path)
