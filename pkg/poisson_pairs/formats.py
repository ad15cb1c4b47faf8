"""JSON file schemas and the textual inputs of the command line.

Indices in files are 1-based; rationals are "p" or "p/q" strings and
polynomials are lists of {exp, coef} terms.
"""

import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator
from sympy.polys.fields import FracElement
from sympy.polys.rings import PolyElement

from .errors import ParseError, PoissonPairsError
from .exterior import DiffForm, MultiVector, _Graded
from .liealg import DualElement, LieAlgebra
from .models import PencilKind
from .pencil import Pencil
from .ring import coordinate_field, coordinate_ring, poly_from_terms, poly_terms, rational_to_str, to_rational


def _check_rational(value: str) -> str:
    return rational_to_str(to_rational(value))


class TermModel(BaseModel):
    """One monomial: exponent vector and rational coefficient."""
    model_config = ConfigDict(extra="forbid")

    exp: List[int]
    coef: str

    @field_validator("coef")
    @classmethod
    def canonical_coef(cls, v: str) -> str:
        try:
            return _check_rational(v)
        except PoissonPairsError as e:
            raise ValueError(str(e)) from None

    @field_validator("exp")
    @classmethod
    def non_negative(cls, v: List[int]) -> List[int]:
        if any(e < 0 for e in v):
            raise ValueError("exponents must be non-negative")
        return v


class BladeModel(BaseModel):
    """Coefficient of one blade: a polynomial, or a numerator/denominator pair."""
    model_config = ConfigDict(extra="forbid")

    idx: List[int]
    poly: Optional[List[TermModel]] = None
    numerator: Optional[List[TermModel]] = None
    denominator: Optional[List[TermModel]] = None

    @model_validator(mode="after")
    def one_coefficient(self) -> "BladeModel":
        if (self.poly is None) == (self.numerator is None):
            raise ValueError("give either poly or numerator/denominator")
        if self.numerator is not None and not self.denominator:
            raise ValueError("a rational coefficient needs a nonzero denominator")
        return self


class GradedModel(BaseModel):
    """Differential form or multivector on QQ^dim."""
    model_config = ConfigDict(extra="forbid")

    dim: int = Field(ge=1)
    degree: int = Field(ge=0)
    kind: Literal["form", "multivector"]
    terms: List[BladeModel] = []

    @model_validator(mode="after")
    def check_indices(self) -> "GradedModel":
        for term in self.terms:
            if len(term.idx) != self.degree:
                raise ValueError(f"index {term.idx} does not have {self.degree} entries")
            if any(not 1 <= i <= self.dim for i in term.idx):
                raise ValueError(f"index {term.idx} out of range 1..{self.dim}")
            for poly in (term.poly, term.numerator, term.denominator):
                for monomial in poly or []:
                    if len(monomial.exp) != self.dim:
                        raise ValueError(f"exponent vector {monomial.exp} needs {self.dim} entries")
        return self


class BracketModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    i: int = Field(ge=1)
    j: int = Field(ge=1)
    coeffs: Dict[int, str]

    @field_validator("coeffs")
    @classmethod
    def canonical_coeffs(cls, v: Dict[int, str]) -> Dict[int, str]:
        try:
            return {k: _check_rational(c) for k, c in sorted(v.items())}
        except PoissonPairsError as e:
            raise ValueError(str(e)) from None


class ProvenanceModel(BaseModel):
    """Which construction produced a file, with its parameters."""
    model_config = ConfigDict(extra="allow")

    construction: str


class AlgebraModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    dim: int = Field(ge=1)
    basis: List[str] = []
    brackets: List[BracketModel] = []
    name: str = ""
    provenance: Optional[ProvenanceModel] = None

    @model_validator(mode="after")
    def check_brackets(self) -> "AlgebraModel":
        if self.basis and len(self.basis) != self.dim:
            raise ValueError(f"{len(self.basis)} basis names for dimension {self.dim}")
        for b in self.brackets:
            if b.i >= b.j:
                raise ValueError(f"bracket ({b.i}, {b.j}) must have i < j")
            if b.j > self.dim or any(not 1 <= k <= self.dim for k in b.coeffs):
                raise ValueError(f"bracket ({b.i}, {b.j}) refers to an index above {self.dim}")
        return self


class PencilModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    dim: int = Field(ge=1)
    kind: Literal["linear_pair", "lie_pair", "raw"]
    algebra: Optional[AlgebraModel] = None
    cocycle: Optional[GradedModel] = None
    algebra2: Optional[AlgebraModel] = None
    bivector: Optional[GradedModel] = None
    bivector1: Optional[GradedModel] = None
    base_point: Optional[List[str]] = None
    provenance: Optional[ProvenanceModel] = None

    @model_validator(mode="after")
    def check_kind(self) -> "PencilModel":
        required = {
            "linear_pair": ("algebra", "cocycle"),
            "lie_pair": ("algebra", "algebra2"),
            "raw": ("bivector", "bivector1"),
        }[self.kind]
        for name in required:
            if getattr(self, name) is None:
                raise ValueError(f"a {self.kind} pencil needs {name!r}")
        if self.base_point is not None:
            if len(self.base_point) != self.dim:
                raise ValueError(f"base point needs {self.dim} coordinates")
            try:
                self.base_point = [_check_rational(c) for c in self.base_point]
            except PoissonPairsError as e:
                raise ValueError(str(e)) from None
        return self


# ---------------------------------------------------------------------------
# Conversions
# ---------------------------------------------------------------------------

def poly_to_terms(value: Any, dim: int) -> List[TermModel]:
    """Terms of a polynomial or of a rational constant."""
    if isinstance(value, PolyElement):
        ordered = sorted(poly_terms(value), key=lambda t: (sum(t[0]), t[0]), reverse=True)
        return [TermModel(exp=list(e), coef=rational_to_str(c)) for e, c in ordered]
    value = to_rational(value)
    return [TermModel(exp=[0] * dim, coef=rational_to_str(value))] if value else []


def _terms_to_poly(terms: Sequence[TermModel], dim: int) -> PolyElement:
    return poly_from_terms(coordinate_ring(dim), [(t.exp, to_rational(t.coef)) for t in terms])


def graded_to_model(obj: _Graded) -> GradedModel:
    terms = []
    for key, value in obj.components.items():
        idx = [i + 1 for i in key]
        if isinstance(value, FracElement):
            terms.append(BladeModel(idx=idx, numerator=poly_to_terms(value.numer, obj.dim),
                                    denominator=poly_to_terms(value.denom, obj.dim)))
        else:
            terms.append(BladeModel(idx=idx, poly=poly_to_terms(value, obj.dim)))
    return GradedModel(dim=obj.dim, degree=obj.degree, kind=obj.kind, terms=terms)


def graded_from_model(model: GradedModel) -> Union[DiffForm, MultiVector]:
    cls = DiffForm if model.kind == "form" else MultiVector
    field = coordinate_field(model.dim)
    terms = []
    for blade in model.terms:
        if blade.poly is not None:
            value = _terms_to_poly(blade.poly, model.dim)
        else:
            value = (field.new(_terms_to_poly(blade.numerator, model.dim))
                     / field.new(_terms_to_poly(blade.denominator, model.dim)))
        terms.append(([i - 1 for i in blade.idx], value))
    return cls.from_terms(model.dim, model.degree, terms)


def algebra_to_model(L: LieAlgebra, provenance: Optional[Dict[str, Any]] = None) -> AlgebraModel:
    brackets = [
        BracketModel(i=i + 1, j=j + 1, coeffs={k + 1: rational_to_str(v) for k, v in row.items()})
        for (i, j), row in L.constants.items()
    ]
    return AlgebraModel(dim=L.dim, basis=list(L.basis_labels), brackets=brackets, name=L.name,
                        provenance=ProvenanceModel(**provenance) if provenance else None)


def algebra_from_model(model: AlgebraModel) -> LieAlgebra:
    constants = {
        (b.i - 1, b.j - 1): {k - 1: to_rational(c) for k, c in b.coeffs.items()}
        for b in model.brackets
    }
    return LieAlgebra(model.dim, constants, basis_labels=tuple(model.basis), name=model.name)


def pencil_to_model(p: Pencil, base_point: Optional[Sequence[Fraction]] = None,
                    provenance: Optional[Dict[str, Any]] = None) -> PencilModel:
    data: Dict[str, Any] = {"dim": p.dim, "kind": p.kind.value}
    if p.kind is PencilKind.LINEAR_PAIR:
        data["algebra"] = algebra_to_model(p.algebra)
        data["cocycle"] = graded_to_model(p.cocycle)
    elif p.kind is PencilKind.LIE_PAIR:
        data["algebra"] = algebra_to_model(p.algebra)
        data["algebra2"] = algebra_to_model(p.algebra1)
    else:
        data["bivector"] = graded_to_model(p.bivector)
        data["bivector1"] = graded_to_model(p.bivector1)
    if base_point is not None:
        data["base_point"] = [rational_to_str(x) for x in base_point]
    if provenance:
        data["provenance"] = ProvenanceModel(**provenance)
    return PencilModel(**data)


def pencil_from_model(model: PencilModel) -> Pencil:
    if model.kind == "linear_pair":
        return Pencil.linear_pair(algebra_from_model(model.algebra), graded_from_model(model.cocycle))
    if model.kind == "lie_pair":
        return Pencil.lie_pair(algebra_from_model(model.algebra), algebra_from_model(model.algebra2))
    return Pencil.raw(graded_from_model(model.bivector), graded_from_model(model.bivector1))


def base_point_of(model: PencilModel) -> Optional[Tuple[Fraction, ...]]:
    if model.base_point is None:
        return None
    return tuple(to_rational(x) for x in model.base_point)


# ---------------------------------------------------------------------------
# Loading
# ---------------------------------------------------------------------------

def _validation_error(error: ValidationError, source: str) -> ParseError:
    first = error.errors()[0]
    path = ".".join(str(part) for part in first["loc"]) or "<root>"
    return ParseError(first["msg"], location=f"{source}: field {path}")


def parse_json(text: str, model: type, source: str = "<input>") -> BaseModel:
    """
    Validate JSON text against a schema.

    Raises:
        ParseError: syntax error (with line and column) or schema violation
            (with the field path)
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, location=f"{source}: line {e.lineno}, column {e.colno}") from None
    try:
        return model.model_validate(data)
    except ValidationError as e:
        raise _validation_error(e, source) from None


def _read(path: Union[str, Path]) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"cannot read file: {e.strerror}", location=str(path)) from None


def _build(builder, model: BaseModel, source: str):
    try:
        return builder(model)
    except ParseError:
        raise
    except PoissonPairsError as e:
        raise ParseError(str(e), location=source) from None


def load_algebra(path: Union[str, Path]) -> LieAlgebra:
    model = parse_json(_read(path), AlgebraModel, str(path))
    return _build(algebra_from_model, model, str(path))


def load_pencil(path: Union[str, Path]) -> Tuple[Pencil, Optional[Tuple[Fraction, ...]]]:
    """Pencil and its stored base point, if any."""
    model = parse_json(_read(path), PencilModel, str(path))
    return _build(pencil_from_model, model, str(path)), base_point_of(model)


def dump_model(model: BaseModel) -> str:
    return model.model_dump_json(indent=2, exclude_none=True)


# ---------------------------------------------------------------------------
# Command-line values
# ---------------------------------------------------------------------------

_TERM = re.compile(
    r"\s*(?P<sign>[+-])?\s*(?:(?P<coef>\d+(?:/\d+)?)\s*\*\s*)?(?P<label>[A-Za-z_][A-Za-z0-9_]*)\s*"
)


def parse_point(text: str, dim: Optional[int] = None) -> Tuple[Fraction, ...]:
    """Comma-separated rationals, e.g. "0,0,1,0,1" or "1/2,-3"."""
    try:
        point = tuple(to_rational(part) for part in text.split(","))
    except PoissonPairsError as e:
        raise ParseError(str(e), location="point") from None
    if dim is not None and len(point) != dim:
        raise ParseError(f"expected {dim} coordinates, got {len(point)}", location="point")
    return point


def parse_dual_expression(L: LieAlgebra, text: str) -> DualElement:
    """
    Functional written in basis labels, e.g. "e5+e4" or "2*e1-1/2*e3";
    a comma-separated coordinate list is accepted too.
    """
    if not re.search(r"[A-Za-z_]", text):
        return DualElement(parse_point(text, L.dim))
    coords = [Fraction(0)] * L.dim
    position = 0
    first = True
    while position < len(text):
        match = _TERM.match(text, position)
        if not match or match.end() == position or (not first and not match.group("sign")):
            raise ParseError(f"cannot parse {text[position:]!r}", location="expression")
        if match.group("label") not in L.basis_labels:
            raise ParseError(f"unknown basis label {match.group('label')!r}", location="expression")
        value = to_rational(match.group("coef") or "1")
        if match.group("sign") == "-":
            value = -value
        coords[L.label_index(match.group("label"))] += value
        position = match.end()
        first = False
    return DualElement(tuple(coords))
