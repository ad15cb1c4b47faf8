"""Exact scalars, polynomials and rational functions.

Polynomials are sympy sparse ``PolyElement`` values over ``QQ`` in graded
lexicographic order; rational functions are ``FracElement`` values of the
matching fraction field. Coordinate rings are cached per dimension, so two
polynomials in the same number of coordinates always share a ring.
"""

import logging
import re
from abc import ABC, abstractmethod
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Any, Iterable, List, Sequence, Tuple, Union

from sympy import Poly as SympyPoly
from sympy import Rational as SympyRational
from sympy.polys.agca.extensions import FiniteExtension
from sympy.polys.domains import QQ
from sympy.polys.domains.domain import Domain
from sympy.polys.fields import FracElement, FracField
from sympy.polys.orderings import grlex
from sympy.polys.polyerrors import NotInvertible
from sympy.polys.rings import PolyElement, PolyRing

from .errors import DimensionError, DomainError, ParseError, UndefinedGcdError

logger = logging.getLogger(__name__)

Rational = Fraction
Poly = PolyElement
RatFunc = FracElement
UniPoly = PolyElement

PARAMETER = "t"

_RATIONAL_PATTERN = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


# ---------------------------------------------------------------------------
# Rationals
# ---------------------------------------------------------------------------

def to_rational(value: Union[int, str, Fraction, Any]) -> Fraction:
    """
    Convert an int, a "p/q" string, a Fraction or a QQ element to a Fraction.

    Args:
        value: Value to convert

    Returns:
        Canonical Fraction
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise DomainError(f"not a rational number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        match = _RATIONAL_PATTERN.match(value)
        if not match:
            raise ParseError(f"not a rational number: {value!r}")
        numerator, denominator = match.group(1), match.group(2)
        if denominator is not None and int(denominator) == 0:
            raise ParseError(f"zero denominator in {value!r}")
        return Fraction(int(numerator), int(denominator or 1))
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return Fraction(int(value.numerator), int(value.denominator))
    raise DomainError(f"not a rational number: {value!r}")


def rational_to_str(value: Fraction) -> str:
    """Canonical "p" or "p/q" string."""
    value = to_rational(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def to_qq(value: Fraction):
    value = to_rational(value)
    return QQ(value.numerator, value.denominator)


def from_qq(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


# ---------------------------------------------------------------------------
# Rings
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def coordinate_field(num_vars: int) -> FracField:
    """Rational function field QQ(x1, ..., xm)."""
    if num_vars < 1:
        raise DimensionError(f"need at least one coordinate, got {num_vars}")
    return FracField(f"x1:{num_vars + 1}", QQ, grlex)


def coordinate_ring(num_vars: int) -> PolyRing:
    """Polynomial ring QQ[x1, ..., xm]."""
    return coordinate_field(num_vars).ring


@lru_cache(maxsize=None)
def parameter_field() -> FracField:
    """Field QQ(t) of the pencil parameter."""
    return FracField(PARAMETER, QQ, grlex)


def parameter_ring() -> PolyRing:
    """Ring QQ[t] of the pencil parameter."""
    return parameter_field().ring


def fraction_field(ring: PolyRing) -> FracField:
    return FracField(ring.symbols, ring.domain, ring.order)


def poly_constant(ring: PolyRing, value: Fraction) -> PolyElement:
    return ring.ground_new(to_qq(value))


def poly_from_terms(ring: PolyRing, terms: Iterable[Tuple[Sequence[int], Fraction]]) -> PolyElement:
    """
    Build a polynomial from (exponent vector, coefficient) pairs.

    Args:
        ring: Target ring
        terms: Exponent vectors of length ring.ngens with rational coefficients

    Returns:
        Polynomial with repeated exponents summed
    """
    data = {}
    for exponents, coefficient in terms:
        exponents = tuple(int(e) for e in exponents)
        if len(exponents) != ring.ngens:
            raise DimensionError(
                f"exponent vector {list(exponents)} has length {len(exponents)}, expected {ring.ngens}"
            )
        if any(e < 0 for e in exponents):
            raise DomainError(f"negative exponent in {list(exponents)}")
        data[exponents] = data.get(exponents, Fraction(0)) + to_rational(coefficient)
    return ring.from_dict({e: to_qq(c) for e, c in data.items() if c})


def poly_terms(p: PolyElement) -> List[Tuple[Tuple[int, ...], Fraction]]:
    """Terms of p in descending graded-lex order."""
    return [(tuple(monom), from_qq(coeff)) for monom, coeff in p.terms()]


class PolyOp(Enum):
    """Ring operations exposed by poly_arith."""
    ADD = "add"
    SUB = "sub"
    MUL = "mul"


def _same_ring(a: PolyElement, b: PolyElement) -> None:
    if a.ring.ngens != b.ring.ngens or a.ring != b.ring:
        raise DimensionError(
            f"polynomials live in different rings ({a.ring.ngens} vs {b.ring.ngens} variables)"
        )


def poly_arith(a: PolyElement, b: PolyElement, op: Union[PolyOp, str]) -> PolyElement:
    """
    Exact sum, difference or product of two polynomials.

    Args:
        a: Left operand
        b: Right operand
        op: PolyOp or its string value

    Returns:
        Canonical result polynomial
    """
    _same_ring(a, b)
    op = PolyOp(op)
    if op is PolyOp.ADD:
        return a + b
    if op is PolyOp.SUB:
        return a - b
    return a * b


def partial_derivative(p, var_index: int):
    """
    Formal partial derivative of a polynomial or rational function.

    Args:
        p: PolyElement or FracElement
        var_index: 0-based coordinate index

    Returns:
        Derivative in the same ring or field
    """
    if isinstance(p, FracElement):
        numer, denom = p.numer, p.denom
        gen = numer.ring.gens[var_index]
        return p.field.new(numer.diff(gen) * denom - numer * denom.diff(gen), denom ** 2)
    if isinstance(p, PolyElement):
        if not 0 <= var_index < p.ring.ngens:
            raise DimensionError(f"variable index {var_index} out of range for {p.ring.ngens} variables")
        return p.diff(p.ring.gens[var_index])
    # rationals and other scalars are constants
    return type(p)(0)


def evaluate(p, point: Sequence[Fraction]) -> Fraction:
    """
    Evaluate a polynomial or rational function at a rational point.

    Args:
        p: PolyElement, FracElement or Fraction
        point: Coordinates, one per ring variable

    Returns:
        Exact value
    """
    if isinstance(p, Fraction):
        return p
    if isinstance(p, FracElement):
        denom = evaluate(p.denom, point)
        if not denom:
            raise DomainError("rational function evaluated on its pole locus")
        return evaluate(p.numer, point) / denom
    if len(point) != p.ring.ngens:
        raise DimensionError(f"point has {len(point)} coordinates, ring has {p.ring.ngens}")
    total = Fraction(0)
    for monom, coeff in p.terms():
        term = from_qq(coeff)
        for x, e in zip(point, monom):
            if e:
                term *= to_rational(x) ** e
        total += term
    return total


def is_constant(value) -> bool:
    if isinstance(value, PolyElement):
        return value.is_ground
    if isinstance(value, FracElement):
        return value.numer.is_ground and value.denom.is_ground
    return True


def constant_value(value) -> Fraction:
    """Rational value of a constant polynomial, rational function or rational."""
    if isinstance(value, PolyElement):
        if not value.is_ground:
            raise DomainError("expected a constant polynomial")
        return from_qq(value.LC) if value else Fraction(0)
    if isinstance(value, FracElement):
        return constant_value(value.numer) / constant_value(value.denom)
    return to_rational(value)


def scale(value, factor: Fraction):
    """Multiply a scalar, polynomial or rational function by a rational."""
    factor = to_rational(factor)
    if isinstance(value, PolyElement):
        return value.mul_ground(to_qq(factor))
    if isinstance(value, FracElement):
        return value.field.new(value.numer.mul_ground(to_qq(factor)), value.denom)
    return value * factor


def multiply(a, b):
    """Product of two coefficients that may differ in representation."""
    if isinstance(a, Fraction) and not isinstance(b, Fraction):
        return scale(b, a)
    if isinstance(b, Fraction) and not isinstance(a, Fraction):
        return scale(a, b)
    if isinstance(a, FracElement) and isinstance(b, PolyElement):
        return a * a.field.new(b)
    if isinstance(a, PolyElement) and isinstance(b, FracElement):
        return b.field.new(a) * b
    return a * b


# ---------------------------------------------------------------------------
# Univariate utilities
# ---------------------------------------------------------------------------

def unipoly(coefficients: Sequence[Fraction]) -> PolyElement:
    """UniPoly from coefficients indexed by degree."""
    ring = parameter_ring()
    return ring.from_dict({(k,): to_qq(c) for k, c in enumerate(coefficients) if to_rational(c)})


def unipoly_gcd(f: PolyElement, g: PolyElement) -> PolyElement:
    """
    Monic gcd of two univariate polynomials.

    Args:
        f: First polynomial
        g: Second polynomial

    Returns:
        Monic gcd; constant exactly when f and g share no complex root
    """
    if not f and not g:
        raise UndefinedGcdError("gcd(0, 0) is undefined")
    _same_ring(f, g)
    return f.gcd(g).monic()


def unipoly_factors(f: PolyElement) -> List[Tuple[PolyElement, int]]:
    """Monic irreducible factors of f over QQ with multiplicities."""
    if not f:
        raise DomainError("cannot factor the zero polynomial")
    _, factors = f.factor_list()
    return [(factor.monic(), multiplicity) for factor, multiplicity in factors]


def degree(f: PolyElement) -> int:
    """Degree in the first variable; -1 for the zero polynomial."""
    if not f:
        return -1
    return max(monom[0] for monom in f.monoms())


# ---------------------------------------------------------------------------
# Scalar fields used by the generic linear algebra
# ---------------------------------------------------------------------------

class ScalarField(ABC):
    """
    An exact field whose elements support + - * / and truth testing.

    Each field also names the sympy domain its matrices are reduced over;
    ``to_domain``/``from_domain`` move single entries across.
    """

    name: str = "field"
    domain: Domain

    @abstractmethod
    def convert(self, value: Fraction):
        """
        Map a rational into the field.

        Args:
            value: Rational to embed

        Returns:
            Field element
        """

    @abstractmethod
    def to_domain(self, value):
        """Entry as an element of ``self.domain``."""

    @abstractmethod
    def from_domain(self, value):
        """Inverse of ``to_domain``."""

    @property
    def zero(self):
        return self.convert(Fraction(0))

    @property
    def one(self):
        return self.convert(Fraction(1))

    def __repr__(self) -> str:
        return self.name


class RationalField(ScalarField):
    """QQ with Fraction elements."""

    name = "QQ"
    domain = QQ

    def convert(self, value: Fraction) -> Fraction:
        return to_rational(value)

    def to_domain(self, value):
        return to_qq(value)

    def from_domain(self, value) -> Fraction:
        return from_qq(value)


class ParameterField(ScalarField):
    """QQ(t), used when a parameter must stay symbolic."""

    name = "QQ(t)"

    def __init__(self):
        self.field = parameter_field()
        self.domain = self.field.to_domain()

    def convert(self, value: Fraction) -> FracElement:
        return self.field.new(poly_constant(self.field.ring, value))

    def to_domain(self, value) -> FracElement:
        if isinstance(value, FracElement):
            return value
        if isinstance(value, PolyElement):
            return self.field.new(value)
        return self.convert(value)

    def from_domain(self, value) -> FracElement:
        return value

    @property
    def parameter(self) -> FracElement:
        return self.field.gens[0]


class QuotientField(ScalarField):
    """
    QQ[t]/(f) for an irreducible f; hosts an algebraic root of f exactly.

    Arithmetic is sympy's ``FiniteExtension``; elements are wrapped so they
    mix with plain rationals.
    """

    def __init__(self, modulus: PolyElement):
        if modulus.ring != parameter_ring():
            raise DomainError("quotient modulus must be a polynomial in the parameter t")
        if degree(modulus) < 1:
            raise DomainError("quotient modulus must have positive degree")
        factors = unipoly_factors(modulus)
        if len(factors) != 1 or factors[0][1] != 1:
            raise DomainError(f"modulus {format_poly(modulus)} is not irreducible over QQ")
        self.modulus = modulus.monic()
        self.domain = FiniteExtension(SympyPoly(self.modulus.as_expr(), *modulus.ring.symbols, domain=QQ))
        self.name = f"QQ[t]/({format_poly(self.modulus)})"

    def convert(self, value) -> "QuotientElement":
        if isinstance(value, QuotientElement):
            return value
        if isinstance(value, PolyElement):
            return QuotientElement(self, self.domain.from_sympy(value.as_expr()))
        value = to_rational(value)
        return QuotientElement(self, self.domain.from_sympy(SympyRational(value.numerator, value.denominator)))

    def to_domain(self, value):
        return self.convert(value).element

    def from_domain(self, value) -> "QuotientElement":
        return QuotientElement(self, value)

    @property
    def root(self) -> "QuotientElement":
        """Class of t, a root of the modulus."""
        return QuotientElement(self, self.domain.generator)

    def __eq__(self, other) -> bool:
        return isinstance(other, QuotientField) and self.modulus == other.modulus

    def __hash__(self) -> int:
        return hash(self.name)


class QuotientElement:
    """Residue class modulo an irreducible univariate polynomial."""

    __slots__ = ("field", "element")

    def __init__(self, field: QuotientField, element):
        self.field = field
        self.element = element

    @property
    def residue(self) -> PolyElement:
        """Representative of degree below the modulus degree."""
        return parameter_ring().from_expr(self.element.as_expr())

    def _coerce(self, other):
        if isinstance(other, QuotientElement):
            if other.field != self.field:
                raise DomainError("elements of different quotient fields")
            return other.element
        if isinstance(other, (int, Fraction)):
            return self.field.convert(Fraction(other)).element
        return NotImplemented

    def _wrap(self, element) -> "QuotientElement":
        return QuotientElement(self.field, element)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._wrap(self.element + other)

    __radd__ = __add__

    def __neg__(self):
        return self._wrap(-self.element)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._wrap(self.element - other)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._wrap(self.element * other)

    __rmul__ = __mul__

    def inverse(self) -> "QuotientElement":
        try:
            return self._wrap(self.element.inverse())
        except NotInvertible:
            raise ZeroDivisionError("zero has no inverse in a quotient field") from None

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * self._wrap(other).inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._wrap(other) * self.inverse()

    def __bool__(self) -> bool:
        return bool(self.element)

    def __eq__(self, other) -> bool:
        if isinstance(other, QuotientElement):
            return self.field == other.field and self.element == other.element
        if isinstance(other, (int, Fraction)):
            return self.element == self.field.convert(Fraction(other)).element
        return False

    def __hash__(self) -> int:
        return hash((self.field.name, self.element))

    def __repr__(self) -> str:
        return f"[{format_poly(self.residue)}]"


RATIONALS = RationalField()


# ---------------------------------------------------------------------------
# Canonical strings
# ---------------------------------------------------------------------------

def format_poly(p: PolyElement) -> str:
    """
    Canonical string of a polynomial, e.g. "-x3*x4^2 + 2*x1 - 1/2".

    Args:
        p: Polynomial

    Returns:
        Terms in descending graded-lex order
    """
    if not p:
        return "0"
    names = [str(symbol) for symbol in p.ring.symbols]
    pieces = []
    for monom, coeff in sorted(p.terms(), key=lambda term: (sum(term[0]), term[0]), reverse=True):
        value = from_qq(coeff)
        mono = "*".join(
            name if e == 1 else f"{name}^{e}" for name, e in zip(names, monom) if e
        )
        magnitude = abs(value)
        if not mono:
            body = rational_to_str(magnitude)
        elif magnitude == 1:
            body = mono
        else:
            body = f"{rational_to_str(magnitude)}*{mono}"
        pieces.append(("-" if value < 0 else "+", body))
    sign, body = pieces[0]
    text = f"-{body}" if sign == "-" else body
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text


def format_ratfunc(f: FracElement) -> str:
    if f.denom == f.denom.ring.one:
        return format_poly(f.numer)
    return f"({format_poly(f.numer)})/({format_poly(f.denom)})"


def format_scalar(value) -> str:
    """Canonical string of any coefficient the package produces."""
    if isinstance(value, PolyElement):
        return format_poly(value)
    if isinstance(value, FracElement):
        return format_ratfunc(value)
    if isinstance(value, QuotientElement):
        return repr(value)
    return rational_to_str(value)
