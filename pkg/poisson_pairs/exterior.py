"""Differential forms and multivector fields on QQ^m.

Components are keyed by strictly increasing 0-based index tuples; rendering
and serialization use 1-based subscripts. Coefficients may be rationals
(constant objects on a Lie algebra dual), polynomials or rational functions,
but a single object never mixes polynomial rings.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from sympy.polys.fields import FracElement
from sympy.polys.rings import PolyElement

from .errors import DegenerateInputError, DimensionError, DomainError, KindError
from .linalg import rank as field_rank
from .ring import (
    RATIONALS,
    constant_value,
    coordinate_ring,
    evaluate,
    format_scalar,
    is_constant,
    multiply,
    partial_derivative,
    poly_constant,
    rational_to_str,
    scale,
    to_rational,
)

logger = logging.getLogger(__name__)

Index = Tuple[int, ...]


def _inversions(left: Index, right: Index) -> int:
    return sum(1 for a in left for b in right if a > b)


def sort_with_sign(indices: Iterable[int]) -> Tuple[Optional[Index], int]:
    """
    Sort an index sequence, tracking the permutation sign.

    Returns:
        (sorted tuple, sign), or (None, 0) when an index repeats
    """
    items = list(indices)
    if len(set(items)) != len(items):
        return None, 0
    sign = 1
    for i in range(len(items)):
        for j in range(len(items) - 1 - i):
            if items[j] > items[j + 1]:
                items[j], items[j + 1] = items[j + 1], items[j]
                sign = -sign
    return tuple(items), sign


def _accumulate(target: Dict[Index, Any], key: Index, value) -> None:
    if key in target:
        target[key] = target[key] + value
    else:
        target[key] = value


def _is_zero(value) -> bool:
    return not value


@dataclass(frozen=True)
class _Graded:
    """Shared storage of forms and multivectors."""

    dim: int
    degree: int
    components: Mapping[Index, Any] = field(default_factory=dict)

    kind = "graded"

    def __post_init__(self):
        if self.dim < 1:
            raise DimensionError(f"dimension must be positive, got {self.dim}")
        if self.degree < 0:
            raise DimensionError(f"degree must be non-negative, got {self.degree}")
        cleaned = {}
        for key, value in self.components.items():
            key = tuple(key)
            if len(key) != self.degree:
                raise DimensionError(f"index {key} does not have length {self.degree}")
            if any(b <= a for a, b in zip(key, key[1:])):
                raise DomainError(f"index {key} is not strictly increasing")
            if key and not (0 <= key[0] and key[-1] < self.dim):
                raise DimensionError(f"index {key} out of range for dimension {self.dim}")
            if not _is_zero(value):
                cleaned[key] = value
        object.__setattr__(self, "components", dict(sorted(cleaned.items())))

    @classmethod
    def from_terms(cls, dim: int, degree: int, terms: Iterable[Tuple[Sequence[int], Any]]):
        """
        Build an object from unsorted index sequences.

        Args:
            dim: Ambient dimension
            degree: Degree of every term
            terms: (0-based indices, coefficient) pairs; repeated indices vanish

        Returns:
            Normalized object
        """
        data: Dict[Index, Any] = {}
        for indices, coefficient in terms:
            key, sign = sort_with_sign(indices)
            if key is None:
                continue
            _accumulate(data, key, coefficient if sign > 0 else -coefficient)
        return cls(dim, degree, data)

    @classmethod
    def zero(cls, dim: int, degree: int):
        return cls(dim, degree, {})

    def _check_compatible(self, other: "_Graded") -> None:
        if type(self) is not type(other):
            raise KindError(f"cannot combine a {self.kind} with a {other.kind}")
        if self.dim != other.dim:
            raise DimensionError(f"dimensions differ: {self.dim} vs {other.dim}")

    def __add__(self, other: "_Graded"):
        self._check_compatible(other)
        if self.degree != other.degree:
            raise DimensionError(f"degrees differ: {self.degree} vs {other.degree}")
        data = dict(self.components)
        for key, value in other.components.items():
            _accumulate(data, key, value)
        return type(self)(self.dim, self.degree, data)

    def __neg__(self):
        return type(self)(self.dim, self.degree, {k: -v for k, v in self.components.items()})

    def __sub__(self, other: "_Graded"):
        return self + (-other)

    def __bool__(self) -> bool:
        return bool(self.components)

    def is_zero(self) -> bool:
        return not self.components

    def scaled(self, factor):
        """Multiply every coefficient by a rational, polynomial or rational function."""
        return type(self)(self.dim, self.degree,
                          {k: multiply(v, factor) for k, v in self.components.items()})

    def map_coefficients(self, function):
        return type(self)(self.dim, self.degree, {k: function(v) for k, v in self.components.items()})

    def coefficient(self, indices: Sequence[int]):
        """Coefficient of the blade with the given 0-based indices (sign-adjusted)."""
        key, sign = sort_with_sign(indices)
        if key is None or key not in self.components:
            return None
        value = self.components[key]
        return value if sign > 0 else -value

    def at(self, point: Sequence[Fraction]):
        """Evaluate every coefficient at a rational point."""
        return type(self)(self.dim, self.degree,
                          {k: evaluate(v, point) for k, v in self.components.items()})

    def is_constant(self) -> bool:
        return all(is_constant(v) for v in self.components.values())

    def to_polynomial(self):
        """Same object with coefficients in QQ[x1..xm]."""
        ring = coordinate_ring(self.dim)

        def lift(value):
            if isinstance(value, (PolyElement, FracElement)):
                return value
            return poly_constant(ring, value)

        return self.map_coefficients(lift)

    def to_rational(self):
        """Same object with constant coefficients turned into Fractions."""
        return self.map_coefficients(constant_value)

    def _blade(self, key: Index) -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        if not self.components:
            return "0"
        pieces: List[Tuple[str, str]] = []
        for key, value in self.components.items():
            blade = self._blade(key)
            if is_constant(value):
                q = constant_value(value)
                magnitude = rational_to_str(abs(q))
                if not blade:
                    body = magnitude
                elif abs(q) == 1:
                    body = blade
                else:
                    body = f"{magnitude}*{blade}"
                pieces.append(("-" if q < 0 else "+", body))
            else:
                text = format_scalar(value)
                single = isinstance(value, PolyElement) and len(value.terms()) == 1
                if not blade:
                    body = text if single else f"({text})"
                elif single:
                    body = f"{text}*{blade}"
                else:
                    body = f"({text})*{blade}"
                if single and body.startswith("-"):
                    pieces.append(("-", body[1:]))
                else:
                    pieces.append(("+", body))
        sign, body = pieces[0]
        rendered = f"-{body}" if sign == "-" else body
        for sign, body in pieces[1:]:
            rendered += f" {sign} {body}"
        return rendered


@dataclass(frozen=True, eq=True)
class DiffForm(_Graded):
    """Differential form of fixed degree."""

    kind = "form"

    def _blade(self, key: Index) -> str:
        return "^".join(f"dx{i + 1}" for i in key)


@dataclass(frozen=True, eq=True)
class MultiVector(_Graded):
    """Multivector field of fixed degree."""

    kind = "multivector"

    def _blade(self, key: Index) -> str:
        return "^".join(f"d/dx{i + 1}" for i in key)


@dataclass(frozen=True)
class VolumeForm:
    """Constant volume form scale * dx1^...^dxm."""

    dim: int
    scale: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "scale", to_rational(self.scale))
        if not self.scale:
            raise DegenerateInputError("volume form must have a nonzero coefficient")
        if self.dim < 1:
            raise DimensionError(f"dimension must be positive, got {self.dim}")

    @classmethod
    def from_form(cls, form: DiffForm) -> "VolumeForm":
        if form.degree != form.dim or len(form.components) != 1:
            raise DimensionError("a volume form has degree m and exactly one component")
        (value,) = form.components.values()
        if not is_constant(value):
            raise DomainError("only constant-coefficient volume forms are supported")
        return cls(form.dim, constant_value(value))

    def as_form(self) -> DiffForm:
        ring = coordinate_ring(self.dim)
        return DiffForm(self.dim, self.dim, {tuple(range(self.dim)): poly_constant(ring, self.scale)})


def one_form(dim: int, coefficients: Sequence[Any]) -> DiffForm:
    """1-form sum_i coefficients[i] dx_i."""
    if len(coefficients) != dim:
        raise DimensionError(f"expected {dim} coefficients, got {len(coefficients)}")
    return DiffForm(dim, 1, {(i,): c for i, c in enumerate(coefficients)})


def vector_field(dim: int, coefficients: Sequence[Any]) -> MultiVector:
    """Vector field sum_i coefficients[i] d/dx_i."""
    if len(coefficients) != dim:
        raise DimensionError(f"expected {dim} coefficients, got {len(coefficients)}")
    return MultiVector(dim, 1, {(i,): c for i, c in enumerate(coefficients)})


def skew_matrix(obj: _Graded, zero: Any = Fraction(0)) -> List[List[Any]]:
    """Antisymmetric matrix of a degree-2 object."""
    if obj.degree != 2:
        raise DimensionError(f"expected degree 2, got {obj.degree}")
    M = [[zero] * obj.dim for _ in range(obj.dim)]
    for (i, j), value in obj.components.items():
        M[i][j] = value
        M[j][i] = -value
    return M


def wedge(a: _Graded, b: _Graded) -> _Graded:
    """
    Exterior product with the Koszul sign.

    Args:
        a: Form or multivector
        b: Object of the same kind and dimension

    Returns:
        Product of degree deg a + deg b (zero object past the top degree)
    """
    a._check_compatible(b)
    degree = a.degree + b.degree
    data: Dict[Index, Any] = {}
    if degree <= a.dim:
        for left, ca in a.components.items():
            for right, cb in b.components.items():
                if not set(left).isdisjoint(right):
                    continue
                key = tuple(sorted(left + right))
                term = multiply(ca, cb)
                _accumulate(data, key, -term if _inversions(left, right) % 2 else term)
    return type(a)(a.dim, degree, data)


def wedge_all(objects: Sequence[_Graded]) -> _Graded:
    if not objects:
        raise DimensionError("wedge of an empty list")
    result = objects[0]
    for obj in objects[1:]:
        result = wedge(result, obj)
    return result


def wedge_power(a: _Graded, k: int) -> _Graded:
    """k-th exterior power, k >= 1."""
    if k < 1:
        raise DomainError(f"wedge power needs k >= 1, got {k}")
    result = a
    for _ in range(k - 1):
        result = wedge(result, a)
    return result


def exterior_derivative(a: DiffForm) -> DiffForm:
    """
    Exterior derivative of a form with polynomial, rational-function or
    constant coefficients. A top-degree form gives the empty form one degree up.
    """
    if not isinstance(a, DiffForm):
        raise KindError("exterior derivative needs a differential form")
    data: Dict[Index, Any] = {}
    for key, value in a.components.items():
        if is_constant(value):
            continue
        ngens = value.ring.ngens if isinstance(value, PolyElement) else value.field.ngens
        if ngens != a.dim:
            raise DimensionError(f"coefficient has {ngens} variables, form has dimension {a.dim}")
        for k in range(a.dim):
            if k in key:
                continue
            derivative = partial_derivative(value, k)
            if not derivative:
                continue
            position = sum(1 for i in key if i < k)
            target = tuple(sorted(key + (k,)))
            _accumulate(data, target, -derivative if position % 2 else derivative)
    return DiffForm(a.dim, a.degree + 1, data)


def interior_product(v: MultiVector, a: DiffForm) -> DiffForm:
    """
    Contraction i_v a of a form with a vector field.

    Args:
        v: Degree-1 multivector
        a: Form of the same dimension

    Returns:
        Form of degree deg a - 1 (the zero 0-form when a is a function)
    """
    if not isinstance(v, MultiVector) or not isinstance(a, DiffForm):
        raise KindError("interior product contracts a vector field into a form")
    if v.degree != 1:
        raise DimensionError(f"expected a vector field, got degree {v.degree}")
    if v.dim != a.dim:
        raise DimensionError(f"dimensions differ: {v.dim} vs {a.dim}")
    if a.degree == 0:
        return DiffForm(a.dim, 0, {})
    data: Dict[Index, Any] = {}
    for key, value in a.components.items():
        for position, i in enumerate(key):
            vi = v.components.get((i,))
            if vi is None:
                continue
            term = multiply(vi, value)
            _accumulate(data, key[:position] + key[position + 1:], -term if position % 2 else term)
    return DiffForm(a.dim, a.degree - 1, data)


def contract(bivector: MultiVector, alpha: DiffForm) -> MultiVector:
    """Vector field Lambda(alpha, .), i.e. sum_i alpha_i Lambda^{ij} d/dx_j."""
    if not isinstance(bivector, MultiVector) or not isinstance(alpha, DiffForm):
        raise KindError("contraction pairs a bivector with a 1-form")
    if bivector.degree != 2 or alpha.degree != 1:
        raise DimensionError("contraction needs a bivector and a 1-form")
    if bivector.dim != alpha.dim:
        raise DimensionError(f"dimensions differ: {bivector.dim} vs {alpha.dim}")
    data: Dict[Index, Any] = {}
    for (i, j), value in bivector.components.items():
        ai = alpha.components.get((i,))
        if ai is not None:
            _accumulate(data, (j,), multiply(ai, value))
        aj = alpha.components.get((j,))
        if aj is not None:
            _accumulate(data, (i,), -multiply(aj, value))
    return MultiVector(bivector.dim, 1, data)


def _pair_sign(i: int, j: int) -> int:
    # (-1)^(i+j-1) for 1-based i < j
    return 1 if (i + j) % 2 else -1


def bivector_from_form(omega: DiffForm, volume: VolumeForm) -> MultiVector:
    """
    Bivector represented by an (m-2)-form: Lambda(a, b) * volume = a^b^omega.

    Args:
        omega: Form of degree m - 2
        volume: Constant volume form

    Returns:
        Bivector with coefficients of the same type as omega's
    """
    m = omega.dim
    if volume.dim != m:
        raise DimensionError(f"volume form has dimension {volume.dim}, form has {m}")
    if omega.degree != m - 2:
        raise DimensionError(f"expected a form of degree {m - 2}, got {omega.degree}")
    full = set(range(m))
    data = {}
    for key, value in omega.components.items():
        i, j = sorted(full.difference(key))
        data[(i, j)] = scale(value, Fraction(_pair_sign(i, j)) / volume.scale)
    return MultiVector(m, 2, data)


def form_from_bivector(bivector: MultiVector, volume: VolumeForm) -> DiffForm:
    """
    Signed-complement (m-2)-form of a bivector, inverse of bivector_from_form.
    """
    m = bivector.dim
    if volume.dim != m:
        raise DimensionError(f"volume form has dimension {volume.dim}, bivector has {m}")
    if not isinstance(bivector, MultiVector) or bivector.degree != 2:
        raise DimensionError("expected a bivector")
    data = {}
    for (i, j), value in bivector.components.items():
        key = tuple(k for k in range(m) if k not in (i, j))
        data[key] = scale(value, Fraction(_pair_sign(i, j)) * volume.scale)
    return DiffForm(m, m - 2, data)


def contraction_preimage(form: DiffForm, volume: VolumeForm) -> MultiVector:
    """Vector field v with i_v volume = form, for a form of degree m - 1."""
    m = form.dim
    if form.degree != m - 1:
        raise DimensionError(f"expected a form of degree {m - 1}, got {form.degree}")
    data = {}
    for key, value in form.components.items():
        (j,) = set(range(m)).difference(key)
        data[(j,)] = scale(value, Fraction(-1 if j % 2 else 1) / volume.scale)
    return MultiVector(m, 1, data)


def hamiltonian_field(alpha: DiffForm, omega: DiffForm, volume: VolumeForm) -> MultiVector:
    """
    Hamiltonian vector field v with i_v volume = -alpha^omega.

    Args:
        alpha: 1-form
        omega: (m-2)-form representing the bivector
        volume: Constant volume form

    Returns:
        Vector field equal to Lambda(alpha, .)
    """
    if alpha.degree != 1:
        raise DimensionError(f"expected a 1-form, got degree {alpha.degree}")
    return contraction_preimage(-wedge(alpha, omega), volume)


def representative_from_kernel_data(alphas: Sequence[DiffForm], beta: DiffForm) -> Tuple[DiffForm, DiffForm]:
    """
    Representative of the bivector dual to beta on the common kernel of alphas.

    With m = 2k + r this returns (k * A^beta^(k-1), A^beta^k) where
    A = alpha_1^...^alpha_r.

    Raises:
        DegenerateInputError: A^beta^k vanishes
    """
    if not alphas:
        raise DimensionError("need at least one 1-form")
    m = beta.dim
    r = len(alphas)
    if beta.degree != 2 or any(alpha.degree != 1 for alpha in alphas):
        raise DimensionError("expected 1-forms and a 2-form")
    if (m - r) % 2 or m - r < 2:
        raise DimensionError(f"{r} one-forms do not leave an even positive rank in dimension {m}")
    k = (m - r) // 2
    head = wedge_all(list(alphas))
    top = wedge(head, wedge_power(beta, k))
    if not top:
        raise DegenerateInputError("alpha_1^...^alpha_r^beta^k vanishes")
    omega = head if k == 1 else wedge(head, wedge_power(beta, k - 1))
    return omega.scaled(Fraction(k)), top


def two_form_rank(beta: DiffForm, point: Sequence[Fraction]) -> int:
    """Rank of the skew matrix of beta at a rational point."""
    if beta.degree != 2:
        raise DimensionError(f"expected a 2-form, got degree {beta.degree}")
    if len(point) != beta.dim:
        raise DimensionError(f"point has {len(point)} coordinates, dimension is {beta.dim}")
    values = beta.map_coefficients(
        lambda c: evaluate(c, point) if isinstance(c, (PolyElement, FracElement)) else to_rational(c)
    )
    return field_rank(skew_matrix(values), RATIONALS)
