"""Pencils of bivector fields: compatibility, rank, genericity and Casimirs."""

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, List, Optional, Sequence, Tuple

from sympy.polys.rings import PolyElement

from .errors import DimensionError, DomainError, KindError, UnsupportedError
from .exterior import (
    DiffForm,
    MultiVector,
    VolumeForm,
    exterior_derivative,
    form_from_bivector,
    skew_matrix,
    wedge,
    wedge_power,
)
from .liealg import LieAlgebra, ce_d, jacobi_check, lie_poisson, linear_combination
from .linalg import nullspace, rank
from .models import CompatibilityResult, GenericityCertificate, PencilKind
from .ring import (
    RATIONALS,
    coordinate_ring,
    evaluate,
    parameter_ring,
    poly_constant,
    to_rational,
    unipoly_gcd,
)

logger = logging.getLogger(__name__)

Point = Tuple[Fraction, ...]

INFINITY = None


def constant_bivector(form: DiffForm) -> MultiVector:
    """Constant bivector with the components of a 2-form, as polynomials."""
    if form.degree != 2:
        raise DimensionError(f"expected a 2-form, got degree {form.degree}")
    ring = coordinate_ring(form.dim)
    return MultiVector(form.dim, 2, {k: poly_constant(ring, to_rational(v)) for k, v in form.components.items()})


def _as_polynomial_bivector(bivector: MultiVector) -> MultiVector:
    if not isinstance(bivector, MultiVector):
        raise KindError("pencil members must be multivectors")
    if bivector.degree != 2:
        raise DimensionError(f"expected a bivector, got degree {bivector.degree}")
    return bivector.to_polynomial()


@dataclass(frozen=True)
class Pencil:
    """
    Pair of bivector fields (Lambda, Lambda1) on QQ^m.

    Use the constructors linear_pair, lie_pair and raw; the representing
    (m-2)-forms are taken against the standard volume form.
    """
    dim: int
    kind: PencilKind
    bivector: MultiVector
    bivector1: MultiVector
    algebra: Optional[LieAlgebra] = None
    cocycle: Optional[DiffForm] = None
    algebra1: Optional[LieAlgebra] = None
    volume: VolumeForm = field(default=None)

    def __post_init__(self):
        if self.volume is None:
            object.__setattr__(self, "volume", VolumeForm(self.dim))
        for member in (self.bivector, self.bivector1):
            if member.dim != self.dim:
                raise DimensionError(f"bivector has dimension {member.dim}, pencil has {self.dim}")

    @classmethod
    def linear_pair(cls, L: LieAlgebra, beta: DiffForm) -> "Pencil":
        """Lie-Poisson structure of L with the constant structure of a 2-form beta."""
        if beta.dim != L.dim or beta.degree != 2:
            raise DimensionError("cocycle must be a 2-form on the algebra")
        beta = beta.to_rational()
        return cls(L.dim, PencilKind.LINEAR_PAIR, lie_poisson(L), constant_bivector(beta),
                   algebra=L, cocycle=beta)

    @classmethod
    def lie_pair(cls, L: LieAlgebra, L1: LieAlgebra) -> "Pencil":
        if L.dim != L1.dim:
            raise DimensionError(f"algebras have dimensions {L.dim} and {L1.dim}")
        return cls(L.dim, PencilKind.LIE_PAIR, lie_poisson(L), lie_poisson(L1), algebra=L, algebra1=L1)

    @classmethod
    def raw(cls, bivector: MultiVector, bivector1: MultiVector) -> "Pencil":
        if bivector.dim != bivector1.dim:
            raise DimensionError(f"bivectors have dimensions {bivector.dim} and {bivector1.dim}")
        return cls(bivector.dim, PencilKind.RAW,
                   _as_polynomial_bivector(bivector), _as_polynomial_bivector(bivector1))

    @cached_property
    def omega(self) -> DiffForm:
        return form_from_bivector(self.bivector, self.volume)

    @cached_property
    def omega1(self) -> DiffForm:
        return form_from_bivector(self.bivector1, self.volume)

    def member(self, t: Optional[Fraction]) -> MultiVector:
        """Lambda + t*Lambda1, or Lambda1 for t = INFINITY."""
        if t is INFINITY:
            return self.bivector1
        return self.bivector + self.bivector1.scaled(to_rational(t))

    def swapped(self) -> "Pencil":
        return Pencil.raw(self.bivector1, self.bivector)

    def shifted(self, a: Fraction, point: Sequence[Fraction]) -> "Pencil":
        """
        Pencil (Lambda, Lambda1 + a*Lambda(point)).

        A linear pair stays linear: Lambda(point) is the exact 2-form -d(point).
        """
        a = to_rational(a)
        frozen = self.bivector.at(_point(point, self.dim))
        if self.kind is PencilKind.LINEAR_PAIR:
            added = DiffForm(self.dim, 2, {k: a * v for k, v in frozen.components.items()})
            return Pencil.linear_pair(self.algebra, self.cocycle + added)
        return Pencil.raw(self.bivector, self.bivector1 + constant_bivector(
            DiffForm(self.dim, 2, {k: a * v for k, v in frozen.components.items()})))

    def reparametrized(self, a: Fraction) -> "Pencil":
        """Pencil ((1-a)*Lambda + a*Lambda1, Lambda1); never chosen automatically."""
        a = to_rational(a)
        if self.kind is PencilKind.LIE_PAIR:
            combined = linear_combination(self.algebra, self.algebra1, 1 - a, a)
            return Pencil.lie_pair(combined, self.algebra1)
        return Pencil.raw(self.bivector.scaled(1 - a) + self.bivector1.scaled(a), self.bivector1)


def _point(point: Sequence, dim: int) -> Point:
    if len(point) != dim:
        raise DimensionError(f"point has {len(point)} coordinates, dimension is {dim}")
    return tuple(to_rational(x) for x in point)


def compatibility_check(p: Pencil) -> CompatibilityResult:
    """
    Decide whether the pencil consists of compatible Poisson structures.

    Raises:
        UnsupportedError: raw pencil in dimension above 3
    """
    if p.kind is PencilKind.LINEAR_PAIR:
        witness = ce_d(p.algebra, p.cocycle)
        return CompatibilityResult(ok=not witness, criterion="cocycle", witness=witness or None)
    if p.kind is PencilKind.LIE_PAIR:
        for L in (p.algebra, p.algebra1, linear_combination(p.algebra, p.algebra1, 1, 1)):
            report = jacobi_check(L)
            if not report.ok:
                return CompatibilityResult(ok=False, criterion="jacobi", witness=report.violations[0])
        return CompatibilityResult(ok=True, criterion="jacobi")
    if p.dim <= 2:
        return CompatibilityResult(ok=True, criterion="low-dimension")
    if p.dim > 3:
        raise UnsupportedError(f"compatibility of raw pencils is only decided in dimension 3, got {p.dim}")
    for form in (p.omega, p.omega1, p.omega + p.omega1):
        witness = wedge(form, exterior_derivative(form))
        if witness:
            return CompatibilityResult(ok=False, criterion="integrability", witness=witness)
    return CompatibilityResult(ok=True, criterion="integrability")


def rank_at(p: Pencil, point: Sequence[Fraction], t: Optional[Fraction] = INFINITY) -> int:
    """Rank of (Lambda + t*Lambda1)(point), Lambda1(point) when t is INFINITY."""
    member = p.member(t).at(_point(point, p.dim))
    return rank(skew_matrix(member), RATIONALS) if member else 0


def pair_genericity(first, second) -> GenericityCertificate:
    """
    Genericity of a pair of constant skew objects (2-forms or bivectors).

    Computes every component of (first + t*second)^(n-1) as a polynomial in t.
    """
    if first.dim != second.dim:
        raise DimensionError(f"dimensions differ: {first.dim} vs {second.dim}")
    m = first.dim
    if m % 2 == 0:
        raise DimensionError(f"genericity is defined in odd dimension, got {m}")
    n = (m + 1) // 2
    ring = parameter_ring()
    if n == 1:
        return GenericityCertificate(point=None, t_polynomials=[ring.one], gcd=ring.one, leading_ok=True)
    t = ring.gens[0]

    def lift(obj):
        return obj.map_coefficients(lambda c: poly_constant(ring, c))

    combined = lift(first) + lift(second).scaled(t)
    polynomials = list(wedge_power(combined, n - 1).components.values())
    common = None
    for poly in polynomials:
        common = poly if common is None else unipoly_gcd(common, poly)
    if common is not None:
        common = common.monic()
    leading_ok = bool(second) and bool(wedge_power(second, n - 1))
    return GenericityCertificate(point=None, t_polynomials=polynomials, gcd=common, leading_ok=leading_ok)


def generic_at(p: Pencil, point: Sequence[Fraction]) -> GenericityCertificate:
    """
    Genericity certificate of the pencil at a point.

    Raises:
        DimensionError: even dimension
    """
    if p.dim % 2 == 0:
        raise DimensionError(f"genericity is defined in odd dimension, got {p.dim}")
    point = _point(point, p.dim)
    certificate = pair_genericity(p.bivector.at(point), p.bivector1.at(point))
    certificate.point = point
    return certificate


def find_generic_point(p: Pencil, budget: int = 200, seed: int = 0,
                       nonvanishing: Iterable[PolyElement] = ()) -> Optional[Point]:
    """
    Random search for a generic point with small-denominator coordinates.

    Args:
        p: Pencil
        budget: Number of candidate points
        seed: Seed of the sampler
        nonvanishing: Polynomials that must not vanish at the point

    Returns:
        A generic point, or None (inconclusive) once the budget is spent
    """
    rng = random.Random(seed)
    constraints = list(nonvanishing)
    for trial in range(budget):
        bound = 2 + trial // 10
        point = tuple(Fraction(rng.randint(-bound, bound), rng.randint(1, bound)) for _ in range(p.dim))
        if any(not evaluate(f, point) for f in constraints):
            continue
        if generic_at(p, point).generic:
            logger.debug("generic point found after %d trials: %s", trial + 1, point)
            return point
    logger.debug("no generic point within %d trials", budget)
    return None


def casimirs_at(p: Pencil, point: Sequence[Fraction], t: Optional[Fraction] = INFINITY) -> List[DiffForm]:
    """
    Basis of the kernel of (Lambda + t*Lambda1)(point) as constant 1-forms,
    each scaled so its last nonzero coordinate is 1.
    """
    member = p.member(t).at(_point(point, p.dim))
    basis = nullspace(skew_matrix(member), RATIONALS, p.dim)
    forms = []
    for vector in basis:
        last = next(c for c in reversed(vector) if c)
        forms.append(DiffForm(p.dim, 1, {(i,): c / last for i, c in enumerate(vector)}))
    return forms


def casimir_independence(p: Pencil, point: Sequence[Fraction], ts: Sequence[Fraction]) -> bool:
    """
    Whether Lambda + t*Lambda1 has a one-dimensional kernel at each t and the
    kernels at distinct t are linearly independent.
    """
    if len(set(ts)) != len(ts):
        raise DomainError("parameter values must be distinct")
    rows = []
    for t in ts:
        kernel = casimirs_at(p, point, t)
        if len(kernel) != 1:
            return False
        rows.append([kernel[0].components.get((i,), Fraction(0)) for i in range(p.dim)])
    return rank(rows, RATIONALS) == len(ts)
