"""Lie algebras given by structure constants.

Structure constants are stored for i < j only: ``constants[(i, j)][k]`` is
c_ij^k with [e_i, e_j] = sum_k c_ij^k e_k, all indices 0-based. Elements and
dual elements carry plain coordinate tuples, so their entries may be
rationals or elements of any ``ScalarField`` (QQ(t), QQ[t]/(f)).
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from sympy.polys.rings import PolyElement

from .errors import DimensionError, DomainError, PreconditionError, SingularMatrixError
from .exterior import DiffForm, MultiVector, one_form, sort_with_sign, wedge, wedge_power
from .linalg import inverse, mat_vec, nullspace, rank, row_reduce, solve
from .models import (
    DegenerateParameter,
    GenericCoupleReport,
    HamiltonianSubalgebra,
    JacobiReport,
    JacobiViolation,
    SubalgebraKind,
)
from .ring import (
    RATIONALS,
    ParameterField,
    QuotientField,
    ScalarField,
    constant_value,
    coordinate_ring,
    degree,
    format_poly,
    is_constant,
    parameter_ring,
    poly_constant,
    rational_to_str,
    scale,
    to_rational,
    unipoly_factors,
)

logger = logging.getLogger(__name__)

Constants = Dict[Tuple[int, int], Dict[int, Fraction]]


@dataclass(frozen=True)
class LieAlgebra:
    """
    Finite-dimensional Lie algebra over QQ.

    Attributes:
        dim: Dimension m
        constants: c_ij^k for i < j, zero entries dropped
        basis_labels: Names of e_1..e_m
        name: Optional description
    """
    dim: int
    constants: Mapping[Tuple[int, int], Mapping[int, Fraction]] = field(default_factory=dict)
    basis_labels: Tuple[str, ...] = ()
    name: str = ""

    def __post_init__(self):
        if self.dim < 1:
            raise DimensionError(f"algebra dimension must be positive, got {self.dim}")
        normalized: Constants = {}
        for (i, j), coefficients in self.constants.items():
            if i == j:
                raise DomainError(f"bracket [e{i + 1}, e{i + 1}] must not be specified")
            sign = 1
            if i > j:
                i, j, sign = j, i, -1
            for index in (i, j):
                if not 0 <= index < self.dim:
                    raise DimensionError(f"basis index {index + 1} out of range 1..{self.dim}")
            row = normalized.setdefault((i, j), {})
            for k, value in coefficients.items():
                if not 0 <= k < self.dim:
                    raise DimensionError(f"basis index {k + 1} out of range 1..{self.dim}")
                row[k] = row.get(k, Fraction(0)) + sign * to_rational(value)
        cleaned = {
            pair: {k: v for k, v in sorted(row.items()) if v}
            for pair, row in sorted(normalized.items())
        }
        object.__setattr__(self, "constants", {pair: row for pair, row in cleaned.items() if row})
        labels = tuple(self.basis_labels) or tuple(f"e{i + 1}" for i in range(self.dim))
        if len(labels) != self.dim:
            raise DimensionError(f"{len(labels)} basis labels for dimension {self.dim}")
        if len(set(labels)) != len(labels):
            raise DomainError("basis labels must be distinct")
        object.__setattr__(self, "basis_labels", labels)

    def structure_constant(self, i: int, j: int, k: int) -> Fraction:
        if i == j:
            return Fraction(0)
        if i < j:
            return self.constants.get((i, j), {}).get(k, Fraction(0))
        return -self.constants.get((j, i), {}).get(k, Fraction(0))

    def bracket_basis(self, i: int, j: int) -> Dict[int, Fraction]:
        """[e_i, e_j] as a sparse coordinate map."""
        if i < j:
            return dict(self.constants.get((i, j), {}))
        if i > j:
            return {k: -v for k, v in self.constants.get((j, i), {}).items()}
        return {}

    def ad_matrix(self, i: int) -> List[List[Fraction]]:
        """Matrix of [e_i, .]: column j holds the coordinates of [e_i, e_j]."""
        M = [[Fraction(0)] * self.dim for _ in range(self.dim)]
        for j in range(self.dim):
            for k, value in self.bracket_basis(i, j).items():
                M[k][j] = value
        return M

    def label_index(self, label: str) -> int:
        try:
            return self.basis_labels.index(label)
        except ValueError:
            raise DomainError(f"unknown basis label {label!r}") from None

    @property
    def is_abelian(self) -> bool:
        return not self.constants

    @cached_property
    def dual_differentials(self) -> Tuple[Dict[Tuple[int, int], Fraction], ...]:
        """d e_k* = sum_{i<j} coefficient e_i*^e_j* for each k."""
        table: List[Dict[Tuple[int, int], Fraction]] = [{} for _ in range(self.dim)]
        for pair, row in self.constants.items():
            for k, value in row.items():
                table[k][pair] = -value
        return tuple(table)

    def bracket(self, a: "AlgebraElement", b: "AlgebraElement") -> "AlgebraElement":
        return bracket(self, a, b)


@dataclass(frozen=True)
class AlgebraElement:
    coords: Tuple[Any, ...]

    @classmethod
    def basis(cls, dim: int, index: int, field: ScalarField = RATIONALS) -> "AlgebraElement":
        return cls(tuple(field.one if i == index else field.zero for i in range(dim)))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        _check_length(self, other)
        return type(self)(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        _check_length(self, other)
        return type(self)(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "AlgebraElement":
        return type(self)(tuple(-a for a in self.coords))

    def scaled(self, factor) -> "AlgebraElement":
        return type(self)(tuple(a * factor for a in self.coords))

    def __bool__(self) -> bool:
        return any(bool(a) for a in self.coords)


@dataclass(frozen=True)
class DualElement(AlgebraElement):
    """Linear functional on an algebra, equivalently a point of its dual."""

    def pair(self, element: AlgebraElement):
        _check_length(self, element)
        total = None
        for a, b in zip(self.coords, element.coords):
            term = a * b
            total = term if total is None else total + term
        return total

    def to_form(self) -> DiffForm:
        """Constant 1-form with Fraction coefficients."""
        return one_form(self.dim, [to_rational(c) for c in self.coords])

    @classmethod
    def from_form(cls, form: DiffForm) -> "DualElement":
        if form.degree != 1:
            raise DimensionError(f"expected a 1-form, got degree {form.degree}")
        return cls(tuple(constant_value(form.components.get((i,), Fraction(0))) for i in range(form.dim)))


def _check_length(a: AlgebraElement, b: AlgebraElement) -> None:
    if len(a.coords) != len(b.coords):
        raise DimensionError(f"elements have lengths {len(a.coords)} and {len(b.coords)}")


def _check_element(L: LieAlgebra, a: AlgebraElement) -> None:
    if len(a.coords) != L.dim:
        raise DimensionError(f"element has {len(a.coords)} coordinates, algebra has dimension {L.dim}")


def bracket(L: LieAlgebra, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """
    Bracket of two elements.

    Args:
        L: Algebra
        a: Left element
        b: Right element, same coordinate type as a

    Returns:
        [a, b] with coordinates in the common field
    """
    _check_element(L, a)
    _check_element(L, b)
    zero = a.coords[0] - a.coords[0]
    out = [zero] * L.dim
    for (i, j), row in L.constants.items():
        weight = a.coords[i] * b.coords[j] - a.coords[j] * b.coords[i]
        if not weight:
            continue
        for k, value in row.items():
            out[k] = out[k] + scale(weight, value)
    return AlgebraElement(tuple(out))


def linear_combination(L: LieAlgebra, L1: LieAlgebra, s: Fraction, s1: Fraction) -> LieAlgebra:
    """Bracket s[.,.] + s1[.,.]_1 on the common underlying space."""
    if L.dim != L1.dim:
        raise DimensionError(f"algebras have dimensions {L.dim} and {L1.dim}")
    s, s1 = to_rational(s), to_rational(s1)
    constants: Constants = {}
    for weight, algebra in ((s, L), (s1, L1)):
        for pair, row in algebra.constants.items():
            target = constants.setdefault(pair, {})
            for k, value in row.items():
                target[k] = target.get(k, Fraction(0)) + weight * value
    return LieAlgebra(L.dim, constants, basis_labels=L.basis_labels)


def _basis_vectors(L: LieAlgebra) -> List[AlgebraElement]:
    return [AlgebraElement.basis(L.dim, i) for i in range(L.dim)]


def jacobi_check(L: LieAlgebra) -> JacobiReport:
    """
    Check the Jacobi identity on every basis triple i < j < k.

    Returns:
        JacobiReport listing each nonzero cyclic sum
    """
    basis = _basis_vectors(L)
    violations = []
    for i, j, k in combinations(range(L.dim), 3):
        a, b, c = basis[i], basis[j], basis[k]
        defect = (bracket(L, bracket(L, a, b), c)
                  + bracket(L, bracket(L, b, c), a)
                  + bracket(L, bracket(L, c, a), b))
        if defect:
            violations.append(JacobiViolation(i, j, k, defect.coords))
    if violations:
        logger.debug("jacobi: %d violated triples", len(violations))
    return JacobiReport(ok=not violations, violations=violations)


def ce_d(L: LieAlgebra, form: DiffForm) -> DiffForm:
    """
    Chevalley-Eilenberg differential of a constant form on the algebra.

    Args:
        L: Algebra
        form: Form with constant coefficients (rationals or constant polynomials)

    Returns:
        Form of one degree higher with coefficients of the same type
    """
    if not isinstance(form, DiffForm):
        raise DomainError("the Chevalley-Eilenberg differential acts on forms")
    if form.dim != L.dim:
        raise DimensionError(f"form has dimension {form.dim}, algebra has {L.dim}")
    data: Dict[Tuple[int, ...], Any] = {}
    for key, value in form.components.items():
        if not is_constant(value):
            raise DomainError("Chevalley-Eilenberg differential needs constant coefficients")
        for position, index in enumerate(key):
            for (i, j), coefficient in L.dual_differentials[index].items():
                target, sign = sort_with_sign(key[:position] + (i, j) + key[position + 1:])
                if target is None:
                    continue
                if position % 2:
                    sign = -sign
                term = scale(value, coefficient * sign)
                data[target] = data[target] + term if target in data else term
    return DiffForm(L.dim, form.degree + 1, data)


def is_cocycle(L: LieAlgebra, beta: DiffForm) -> bool:
    return not ce_d(L, beta)


def _as_form(L: LieAlgebra, rho) -> DiffForm:
    if isinstance(rho, DiffForm):
        return rho
    _check_element(L, rho)
    return rho.to_form()


def contact_check(L: LieAlgebra, rho) -> bool:
    """
    Whether rho^(d rho)^k is a volume form on a (2k+1)-dimensional algebra.

    Raises:
        DimensionError: even dimension
    """
    if L.dim % 2 == 0:
        raise DimensionError(f"contact forms need odd dimension, got {L.dim}")
    form = _as_form(L, rho)
    k = (L.dim - 1) // 2
    if k == 0:
        return bool(form)
    differential = ce_d(L, form)
    if not form or not differential:
        return False
    return bool(wedge(form, wedge_power(differential, k)))


def lie_poisson(L: LieAlgebra) -> MultiVector:
    """Lie-Poisson bivector sum_{i<j} (sum_k c_ij^k x_k) d/dx_i^d/dx_j."""
    ring = coordinate_ring(L.dim)
    data = {}
    for pair, row in L.constants.items():
        data[pair] = sum((ring.gens[k] * poly_constant(ring, value) for k, value in row.items()), ring.zero)
    return MultiVector(L.dim, 2, data)


def trace_form(L: LieAlgebra) -> DualElement:
    """Functional a -> tr [a, .]."""
    traces = [Fraction(0)] * L.dim
    for (i, j), row in L.constants.items():
        # [e_i, e_j] contributes c_ij^j to tr ad e_i and -c_ij^i to tr ad e_j
        traces[i] += row.get(j, Fraction(0))
        traces[j] -= row.get(i, Fraction(0))
    return DualElement(tuple(traces))


def modular_vector(L: LieAlgebra) -> MultiVector:
    """Modular vector field sum_j tr[e_j, .] d/dx_j with constant coefficients."""
    return MultiVector(L.dim, 1, {(j,): value for j, value in enumerate(trace_form(L).coords)})


def is_unimodular(L: LieAlgebra) -> bool:
    return not trace_form(L)


def unimodular_ideal(L: LieAlgebra) -> List[AlgebraElement]:
    """Basis of {a : tr[a, .] = 0}."""
    return [AlgebraElement(v) for v in nullspace([list(trace_form(L).coords)], RATIONALS, L.dim)]


def span_basis(vectors: Sequence[AlgebraElement], dim: int) -> List[AlgebraElement]:
    """Echelon basis of the span of vectors."""
    if not vectors:
        return []
    M, pivots = row_reduce([list(v.coords) for v in vectors], RATIONALS, dim)
    return [AlgebraElement(tuple(M[r])) for r in range(len(pivots))]


def in_span(vector: AlgebraElement, basis: Sequence[AlgebraElement]) -> bool:
    if not vector:
        return True
    if not basis:
        return False
    rows = [list(b.coords) for b in basis]
    return rank(rows + [list(vector.coords)]) == rank(rows)


def derived_ideal(L: LieAlgebra) -> List[AlgebraElement]:
    """Basis of [L, L]."""
    images = [AlgebraElement(tuple(L.structure_constant(i, j, k) for k in range(L.dim)))
              for i, j in L.constants]
    return span_basis(images, L.dim)


def is_ideal(L: LieAlgebra, basis: Sequence[AlgebraElement]) -> bool:
    """Whether span(basis) is closed under brackets with every basis vector."""
    for e in _basis_vectors(L):
        for b in basis:
            if not in_span(bracket(L, e, b), basis):
                return False
    return True


def center(L: LieAlgebra) -> List[AlgebraElement]:
    """Basis of {a : [a, e_j] = 0 for all j}."""
    rows = []
    for j in range(L.dim):
        for k in range(L.dim):
            rows.append([L.structure_constant(i, j, k) for i in range(L.dim)])
    return [AlgebraElement(v) for v in nullspace(rows, RATIONALS, L.dim)]


def _differential_matrix(L: LieAlgebra, alpha: Sequence[Any], field: ScalarField) -> List[List[Any]]:
    """D[i][j] = d alpha(e_i, e_j) = -alpha([e_i, e_j])."""
    zero = field.zero
    D = [[zero] * L.dim for _ in range(L.dim)]
    for (i, j), row in L.constants.items():
        value = zero
        for k, c in row.items():
            value = value + scale(alpha[k], c)
        D[i][j] = -value
        D[j][i] = value
    return D


def hamiltonian_subalgebra(L: LieAlgebra, alpha: DualElement,
                           field: ScalarField = RATIONALS) -> HamiltonianSubalgebra:
    """
    Subalgebra attached to alpha: zero when alpha is contact, otherwise the
    span of a Hamiltonian v and the kernel generator u of d alpha.

    Args:
        L: Odd-dimensional algebra
        alpha: Functional with coordinates in field
        field: Field of the coordinates (QQ, QQ(t) or a quotient field)

    Returns:
        HamiltonianSubalgebra with [v, u] = eigenvalue * u

    Raises:
        PreconditionError: (d alpha)^(n-1) vanishes
    """
    if L.dim % 2 == 0:
        raise DimensionError(f"expected an odd-dimensional algebra, got {L.dim}")
    _check_element(L, alpha)
    coords = [field.convert(c) if isinstance(c, (int, Fraction)) else c for c in alpha.coords]
    D = _differential_matrix(L, coords, field)
    if rank(D, field) < L.dim - 1:
        raise PreconditionError("(d alpha)^(n-1) vanishes", reason="degenerate-differential", witness=alpha)
    (u,) = nullspace(D, field, L.dim)
    kernel = AlgebraElement(tuple(u))
    value = sum((a * b for a, b in zip(coords, u)), field.zero)
    if value:
        return HamiltonianSubalgebra(kind=SubalgebraKind.ZERO)
    # i_v d alpha = -alpha reads sum_i v_i D[i][j] = -alpha_j
    transposed = [[D[i][j] for i in range(L.dim)] for j in range(L.dim)]
    v = solve(transposed, [-a for a in coords], field)
    if v is None:
        raise PreconditionError("alpha has no Hamiltonian", reason="no-hamiltonian", witness=alpha)
    hamiltonian = AlgebraElement(tuple(v))
    image = bracket(L, hamiltonian, kernel)
    p = next(i for i, c in enumerate(kernel.coords) if c)
    eigenvalue = image.coords[p] / kernel.coords[p]
    if image != kernel.scaled(eigenvalue):
        raise PreconditionError("[v, Ker d alpha] is not contained in Ker d alpha",
                                reason="kernel-not-invariant", witness=image)
    return HamiltonianSubalgebra(
        kind=SubalgebraKind.TWO_DIMENSIONAL,
        hamiltonian=hamiltonian,
        kernel=kernel,
        eigenvalue=eigenvalue,
    )


def parameter_forms(L: LieAlgebra, alpha: DualElement, beta: DualElement
                    ) -> Tuple[DiffForm, DiffForm]:
    """alpha + t*beta and d alpha + t*d beta with coefficients in QQ[t]."""
    ring = parameter_ring()
    t = ring.gens[0]

    def lift(form: DiffForm) -> DiffForm:
        return form.map_coefficients(lambda c: poly_constant(ring, c))

    a, b = alpha.to_form(), beta.to_form()
    form = lift(a) + lift(b).scaled(t)
    differential = lift(ce_d(L, a)) + lift(ce_d(L, b)).scaled(t)
    return form, differential


def degeneracy_polynomial(L: LieAlgebra, alpha: DualElement, beta: DualElement) -> PolyElement:
    """
    Volume coefficient of (alpha + t beta)^(d(alpha + t beta))^(n-1) as a
    polynomial in t.
    """
    if L.dim % 2 == 0:
        raise DimensionError(f"expected an odd-dimensional algebra, got {L.dim}")
    _check_element(L, alpha)
    _check_element(L, beta)
    form, differential = parameter_forms(L, alpha, beta)
    n = (L.dim + 1) // 2
    top = form if n == 1 else wedge(form, wedge_power(differential, n - 1))
    return top.components.get(tuple(range(L.dim)), parameter_ring().zero)


def _linear_root(factor: PolyElement) -> Fraction:
    return -constant_value(factor.coeff(1)) / constant_value(factor.LC)


def _combine(alpha: DualElement, beta: DualElement, t, field: ScalarField) -> DualElement:
    return DualElement(tuple(field.convert(a) + t * field.convert(b)
                             for a, b in zip(alpha.coords, beta.coords)))


def _examine(L: LieAlgebra, label: str, factor: Optional[str], alpha: DualElement,
             field: ScalarField) -> DegenerateParameter:
    try:
        sub = hamiltonian_subalgebra(L, alpha, field)
    except PreconditionError as e:
        return DegenerateParameter(value=label, factor=factor, error=str(e))
    return DegenerateParameter(value=label, factor=factor, subalgebra=sub)


def generic_couple_check(L: LieAlgebra, alpha: DualElement, beta: DualElement) -> GenericCoupleReport:
    """
    Decide whether (alpha, beta) is a generic couple.

    The pair (d alpha, d beta) must be generic, and at every complex t where
    alpha + t*beta is not contact (t = infinity included) the attached
    subalgebra must be non-abelian. Irrational roots are handled in
    QQ[t]/(f) for each irreducible factor f of the degeneracy polynomial.
    """
    from .pencil import pair_genericity

    if L.dim % 2 == 0:
        raise DimensionError(f"expected an odd-dimensional algebra, got {L.dim}")
    certificate = pair_genericity(ce_d(L, alpha.to_form()), ce_d(L, beta.to_form()))
    D = degeneracy_polynomial(L, alpha, beta)
    if not certificate.generic:
        return GenericCoupleReport(generic=False, pair_generic=False, degeneracy=D,
                                   reason="differentials-not-generic")
    entries: List[DegenerateParameter] = []
    reason = None
    if D:
        for factor, _ in unipoly_factors(D):
            text = format_poly(factor)
            if degree(factor) == 1:
                root = _linear_root(factor)
                entries.append(_examine(L, rational_to_str(root), text,
                                        _combine(alpha, beta, root, RATIONALS), RATIONALS))
            else:
                quotient = QuotientField(factor)
                entries.append(_examine(L, f"root of {text}", text,
                                        _combine(alpha, beta, quotient.root, quotient), quotient))
        logger.debug("degeneracy %s: %d factors", format_poly(D), len(entries))
    else:
        # alpha + t*beta is never contact; decide once over QQ(t)
        parameters = ParameterField()
        generic_entry = _examine(L, "t", None, _combine(alpha, beta, parameters.parameter, parameters),
                                 parameters)
        eigenvalue = None if generic_entry.error else generic_entry.subalgebra.eigenvalue
        if eigenvalue is None or not eigenvalue:
            entries.append(generic_entry)
        elif not is_constant(eigenvalue):
            numerator = eigenvalue.numer
            if numerator.is_ground:
                entries.append(DegenerateParameter(value="t", error="bracket coefficient is not constant"))
            for factor, _ in ([] if numerator.is_ground else unipoly_factors(numerator)):
                text = format_poly(factor)
                label = rational_to_str(_linear_root(factor)) if degree(factor) == 1 else f"root of {text}"
                entries.append(DegenerateParameter(
                    value=label,
                    factor=text,
                    subalgebra=HamiltonianSubalgebra(kind=SubalgebraKind.TWO_DIMENSIONAL,
                                                     eigenvalue=Fraction(0)),
                ))
        reason = "never-contact"
    infinity = _examine(L, "infinity", None, DualElement(tuple(to_rational(b) for b in beta.coords)), RATIONALS)
    if infinity.error or infinity.subalgebra.kind is SubalgebraKind.TWO_DIMENSIONAL:
        entries.append(infinity)
    generic = not any(entry.error or entry.abelian for entry in entries)
    if not generic and reason is None:
        reason = "abelian-degenerate-subalgebra"
    return GenericCoupleReport(generic=generic, pair_generic=True, degeneracy=D,
                               degenerate_parameters=entries, reason=reason)


def change_of_basis(L: LieAlgebra, T: Sequence[Sequence[Fraction]]) -> LieAlgebra:
    """
    Rewrite an algebra in the basis whose a-th vector is column a of T.

    Raises:
        SingularMatrixError: T is not invertible
    """
    m = L.dim
    if len(T) != m or any(len(row) != m for row in T):
        raise DimensionError(f"change of basis needs a {m}x{m} matrix")
    T = [[to_rational(x) for x in row] for row in T]
    try:
        T_inv = inverse(T)
    except SingularMatrixError:
        raise SingularMatrixError("change-of-basis matrix is singular") from None
    columns = [AlgebraElement(tuple(T[r][a] for r in range(m))) for a in range(m)]
    constants: Constants = {}
    for a, b in combinations(range(m), 2):
        image = bracket(L, columns[a], columns[b]).coords
        coords = {k: v for k, v in enumerate(mat_vec(T_inv, image)) if v}
        if coords:
            constants[(a, b)] = coords
    return LieAlgebra(m, constants, name=L.name)


def element_from_labels(L: LieAlgebra, coefficients: Mapping[str, Fraction]) -> DualElement:
    coords = [Fraction(0)] * L.dim
    for label, value in coefficients.items():
        coords[L.label_index(label)] += to_rational(value)
    return DualElement(tuple(coords))
