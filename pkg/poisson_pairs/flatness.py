"""Flatness of generic odd-dimensional pencils.

A generic pencil represented by (omega, omega1) is flat exactly when some
1-form lambda satisfies d omega = lambda^omega and d omega1 = lambda^omega1.
In dimension 3 such a lambda always exists for a Poisson pair and its
differential is the curvature of the pencil.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import List, Sequence, Tuple

from sympy.polys.rings import PolyElement

from .errors import DimensionError, InapplicableError, PreconditionError, UnsupportedError
from .exterior import (
    DiffForm,
    Index,
    contract,
    contraction_preimage,
    exterior_derivative,
    skew_matrix,
)
from .liealg import (
    AlgebraElement,
    LieAlgebra,
    bracket,
    change_of_basis,
    in_span,
    jacobi_check,
    linear_combination,
    trace_form,
    unimodular_ideal,
)
from .linalg import fraction_free_solve, mat_mul, nullspace, polynomial_nullspace, rank
from .models import (
    FlatnessReason,
    FlatnessReport,
    LambdaSolution,
    LieClassification,
    LinearClassification,
    ProportionalityResult,
    Verdict,
)
from .pencil import Pencil, compatibility_check, generic_at
from .ring import RATIONALS, coordinate_ring, evaluate, poly_constant, to_rational

logger = logging.getLogger(__name__)


@dataclass
class LambdaSystem:
    """
    Linear system for lambda: one row per (m-1)-index J and per form,
    A[J][k] = (-1)^(position of k in J) * form_{J minus k}, rhs = (d form)_J.
    """
    dim: int
    rows: List[Tuple[int, Index]]
    matrix: List[List[PolyElement]]
    rhs: List[PolyElement]

    @classmethod
    def build(cls, omega: DiffForm, omega1: DiffForm) -> "LambdaSystem":
        m = omega.dim
        if omega1.dim != m:
            raise DimensionError(f"forms have dimensions {m} and {omega1.dim}")
        if m < 3 or omega.degree != m - 2 or omega1.degree != m - 2:
            raise DimensionError(f"expected two forms of degree {m - 2} in dimension >= 3")
        ring = coordinate_ring(m)
        rows, matrix, rhs = [], [], []
        for which, form in enumerate((omega.to_polynomial(), omega1.to_polynomial())):
            differential = exterior_derivative(form)
            for J in combinations(range(m), m - 1):
                row = [ring.zero] * m
                for position, k in enumerate(J):
                    value = form.components.get(J[:position] + J[position + 1:])
                    if value is not None:
                        row[k] = -value if position % 2 else value
                rows.append((which, J))
                matrix.append(row)
                rhs.append(differential.components.get(J, ring.zero))
        return cls(m, rows, matrix, rhs)


def solve_lambda(omega: DiffForm, omega1: DiffForm) -> LambdaSolution:
    """
    Solve d omega = lambda^omega and d omega1 = lambda^omega1.

    Returns:
        LambdaSolution; lam has rational-function coefficients and
        denominator_locus is the lcm of their denominators
    """
    system = LambdaSystem.build(omega, omega1)
    result = fraction_free_solve(system.matrix, system.rhs)
    ring = coordinate_ring(system.dim)
    if not result.consistent:
        logger.debug("lambda system inconsistent (rank %d)", result.rank)
        return LambdaSolution(found=False, rank=result.rank)
    locus = ring.one
    for value in result.solution:
        if value:
            locus = locus.lcm(value.denom)
    lam = DiffForm(system.dim, 1, {(k,): value for k, value in enumerate(result.solution)})
    return LambdaSolution(found=True, lam=lam, unique=result.rank == system.dim,
                          rank=result.rank, denominator_locus=locus.monic())


def _inapplicable(detail: str, point) -> FlatnessReport:
    return FlatnessReport(verdict=Verdict.INAPPLICABLE, reason=FlatnessReason.PRECONDITIONS_FAILED,
                          detail=detail, point=point)


def flatness_test(p: Pencil, point: Sequence[Fraction]) -> FlatnessReport:
    """
    Flatness verdict of a pencil at a point.

    Args:
        p: Pencil of odd dimension
        point: Rational point where the pencil must be generic

    Returns:
        FlatnessReport; preconditions that fail give an inapplicable verdict
    """
    point = tuple(to_rational(x) for x in point)
    if p.dim % 2 == 0:
        return _inapplicable(f"dimension {p.dim} is even; the criterion covers odd dimensions", point)
    if p.dim < 3:
        return _inapplicable("dimension 1 carries only the zero pencil", point)
    try:
        compatibility = compatibility_check(p)
    except UnsupportedError as e:
        return _inapplicable(str(e), point)
    if not compatibility.ok:
        return _inapplicable(f"pencil is not compatible ({compatibility.criterion})", point)
    if not generic_at(p, point).generic:
        return _inapplicable("pencil is not generic at the point", point)
    solution = solve_lambda(p.omega, p.omega1)
    if not solution.found:
        return FlatnessReport(verdict=Verdict.NON_FLAT, reason=FlatnessReason.NO_LAMBDA, point=point)
    if not evaluate(solution.denominator_locus, point):
        report = _inapplicable("point lies on the denominator locus of lambda", point)
        report.lam = solution.lam
        report.denominator_locus = solution.denominator_locus
        return report
    if p.dim == 3:
        curvature = exterior_derivative(solution.lam)
        flat = curvature.is_zero()
        return FlatnessReport(
            verdict=Verdict.FLAT if flat else Verdict.NON_FLAT,
            reason=FlatnessReason.CURVATURE_ZERO if flat else FlatnessReason.CURVATURE_NONZERO,
            lam=solution.lam,
            denominator_locus=solution.denominator_locus,
            curvature=curvature,
            point=point,
        )
    return FlatnessReport(verdict=Verdict.FLAT, reason=FlatnessReason.LAMBDA_FOUND, lam=solution.lam,
                          denominator_locus=solution.denominator_locus, point=point)


def curvature_of_forms(omega: DiffForm, omega1: DiffForm) -> DiffForm:
    """d lambda for a representative pair in dimension 3."""
    if omega.dim != 3:
        raise DimensionError(f"curvature is defined in dimension 3, got {omega.dim}")
    solution = solve_lambda(omega, omega1)
    if not solution.found:
        raise PreconditionError("no lambda exists; the pair is not a Poisson pair", reason="no-lambda")
    return exterior_derivative(solution.lam)


def curvature_3d(p: Pencil) -> DiffForm:
    """
    Curvature 2-form of a compatible pencil in dimension 3.

    Raises:
        PreconditionError: the pencil is incompatible or lambda does not exist
    """
    if p.dim != 3:
        raise DimensionError(f"curvature is defined in dimension 3, got {p.dim}")
    if not compatibility_check(p).ok:
        raise PreconditionError("pencil is not compatible", reason="incompatible")
    return curvature_of_forms(p.omega, p.omega1)


def _skew_times(M: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    return tuple(sum((M[i][j] * v[j] for j in range(len(v))), Fraction(0)) for i in range(len(M)))


def image_constraint_holds(p: Pencil, point: Sequence[Fraction]) -> bool:
    """Whether Im Lambda(point) and Im Lambda1(point) meet inside Ker d lambda(point)."""
    point = tuple(to_rational(x) for x in point)
    curvature = curvature_3d(p).at(point)
    C = skew_matrix(curvature)
    B0 = skew_matrix(p.bivector.at(point))
    B1 = skew_matrix(p.bivector1.at(point))
    stacked = [list(B0[i]) + [-x for x in B1[i]] for i in range(p.dim)]
    for z in nullspace(stacked, RATIONALS, 2 * p.dim):
        w = _skew_times(B0, z[:p.dim])
        if any(_skew_times(C, w)):
            return False
    return True


def linear_hamiltonian_rank(L: LieAlgebra, alpha: Sequence[Fraction]) -> int:
    """Rank of [b, .] where b has the coordinates of alpha."""
    element = AlgebraElement(tuple(Fraction(a) for a in alpha))
    columns = [bracket(L, element, AlgebraElement.basis(L.dim, j)).coords for j in range(L.dim)]
    return rank([list(c) for c in columns], RATIONALS)


def casimir_proportionality_test(p: Pencil, point: Sequence[Fraction]) -> ProportionalityResult:
    """
    Compare Lambda(alpha, .) for a Casimir alpha of Lambda1 with the field X
    given by i_X volume = d omega, when d omega1 vanishes.

    Flat exactly when every 2x2 minor of the two fields vanishes identically.
    """
    point = tuple(to_rational(x) for x in point)
    m = p.dim
    if m < 5 or m % 2 == 0:
        return ProportionalityResult(applicable=False, reason="needs odd dimension at least 5")
    if not generic_at(p, point).generic:
        return ProportionalityResult(applicable=False, reason="pencil is not generic at the point")
    if exterior_derivative(p.omega1):
        return ProportionalityResult(applicable=False, reason="d omega1 does not vanish")
    differential = exterior_derivative(p.omega)
    if not differential.at(point):
        return ProportionalityResult(applicable=False, reason="d omega vanishes at the point")
    ring = coordinate_ring(m)
    kernel = polynomial_nullspace(skew_matrix(p.bivector1.to_polynomial(), ring.zero), m)
    if len(kernel) != 1:
        return ProportionalityResult(applicable=False, reason="Lambda1 does not have corank 1")
    casimir = DiffForm(m, 1, {(i,): c for i, c in enumerate(kernel[0])})
    if not casimir.at(point):
        return ProportionalityResult(applicable=False, reason="Casimir vanishes at the point")
    X = contraction_preimage(differential, p.volume)
    F = contract(p.bivector, casimir)
    first = [F.components.get((i,), ring.zero) for i in range(m)]
    second = [X.components.get((i,), ring.zero) for i in range(m)]
    for i, j in combinations(range(m), 2):
        minor = first[i] * second[j] - first[j] * second[i]
        if minor:
            return ProportionalityResult(applicable=True, flat=False, witness=((i, j), minor),
                                         casimir=casimir, field=F, hamiltonian=X)
    return ProportionalityResult(applicable=True, flat=True, casimir=casimir, field=F, hamiltonian=X)


# ---------------------------------------------------------------------------
# Dimension 3
# ---------------------------------------------------------------------------

def _plane_coefficients(L: LieAlgebra) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
    """(a22, a23, a32, a33) with [e1,e2] = a22 e2 + a23 e3, [e1,e3] = a32 e2 + a33 e3."""
    return (L.structure_constant(0, 1, 1), L.structure_constant(0, 1, 2),
            L.structure_constant(0, 2, 1), L.structure_constant(0, 2, 2))


def normalize_plane_extension(L: LieAlgebra) -> LieAlgebra:
    """
    Rewrite a non-unimodular 3-dimensional algebra so {e2, e3} spans its
    unimodular ideal.

    Raises:
        InapplicableError: the algebra is unimodular
    """
    if L.dim != 3:
        raise DimensionError(f"expected a 3-dimensional algebra, got {L.dim}")
    traces = trace_form(L).coords
    if not any(traces):
        raise InapplicableError("unimodular algebras give flat pairs only", reason="unimodular")
    if not traces[1] and not traces[2]:
        return L
    k = next(i for i, value in enumerate(traces) if value)
    ideal = unimodular_ideal(L)
    columns = [AlgebraElement.basis(3, k).coords, ideal[0].coords, ideal[1].coords]
    T = [[columns[c][r] for c in range(3)] for r in range(3)]
    return change_of_basis(L, T)


def linear_3d_pencil(L: LieAlgebra, b2: Fraction, b3: Fraction) -> Pencil:
    """Linear pair (Lambda, d/dx1^(b2 d/dx2 + b3 d/dx3)) in the normalized basis."""
    normalized = normalize_plane_extension(L)
    beta = DiffForm(3, 2, {(0, 1): Fraction(b2), (0, 2): Fraction(b3)})
    return Pencil.linear_pair(normalized, beta)


def classify_linear_3d(L: LieAlgebra, b2: Fraction, b3: Fraction) -> LinearClassification:
    """
    Classify the linear pair of a 3-dimensional non-unimodular algebra with
    the cocycle b2 e1*^e2* + b3 e1*^e3* (normalized basis).

    Flat exactly when a32 b2^2 + (a33 - a22) b2 b3 - a23 b3^2 vanishes.
    """
    normalized = normalize_plane_extension(L)
    b2, b3 = Fraction(b2), Fraction(b3)
    a22, a23, a32, a33 = _plane_coefficients(normalized)
    quadratic = a32 * b2 ** 2 + (a33 - a22) * b2 * b3 - a23 * b3 ** 2
    generic_somewhere = bool(a22 * b3 - a32 * b2) or bool(a23 * b3 - a33 * b2)
    return LinearClassification(
        generic_somewhere=generic_somewhere,
        flat=quadratic == 0,
        quadratic=quadratic,
        nonflat_choice_exists=not (a23 == 0 and a32 == 0 and a22 == a33),
        coefficients={"a22": a22, "a23": a23, "a32": a32, "a33": a33},
    )


def classify_lie_3d(L: LieAlgebra, L1: LieAlgebra) -> LieClassification:
    """
    Reduce a compatible pair of 3-dimensional brackets to the normal form
    [e1,e2]_1 = e3, [e1,e3]_1 = b e2, [e1,e2] = a22 e2 + a23 e3,
    [e1,e3] = a32 e2 + a33 e3 and decide generic non-flatness.

    Raises:
        InapplicableError: incompatible pair, or both brackets unimodular
    """
    if L.dim != 3 or L1.dim != 3:
        raise DimensionError("classification needs two 3-dimensional algebras")
    for algebra in (L, L1, linear_combination(L, L1, 1, 1)):
        if not jacobi_check(algebra).ok:
            raise InapplicableError("brackets are not compatible", reason="incompatible")
    tau, tau1 = trace_form(L).coords, trace_form(L1).coords
    if not any(tau) and not any(tau1):
        raise InapplicableError("both brackets are unimodular; the pair is flat", reason="both-unimodular")
    if rank([list(tau), list(tau1)], RATIONALS) == 2:
        return LieClassification(generic_nonflat=False, reason="distinct-unimodular-ideals")
    if any(tau):
        k = next(i for i, value in enumerate(tau) if value)
        factor = tau1[k] / tau[k]
        nonunimodular, unimodular = L, linear_combination(L1, L, 1, -factor)
    else:
        nonunimodular, unimodular = L1, L
    if unimodular.is_abelian:
        return LieClassification(generic_nonflat=False, reason="proportional-brackets")
    ideal = unimodular_ideal(nonunimodular)
    i1, i2 = ideal
    if bracket(unimodular, i1, i2) or not all(
            in_span(bracket(unimodular, AlgebraElement.basis(3, j), b), ideal) for j in range(3) for b in ideal):
        raise InapplicableError("unimodular ideal is not an abelian ideal of the second bracket",
                                reason="no-shared-ideal")
    k = next(i for i, value in enumerate(trace_form(nonunimodular).coords) if value)
    e1 = AlgebraElement.basis(3, k)
    cyclic = None
    for w in (i1, i2, i1 + i2):
        image = bracket(unimodular, e1, w)
        if rank([list(w.coords), list(image.coords)], RATIONALS) == 2:
            cyclic = w
            break
    if cyclic is None:
        return LieClassification(generic_nonflat=False, reason="proportional-brackets")
    e3 = bracket(unimodular, e1, cyclic)
    T = [[e1.coords[r], cyclic.coords[r], e3.coords[r]] for r in range(3)]
    N = change_of_basis(nonunimodular, T)
    U = change_of_basis(unimodular, T)
    a22, a23, a32, a33 = _plane_coefficients(N)
    b = U.structure_constant(0, 2, 1)
    ring = coordinate_ring(3)
    _, x2, x3 = ring.gens

    def c(value):
        return poly_constant(ring, value)

    P = c(a22 * b) * x2 ** 2 + c(a23 * b - a32) * x2 * x3 - c(a33) * x3 ** 2
    Q = c(b) * x2 ** 2 - x3 ** 2
    proportional = a22 * b == a33 * b and a23 * b - a32 == 0
    if b == 0:
        eigenvector_nonflat = a32 != 0
    else:
        MN = [[a22, a32], [a23, a33]]
        MU = [[Fraction(0), b], [Fraction(1), Fraction(0)]]
        eigenvector_nonflat = mat_mul(MN, MU) != mat_mul(MU, MN)
    generic = bool(P)
    logger.debug("lie 3d normal form: a=(%s,%s,%s,%s) b=%s", a22, a23, a32, a33, b)
    return LieClassification(
        generic_nonflat=generic and not proportional,
        reason="normal-form",
        normalized=(N, U),
        P=P,
        Q=Q,
        proportional=proportional,
        eigenvector_nonflat=eigenvector_nonflat,
        coefficients={"a22": a22, "a23": a23, "a32": a32, "a33": a33, "b": b},
    )
