"""Algebra factories and the pencils built from them.

Matrix algebras use a fixed basis. For Aff(n) it is: the identity, then the
sl(n) part row-major over positions (i, j) (E_ij off the diagonal,
H_i = E_ii - E_{i+1,i+1} on it, position (n, n) skipped), then the
translations v_1..v_n. The special affine algebra drops the identity and the
character extension appends e.
"""

import logging
import random
from fractions import Fraction
from itertools import combinations
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .errors import (
    DegenerateInputError,
    DimensionError,
    DomainError,
    PreconditionError,
    SingularMatrixError,
    TorsionError,
)
from .exterior import DiffForm, skew_matrix
from .liealg import (
    AlgebraElement,
    Constants,
    DualElement,
    LieAlgebra,
    bracket,
    ce_d,
    contact_check,
    generic_couple_check,
    is_unimodular,
    lie_poisson,
    linear_combination,
    parameter_forms,
)
from .linalg import identity, inverse, mat_mul, mat_vec, nullspace, polynomial_nullspace, rank, solve, trace
from .models import Construction, RankReport, ScalarFamilies
from .pencil import Pencil, pair_genericity
from .ring import RATIONALS, parameter_ring, poly_terms, rational_to_str, to_rational

logger = logging.getLogger(__name__)

Matrix = List[List[Fraction]]


# ---------------------------------------------------------------------------
# Truncated and secondary algebras
# ---------------------------------------------------------------------------

def truncated_algebra(m: int) -> LieAlgebra:
    """[e_i, e_j] = (j - i) e_{i+j-1} when i + j <= m + 1, zero otherwise."""
    if m < 3:
        raise DimensionError(f"truncated algebra needs dimension at least 3, got {m}")
    constants: Constants = {}
    for i, j in combinations(range(m), 2):
        # 0-based: [e_i, e_j] = (j - i) e_{i+j}
        if i + j <= m - 1:
            constants[(i, j)] = {i + j: Fraction(j - i)}
    return LieAlgebra(m, constants, name=f"truncated({m})")


def secondary_algebra(L: LieAlgebra) -> LieAlgebra:
    """
    Extension of L by its adjoint module plus a grading element.

    Basis e_1..e_m, f_1..f_m, e with [e_i, e_j] = sum c_ij^k e_k,
    [e_i, f_j] = sum c_ij^k f_k and [f_j, e] = f_j.
    """
    m = L.dim
    constants: Constants = {}
    for (i, j), row in L.constants.items():
        constants[(i, j)] = dict(row)
    for i in range(m):
        for j in range(m):
            row = {m + k: v for k, v in L.bracket_basis(i, j).items()}
            if row:
                constants[(i, m + j)] = row
    for j in range(m):
        constants[(m + j, 2 * m)] = {m + j: Fraction(1)}
    labels = tuple(f"e{i + 1}" for i in range(m)) + tuple(f"f{j + 1}" for j in range(m)) + ("e",)
    return LieAlgebra(2 * m + 1, constants, basis_labels=labels,
                      name=f"secondary({L.name or m})")


def secondary_applicable(L: LieAlgebra, alpha: DualElement, beta: DualElement) -> bool:
    """Whether beta is contact and (alpha, beta) is a generic couple."""
    return contact_check(L, beta) and generic_couple_check(L, alpha, beta).generic


def casimir_curve(L: LieAlgebra, alpha: DualElement, beta: DualElement) -> List[Tuple[Fraction, ...]]:
    """
    Coefficients a_0, a_1, ... of the polynomial curve spanning
    Ker(d alpha + t d beta).

    Raises:
        PreconditionError: the kernel is not one-dimensional over QQ(t)
    """
    ring = parameter_ring()
    _, differential = parameter_forms(L, alpha, beta)
    kernel = polynomial_nullspace(skew_matrix(differential, ring.zero), L.dim)
    if len(kernel) != 1:
        raise PreconditionError(f"Ker(d alpha + t d beta) has dimension {len(kernel)}",
                                reason="not-generic-couple")
    (curve,) = kernel
    top = max((monom[0] for entry in curve for monom, _ in poly_terms(entry)), default=0)
    coefficients = [[Fraction(0)] * L.dim for _ in range(top + 1)]
    for i, entry in enumerate(curve):
        for monom, value in poly_terms(entry):
            coefficients[monom[0]][i] = value
    return [tuple(row) for row in coefficients]


def secondary_pencil(L: LieAlgebra, alpha: DualElement, beta: DualElement) -> Construction:
    """
    Linear pencil (Lambda, Lambda(0, beta, 0)) on the dual of the secondary
    algebra, analysed at (rho, alpha, 0).

    rho is fixed by rho(a_0) = 1 and rho(a_k) = 0 against the coefficients of
    the Casimir curve of (d alpha, d beta).

    Raises:
        PreconditionError: beta is not contact, (alpha, beta) is not a generic
            couple, or the curve coefficients are dependent
    """
    if L.dim % 2 == 0 or L.dim < 3:
        raise DimensionError(f"expected an odd dimension of at least 3, got {L.dim}")
    if not contact_check(L, beta):
        raise PreconditionError("beta is not a contact form", reason="beta-not-contact", witness=beta)
    report = generic_couple_check(L, alpha, beta)
    if not report.generic:
        raise PreconditionError(f"(alpha, beta) is not a generic couple: {report.reason}",
                                reason="not-generic-couple", witness=report.witness)
    curve = casimir_curve(L, alpha, beta)
    rhs = [Fraction(1)] + [Fraction(0)] * (len(curve) - 1)
    rho = solve([list(a) for a in curve], rhs, RATIONALS)
    if rho is None:
        raise PreconditionError("Casimir curve coefficients are linearly dependent",
                                reason="casimir-curve-degenerate", witness=curve)
    B = secondary_algebra(L)
    m = L.dim
    frozen = lie_poisson(B).at(tuple([Fraction(0)] * m + [to_rational(b) for b in beta.coords] + [Fraction(0)]))
    cocycle = DiffForm(B.dim, 2, dict(frozen.components))
    pencil = Pencil.linear_pair(B, cocycle)
    base_point = tuple(rho) + tuple(to_rational(a) for a in alpha.coords) + (Fraction(0),)
    logger.debug("secondary pencil on dimension %d, curve degree %d", B.dim, len(curve) - 1)
    return Construction(pencil=pencil, base_point=base_point, provenance={
        "construction": "secondary",
        "algebra": L.name,
        "alpha": [rational_to_str(to_rational(a)) for a in alpha.coords],
        "beta": [rational_to_str(to_rational(b)) for b in beta.coords],
        "casimir_curve": [[rational_to_str(c) for c in a] for a in curve],
    })


# ---------------------------------------------------------------------------
# Nijenhuis torsion
# ---------------------------------------------------------------------------

def _endomorphism(L: LieAlgebra, phi: Sequence[Sequence[Any]]) -> Matrix:
    if len(phi) != L.dim or any(len(row) != L.dim for row in phi):
        raise DimensionError(f"endomorphism must be a {L.dim}x{L.dim} matrix")
    return [[to_rational(x) for x in row] for row in phi]


def _apply(phi: Matrix, a: AlgebraElement) -> AlgebraElement:
    """phi(e_c) = sum_r phi[r][c] e_r."""
    return AlgebraElement(tuple(mat_vec(phi, a.coords)))


def nijenhuis_torsion(L: LieAlgebra, phi: Sequence[Sequence[Any]]) -> Dict[Tuple[int, int], AlgebraElement]:
    """
    N(a, b) = [phi a, phi b] + phi^2 [a, b] - phi [a, phi b] - phi [phi a, b]
    on every basis pair i < j.
    """
    phi = _endomorphism(L, phi)
    basis = [AlgebraElement.basis(L.dim, i) for i in range(L.dim)]
    images = [_apply(phi, e) for e in basis]
    table = {}
    for i, j in combinations(range(L.dim), 2):
        a, b = basis[i], basis[j]
        fa, fb = images[i], images[j]
        table[(i, j)] = (bracket(L, fa, fb)
                         + _apply(phi, _apply(phi, bracket(L, a, b)))
                         - _apply(phi, bracket(L, a, fb))
                         - _apply(phi, bracket(L, fa, b)))
    return table


def torsion_free(L: LieAlgebra, phi: Sequence[Sequence[Any]]) -> bool:
    return not any(nijenhuis_torsion(L, phi).values())


def deformed_bracket(L: LieAlgebra, phi: Sequence[Sequence[Any]]) -> LieAlgebra:
    """
    Bracket [a, b]_1 = [a, phi b] + [phi a, b] - phi [a, b].

    Raises:
        TorsionError: the Nijenhuis torsion of phi does not vanish
    """
    phi = _endomorphism(L, phi)
    for pair, value in nijenhuis_torsion(L, phi).items():
        if value:
            raise TorsionError(pair, value.coords)
    basis = [AlgebraElement.basis(L.dim, i) for i in range(L.dim)]
    images = [_apply(phi, e) for e in basis]
    constants: Constants = {}
    for i, j in combinations(range(L.dim), 2):
        a, b = basis[i], basis[j]
        value = bracket(L, a, images[j]) + bracket(L, images[i], b) - _apply(phi, bracket(L, a, b))
        row = {k: c for k, c in enumerate(value.coords) if c}
        if row:
            constants[(i, j)] = row
    return LieAlgebra(L.dim, constants, basis_labels=L.basis_labels, name=f"deformed({L.name})")


def intertwines(L: LieAlgebra, phi: Sequence[Sequence[Any]], t: Fraction) -> bool:
    """
    Whether I + t*phi maps [.,.] + t[.,.]_1 onto [.,.].

    Raises:
        SingularMatrixError: I + t*phi is not invertible
    """
    phi = _endomorphism(L, phi)
    t = to_rational(t)
    M = [[identity(L.dim)[r][c] + t * phi[r][c] for c in range(L.dim)] for r in range(L.dim)]
    try:
        inverse(M)
    except SingularMatrixError:
        raise SingularMatrixError(f"I + t*phi is singular at t = {rational_to_str(t)}") from None
    combined = linear_combination(L, deformed_bracket(L, phi), 1, t)
    basis = [AlgebraElement.basis(L.dim, i) for i in range(L.dim)]
    for i, j in combinations(range(L.dim), 2):
        left = _apply(M, bracket(combined, basis[i], basis[j]))
        right = bracket(L, _apply(M, basis[i]), _apply(M, basis[j]))
        if left != right:
            return False
    return True


def elementary_endomorphism(dim: int, target: int, source: int) -> Matrix:
    """e_target (x) e_source*, 0-based indices."""
    phi = [[Fraction(0)] * dim for _ in range(dim)]
    phi[target][source] = Fraction(1)
    return phi


# ---------------------------------------------------------------------------
# Affine algebras
# ---------------------------------------------------------------------------

def _sl_positions(n: int) -> List[Tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(n) if (i, j) != (n - 1, n - 1)]


def _sl_matrix(n: int, position: Tuple[int, int]) -> Matrix:
    i, j = position
    M = [[Fraction(0)] * n for _ in range(n)]
    if i != j:
        M[i][j] = Fraction(1)
    else:
        M[i][i] = Fraction(1)
        M[i + 1][i + 1] = Fraction(-1)
    return M


def _square(n: int, matrix: Sequence[Sequence[Any]]) -> Matrix:
    if len(matrix) != n or any(len(row) != n for row in matrix):
        raise DimensionError(f"expected a {n}x{n} matrix")
    return [[to_rational(x) for x in row] for row in matrix]


def affine_coordinates(n: int, matrix: Sequence[Sequence[Any]],
                       translation: Optional[Sequence[Any]] = None) -> Tuple[Fraction, ...]:
    """Coordinates of (A, v) in the basis of Aff(n)."""
    A = _square(n, matrix)
    v = [to_rational(x) for x in (translation or [0] * n)]
    if len(v) != n:
        raise DimensionError(f"translation must have {n} entries")
    scalar = trace(A) / n
    coords = [scalar]
    # H_k coefficient is the running sum of the traceless diagonal
    running = Fraction(0)
    for i, j in _sl_positions(n):
        if i != j:
            coords.append(A[i][j])
        else:
            running += A[i][i] - scalar
            coords.append(running)
    return tuple(coords + v)


def _matrix_algebra(n: int, with_identity: bool, a: Optional[Fraction], name: str) -> LieAlgebra:
    """
    Bracket ((A, v, s), (B, w, u)) -> ([A, B], A w - B v, u chi(A) - s chi(B))
    with chi(A) = -a tr(A) / n; without a the e-part is absent.
    """
    if n < 2:
        raise DimensionError(f"affine algebras need n >= 2, got {n}")
    basis: List[Tuple[Matrix, List[Fraction], Fraction]] = []
    zero_v = [Fraction(0)] * n
    if with_identity:
        basis.append((identity(n), zero_v, Fraction(0)))
    for position in _sl_positions(n):
        basis.append((_sl_matrix(n, position), zero_v, Fraction(0)))
    for k in range(n):
        v = [Fraction(0)] * n
        v[k] = Fraction(1)
        basis.append(([[Fraction(0)] * n for _ in range(n)], v, Fraction(0)))
    if a is not None:
        basis.append(([[Fraction(0)] * n for _ in range(n)], zero_v, Fraction(1)))

    def character(A: Matrix) -> Fraction:
        return -a * trace(A) / n if a is not None else Fraction(0)

    offset = 0 if with_identity else 1
    constants: Constants = {}
    for x, y in combinations(range(len(basis)), 2):
        A, v, s = basis[x]
        B, w, u = basis[y]
        AB, BA = mat_mul(A, B), mat_mul(B, A)
        C = [[AB[i][j] - BA[i][j] for j in range(n)] for i in range(n)]
        z = [p - q for p, q in zip(mat_vec(A, w), mat_vec(B, v))]
        coords = list(affine_coordinates(n, C, z))[offset:]
        if a is not None:
            coords.append(u * character(A) - s * character(B))
        row = {k: c for k, c in enumerate(coords) if c}
        if row:
            constants[(x, y)] = row
    labels = (["id"] if with_identity else [])
    for i, j in _sl_positions(n):
        labels.append(f"E{i + 1}{j + 1}" if i != j else f"H{i + 1}")
    labels += [f"v{k + 1}" for k in range(n)]
    if a is not None:
        labels.append("e")
    return LieAlgebra(len(basis), constants, basis_labels=tuple(labels), name=name)


def affine_algebra(n: int) -> LieAlgebra:
    """Aff(n) = gl(n) + translations, dimension n^2 + n."""
    return _matrix_algebra(n, True, None, f"aff({n})")


def special_affine(n: int) -> LieAlgebra:
    """sl(n) + translations, dimension n^2 + n - 1."""
    return _matrix_algebra(n, False, None, f"aff0({n})")


def character_extension(n: int, a: Fraction) -> LieAlgebra:
    """Aff(n) + K e with [id, e] = -a e and [sl + V, e] = 0."""
    a = to_rational(a)
    return _matrix_algebra(n, True, a, f"aff({n}, a={rational_to_str(a)})")


def killing_oneform(g: Sequence[Sequence[Any]], n: int) -> DualElement:
    """
    kil(g, .) = 2n tr(g .) on sl(n), extended by zero on the identity and the
    translations; coordinates are those of Aff(n).

    Raises:
        DomainError: g is not traceless
    """
    g = _square(n, g)
    if trace(g):
        raise DomainError("the Killing one-form needs a traceless matrix")
    coords = [Fraction(0)]
    for position in _sl_positions(n):
        coords.append(2 * n * trace(mat_mul(g, _sl_matrix(n, position))))
    return DualElement(tuple(coords + [Fraction(0)] * n))


def diagonal(values: Sequence[Any]) -> Matrix:
    n = len(values)
    return [[to_rational(values[i]) if i == j else Fraction(0) for j in range(n)] for i in range(n)]


def affine_rank_report(n: int, eigenvalues: Sequence[Any], tau_support: Sequence[int]) -> RankReport:
    """
    Rank of d(alpha_g + tau) on Aff(n) for g = diag(eigenvalues) and
    tau = sum of v_j* over the 1-based indices in tau_support.

    Raises:
        DomainError: eigenvalues do not sum to zero
    """
    values = [to_rational(x) for x in eigenvalues]
    if len(values) != n:
        raise DimensionError(f"expected {n} eigenvalues, got {len(values)}")
    if sum(values, Fraction(0)):
        raise DomainError("eigenvalues of g must sum to zero")
    L = affine_algebra(n)
    coords = list(killing_oneform(diagonal(values), n).coords)
    for j in tau_support:
        if not 1 <= j <= n:
            raise DimensionError(f"translation index {j} out of range 1..{n}")
        coords[n * n + j - 1] += 1
    D = skew_matrix(ce_d(L, DualElement(tuple(coords)).to_form()))
    kernel = [tuple(v) for v in nullspace(D, RATIONALS, L.dim)]
    report = RankReport(n=n, rank=rank(D, RATIONALS), dimension=L.dim,
                        kernel_escapes=any(v[0] for v in kernel), kernel=kernel)
    logger.debug("affine rank n=%d eigenvalues=%s: %d", n, values, report.rank)
    return report


# ---------------------------------------------------------------------------
# Scalar families
# ---------------------------------------------------------------------------

def collision_parameters(a: Sequence[Fraction], b: Sequence[Fraction]) -> Dict[Tuple[int, int], Fraction]:
    """Values t with a_i + t b_i = a_j + t b_j, for every pair that ever collides."""
    out = {}
    for i, j in combinations(range(len(a)), 2):
        if b[i] != b[j]:
            out[(i, j)] = -(a[i] - a[j]) / (b[i] - b[j])
    return out


def verify_scalar_families(families: ScalarFamilies) -> bool:
    """
    Check that a, b, c are pairwise distinct, c has no zero entry, a and b sum
    to zero, collisions of a + t b happen for one pair at a time, and at a
    collision every 1 + t c_i is nonzero.
    """
    a, b, c = (list(map(to_rational, x)) for x in (families.a, families.b, families.c))
    n = len(a)
    if n < 2 or len(b) != n or len(c) != n:
        return False
    if any(len(set(x)) != n for x in (a, b, c)) or not all(c):
        return False
    if sum(a, Fraction(0)) or sum(b, Fraction(0)):
        return False
    collisions = list(collision_parameters(a, b).values())
    if 0 in collisions or len(set(collisions)) != len(collisions):
        return False
    return all(1 + t * ci for t in collisions for ci in c)


def scalar_families(n: int, seed: int = 0, budget: int = 500) -> ScalarFamilies:
    """
    Seeded search for small rational families passing verify_scalar_families.

    Raises:
        DegenerateInputError: nothing found within the budget
    """
    if n < 2:
        raise DimensionError(f"scalar families need n >= 2, got {n}")
    rng = random.Random(seed)
    for attempt in range(budget):
        bound = n + 2 + attempt // 20
        a0 = rng.sample(range(-bound, bound + 1), n)
        b0 = rng.sample(range(-bound, bound + 1), n)
        a = tuple(Fraction(x) - Fraction(sum(a0), n) for x in a0)
        b = tuple(Fraction(x) - Fraction(sum(b0), n) for x in b0)
        forbidden = {-1 / t for t in collision_parameters(a, b).values() if t}
        pool = [Fraction(x) for x in range(-bound, bound + 1) if x and Fraction(x) not in forbidden]
        if len(pool) < n:
            continue
        families = ScalarFamilies(a=a, b=b, c=tuple(rng.sample(pool, n)))
        if verify_scalar_families(families):
            logger.debug("scalar families for n=%d after %d attempts", n, attempt + 1)
            return families
    raise DegenerateInputError(f"no scalar families for n={n} within {budget} attempts")


# ---------------------------------------------------------------------------
# Products
# ---------------------------------------------------------------------------

def product_algebra(L1: LieAlgebra, L2: LieAlgebra) -> LieAlgebra:
    """Direct product; the basis of L2 follows that of L1."""
    m = L1.dim
    constants: Constants = dict(L1.constants)
    for (i, j), row in L2.constants.items():
        constants[(m + i, m + j)] = {m + k: v for k, v in row.items()}
    labels = L1.basis_labels + L2.basis_labels
    if len(set(labels)) != len(labels):
        labels = tuple(f"e{i + 1}" for i in range(m)) + tuple(f"f{j + 1}" for j in range(L2.dim))
    return LieAlgebra(m + L2.dim, constants, basis_labels=labels,
                      name=f"{L1.name or m} x {L2.name or L2.dim}")


def affine_line() -> LieAlgebra:
    """Two-dimensional algebra [f1, f2] = f1."""
    return LieAlgebra(2, {(0, 1): {0: Fraction(1)}}, basis_labels=("f1", "f2"), name="aff(1)")


def product_pencil(L: LieAlgebra, alpha: DualElement, beta: DualElement) -> Construction:
    """
    Lie pencil on the dual of L x aff(1): the product bracket and its
    deformation by phi = f1 (x) beta, analysed at (alpha, 1, 0).

    Raises:
        PreconditionError: L is unimodular, beta is not contact or
            (d alpha, d beta) is not generic
    """
    if L.dim % 2 == 0 or L.dim < 3:
        raise DimensionError(f"expected an odd dimension of at least 3, got {L.dim}")
    if is_unimodular(L):
        raise PreconditionError("the algebra is unimodular", reason="unimodular")
    if not contact_check(L, beta):
        raise PreconditionError("beta is not a contact form", reason="beta-not-contact", witness=beta)
    certificate = pair_genericity(ce_d(L, alpha.to_form()), ce_d(L, beta.to_form()))
    if not certificate.generic:
        raise PreconditionError("(d alpha, d beta) is not generic", reason="differentials-not-generic",
                                witness=certificate.gcd)
    P = product_algebra(L, affine_line())
    m = L.dim
    phi = [[Fraction(0)] * P.dim for _ in range(P.dim)]
    for c, value in enumerate(beta.coords):
        phi[m][c] = to_rational(value)
    deformed = deformed_bracket(P, phi)
    base_point = tuple(to_rational(a) for a in alpha.coords) + (Fraction(1), Fraction(0))
    logger.debug("product pencil on dimension %d", P.dim)
    return Construction(pencil=Pencil.lie_pair(P, deformed), base_point=base_point, provenance={
        "construction": "product",
        "algebra": L.name,
        "alpha": [rational_to_str(to_rational(a)) for a in alpha.coords],
        "beta": [rational_to_str(to_rational(b)) for b in beta.coords],
    })
