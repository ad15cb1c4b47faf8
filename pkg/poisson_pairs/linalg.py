"""Exact linear algebra.

Two families of routines live here:

- Reduced echelon forms over any ``ScalarField`` (rationals, QQ(t),
  quotient fields ``QQ[t]/(f)``), computed by sympy's ``DomainMatrix`` over
  the field's domain and used for ranks, kernels, solves and inverses of
  constant matrices.
- Fraction-free (Bareiss) elimination over a polynomial ring, used for the
  polynomial systems behind the flatness criterion and Casimir curves.
"""

import logging
from dataclasses import dataclass
from typing import Any, List, Optional, Sequence, Tuple

from sympy.polys.fields import FracElement
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError
from sympy.polys.polyerrors import NotInvertible
from sympy.polys.rings import PolyElement, PolyRing

from .errors import DimensionError, SingularMatrixError
from .ring import RATIONALS, ScalarField, fraction_field

logger = logging.getLogger(__name__)

Matrix = List[List[Any]]


def _shape(matrix: Sequence[Sequence[Any]], ncols: Optional[int] = None) -> Tuple[int, int]:
    rows = len(matrix)
    if rows == 0:
        if ncols is None:
            raise DimensionError("cannot infer the column count of an empty matrix")
        return 0, ncols
    width = len(matrix[0])
    for row in matrix:
        if len(row) != width:
            raise DimensionError("matrix rows have different lengths")
    if ncols is not None and ncols != width:
        raise DimensionError(f"matrix has {width} columns, expected {ncols}")
    return rows, width


# ---------------------------------------------------------------------------
# Elimination over a field
# ---------------------------------------------------------------------------

def to_domain_matrix(matrix: Sequence[Sequence[Any]], field: ScalarField = RATIONALS,
                     ncols: Optional[int] = None) -> DomainMatrix:
    """
    Matrix of field entries as a DomainMatrix over ``field.domain``.

    Args:
        matrix: Rows of field elements; rationals are embedded
        field: Field the entries live in
        ncols: Column count, required when matrix has no rows
    """
    nrows, width = _shape(matrix, ncols)
    if nrows == 0:
        return DomainMatrix.zeros((0, width), field.domain)
    rows = [[field.to_domain(entry) for entry in row] for row in matrix]
    return DomainMatrix(rows, (nrows, width), field.domain)


def from_domain_matrix(dm: DomainMatrix, field: ScalarField = RATIONALS) -> Matrix:
    return [[field.from_domain(entry) for entry in row] for row in dm.to_list()]


def convert_matrix(matrix: Sequence[Sequence[Any]], field: ScalarField) -> Matrix:
    """Embed a matrix into field."""
    return from_domain_matrix(to_domain_matrix(matrix, field), field)


def row_reduce(matrix: Sequence[Sequence[Any]], field: ScalarField = RATIONALS,
               ncols: Optional[int] = None) -> Tuple[Matrix, List[int]]:
    """
    Reduced row echelon form.

    Args:
        matrix: Rows of field elements (rationals are converted)
        field: Field the entries live in
        ncols: Column count, required when matrix has no rows

    Returns:
        Tuple of (reduced matrix, pivot column indices)
    """
    dm = to_domain_matrix(matrix, field, ncols)
    if dm.shape[0] == 0:
        return [], []
    reduced, pivots = dm.rref()
    return from_domain_matrix(reduced, field), list(pivots)


def rank(matrix: Sequence[Sequence[Any]], field: ScalarField = RATIONALS) -> int:
    if not matrix:
        return 0
    return len(row_reduce(matrix, field)[1])


def nullspace(matrix: Sequence[Sequence[Any]], field: ScalarField = RATIONALS,
              ncols: Optional[int] = None) -> List[Tuple[Any, ...]]:
    """
    Basis of the right kernel, one vector per free column.

    Each basis vector has a 1 in its free column and zeros in the other
    free columns.
    """
    dm = to_domain_matrix(matrix, field, ncols)
    width = dm.shape[1]
    if dm.shape[0] == 0:
        return [tuple(field.one if i == j else field.zero for j in range(width)) for i in range(width)]
    reduced, pivots = dm.rref()
    if len(pivots) == width:
        return []
    kernel = reduced.nullspace_from_rref(pivots)
    return [tuple(field.from_domain(x) for x in row) for row in kernel.to_list()]


def solve(matrix: Sequence[Sequence[Any]], rhs: Sequence[Any],
          field: ScalarField = RATIONALS) -> Optional[Tuple[Any, ...]]:
    """
    One solution of matrix * x = rhs with every free variable set to zero.

    Returns:
        Solution tuple, or None when the system is inconsistent
    """
    nrows, width = _shape(matrix)
    if len(rhs) != nrows:
        raise DimensionError(f"right-hand side has {len(rhs)} entries, matrix has {nrows} rows")
    augmented = [list(row) + [value] for row, value in zip(matrix, rhs)]
    M, pivots = row_reduce(augmented, field, width + 1)
    if width in pivots:
        return None
    solution = [field.zero] * width
    for row, c in enumerate(pivots):
        solution[c] = M[row][width]
    return tuple(solution)


def inverse(matrix: Sequence[Sequence[Any]], field: ScalarField = RATIONALS) -> Matrix:
    """Inverse of a square matrix; raises SingularMatrixError."""
    n, width = _shape(matrix)
    if n != width:
        raise DimensionError(f"cannot invert a {n}x{width} matrix")
    try:
        inv = to_domain_matrix(matrix, field).inv()
    except (DMNonInvertibleMatrixError, NotInvertible, ZeroDivisionError):
        raise SingularMatrixError("matrix is singular") from None
    return from_domain_matrix(inv, field)


def mat_mul(a: Sequence[Sequence[Any]], b: Sequence[Sequence[Any]], field: ScalarField = RATIONALS) -> Matrix:
    if len(a) and len(a[0]) != len(b):
        raise DimensionError(f"cannot multiply {len(a)}x{len(a[0])} by {len(b)}x{len(b[0]) if b else 0}")
    product = to_domain_matrix(a, field).matmul(to_domain_matrix(b, field))
    return from_domain_matrix(product, field)


def mat_vec(a: Sequence[Sequence[Any]], v: Sequence[Any], field: ScalarField = RATIONALS) -> List[Any]:
    return [row[0] for row in mat_mul(a, [[x] for x in v], field)]


def trace(a: Sequence[Sequence[Any]], field: ScalarField = RATIONALS) -> Any:
    total = field.domain.zero
    for entry in to_domain_matrix(a, field).diagonal():
        total += entry
    return field.from_domain(total)


def identity(n: int, field: ScalarField = RATIONALS) -> Matrix:
    return from_domain_matrix(DomainMatrix.eye(n, field.domain), field)


# ---------------------------------------------------------------------------
# Fraction-free elimination over QQ[x]
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LinearSolution:
    """
    Result of fraction_free_solve.

    Attributes:
        consistent: Whether A x = b has a solution over the fraction field
        rank: Rank of A over the fraction field
        solution: One exact solution when consistent
        certificate: (original row index, nonzero residual) when inconsistent
    """
    consistent: bool
    rank: int
    solution: Optional[Tuple[FracElement, ...]] = None
    certificate: Optional[Tuple[int, PolyElement]] = None


def _common_ring(matrix: Sequence[Sequence[Any]]) -> PolyRing:
    ring = None
    for row in matrix:
        for entry in row:
            if not isinstance(entry, PolyElement):
                raise DimensionError(f"expected polynomial entries, got {type(entry).__name__}")
            if ring is None:
                ring = entry.ring
            elif entry.ring != ring:
                raise DimensionError("matrix entries live in different polynomial rings")
    if ring is None:
        raise DimensionError("empty polynomial system")
    return ring


def bareiss_echelon(matrix: Sequence[Sequence[PolyElement]], elimination_cols: int
                    ) -> Tuple[Matrix, List[int], List[int]]:
    """
    Fraction-free row echelon form.

    Every entry below the processed rows stays a polynomial: the update
    divides exactly by the previous pivot.

    Args:
        matrix: Polynomial rows (possibly augmented)
        elimination_cols: Number of leading columns allowed as pivot columns

    Returns:
        Tuple of (echelon matrix, pivot columns, original row order)
    """
    M = [list(row) for row in matrix]
    nrows = len(M)
    width = len(M[0]) if M else 0
    ring = _common_ring(M)
    order = list(range(nrows))
    pivots: List[int] = []
    previous = ring.one
    r = 0
    for c in range(elimination_cols):
        if r == nrows:
            break
        pivot = next((i for i in range(r, nrows) if M[i][c]), None)
        if pivot is None:
            continue
        if pivot != r:
            M[r], M[pivot] = M[pivot], M[r]
            order[r], order[pivot] = order[pivot], order[r]
        head = M[r][c]
        for i in range(r + 1, nrows):
            below = M[i][c]
            for j in range(c + 1, width):
                M[i][j] = (head * M[i][j] - below * M[r][j]).exquo(previous)
            M[i][c] = ring.zero
        previous = head
        pivots.append(c)
        r += 1
    logger.debug("bareiss %dx%d: rank %d", nrows, width, len(pivots))
    return M, pivots, order


def fraction_free_solve(A: Sequence[Sequence[PolyElement]], b: Sequence[PolyElement]) -> LinearSolution:
    """
    Solve A x = b over the fraction field of the coefficient ring.

    Args:
        A: Rectangular polynomial matrix
        b: Right-hand side, one polynomial per row

    Returns:
        LinearSolution; free variables are set to zero
    """
    nrows, ncols = _shape(A)
    if len(b) != nrows:
        raise DimensionError(f"right-hand side has {len(b)} entries, matrix has {nrows} rows")
    augmented = [list(row) + [value] for row, value in zip(A, b)]
    ring = _common_ring(augmented)
    field = fraction_field(ring)
    M, pivots, order = bareiss_echelon(augmented, ncols)
    r = len(pivots)
    for k in range(r, nrows):
        if M[k][ncols]:
            logger.debug("inconsistent system: residual in row %d", order[k])
            return LinearSolution(consistent=False, rank=r, certificate=(order[k], M[k][ncols]))
    x = [field.zero] * ncols
    for k in reversed(range(r)):
        c = pivots[k]
        acc = field.new(M[k][ncols])
        for j in range(c + 1, ncols):
            if M[k][j] and x[j]:
                acc -= field.new(M[k][j]) * x[j]
        x[c] = acc / field.new(M[k][c])
    return LinearSolution(consistent=True, rank=r, solution=tuple(x))


def clear_denominators(vector: Sequence[FracElement]) -> List[PolyElement]:
    """Multiply a rational-function vector by the lcm of its denominators."""
    ring = vector[0].field.ring
    common = ring.one
    for entry in vector:
        if entry:
            common = common.lcm(entry.denom)
    return [entry.numer * common.exquo(entry.denom) if entry else ring.zero for entry in vector]


def primitive(vector: Sequence[PolyElement]) -> List[PolyElement]:
    """
    Divide a polynomial vector by the gcd of its entries and make the first
    nonzero entry have leading coefficient 1.
    """
    nonzero = [entry for entry in vector if entry]
    if not nonzero:
        return list(vector)
    content = nonzero[0]
    for entry in nonzero[1:]:
        content = content.gcd(entry)
    reduced = [entry.exquo(content) if entry else entry for entry in vector]
    lead = next(entry for entry in reduced if entry).LC
    return [entry.quo_ground(lead) for entry in reduced]


def polynomial_nullspace(matrix: Sequence[Sequence[PolyElement]], ncols: Optional[int] = None
                         ) -> List[List[PolyElement]]:
    """
    Kernel basis of a polynomial matrix over the fraction field, returned as
    primitive polynomial vectors.
    """
    nrows, width = _shape(matrix, ncols)
    ring = _common_ring(matrix)
    field = fraction_field(ring)
    M, pivots, _ = bareiss_echelon(matrix, width)
    free = [c for c in range(width) if c not in pivots]
    basis = []
    for f in free:
        x = [field.zero] * width
        x[f] = field.one
        for k in reversed(range(len(pivots))):
            c = pivots[k]
            acc = field.zero
            for j in range(c + 1, width):
                if M[k][j] and x[j]:
                    acc -= field.new(M[k][j]) * x[j]
            x[c] = acc / field.new(M[k][c])
        basis.append(primitive(clear_denominators(x)))
    return basis
