"""Named worked instances: algebras, couples and pencils with known behaviour."""

from fractions import Fraction
from math import factorial
from typing import Any, NamedTuple, Optional, Sequence

from sympy.polys.rings import PolyElement

from .constructions import (
    character_extension,
    deformed_bracket,
    diagonal,
    elementary_endomorphism,
    killing_oneform,
    scalar_families,
    special_affine,
    truncated_algebra,
)
from .errors import DimensionError, DomainError
from .exterior import DiffForm
from .liealg import DualElement, LieAlgebra, ce_d
from .models import Construction, ScalarFamilies
from .pencil import Pencil
from .ring import parameter_ring, poly_constant, to_rational


class Couple(NamedTuple):
    """An algebra with two functionals on it."""
    algebra: LieAlgebra
    alpha: DualElement
    beta: DualElement


def dual_basis(dim: int, *indices: int, coefficients: Optional[Sequence[Any]] = None) -> DualElement:
    """sum of c_k e_k* over the given 1-based indices."""
    coords = [Fraction(0)] * dim
    weights = coefficients or [1] * len(indices)
    for index, weight in zip(indices, weights):
        coords[index - 1] += to_rational(weight)
    return DualElement(tuple(coords))


def five_dim_lie_pair() -> Construction:
    """Generic Lie pair on K^5 admitting no lambda; non-flat at (1, 1, 1, 0, 0)."""
    L = LieAlgebra(5, {
        (0, 3): {1: 1},
        (2, 3): {2: 1},
        (0, 4): {0: 1},
        (1, 4): {1: 1},
        (2, 4): {2: 1},
    }, name="five-dim")
    L1 = LieAlgebra(5, {
        (1, 3): {0: 1},
        (0, 4): {0: 1},
        (1, 4): {1: 1},
    }, name="five-dim-second")
    point = tuple(Fraction(x) for x in (1, 1, 1, 0, 0))
    return Construction(pencil=Pencil.lie_pair(L, L1), base_point=point,
                        provenance={"construction": "five-dim-lie-pair"})


def diagonal_extension_algebra() -> LieAlgebra:
    """[e1, e5] = e5, [e2, e3] = e3, [e2, e4] = -e4."""
    return LieAlgebra(5, {
        (0, 4): {4: 1},
        (1, 2): {2: 1},
        (1, 3): {3: -1},
    }, name="diagonal-extension")


def diagonal_extension_cocycle() -> DiffForm:
    """e1*^e2* + e3*^e4*."""
    return DiffForm(5, 2, {(0, 1): Fraction(1), (2, 3): Fraction(1)})


def diagonal_extension_pencil() -> Construction:
    """Linear pair flat at (0, 0, 1, 0, 1); its shifts by a*Lambda(p) are not."""
    pencil = Pencil.linear_pair(diagonal_extension_algebra(), diagonal_extension_cocycle())
    point = tuple(Fraction(x) for x in (0, 0, 1, 0, 1))
    return Construction(pencil=pencil, base_point=point,
                        provenance={"construction": "diagonal-extension"})


def plane_extension(a22: Any, a23: Any, a32: Any, a33: Any) -> LieAlgebra:
    """K acting on the abelian ideal K^2: [e1, e2] = a22 e2 + a23 e3, [e1, e3] = a32 e2 + a33 e3."""
    a22, a23, a32, a33 = (to_rational(x) for x in (a22, a23, a32, a33))
    return LieAlgebra(3, {(0, 1): {1: a22, 2: a23}, (0, 2): {1: a32, 2: a33}},
                      name=f"plane({a22}, {a23}, {a32}, {a33})")


def contact_plane_couple(a: Any, b: Any) -> Couple:
    """[e1, e2] = e3, [e1, e3] = a e2 + b e3 with alpha = e2*, beta = e3*."""
    L = plane_extension(0, 1, a, b)
    return Couple(L, dual_basis(3, 2), dual_basis(3, 3))


def paired_algebra(n: int, a: Any) -> LieAlgebra:
    """
    Dimension 2n-1: [e_{2j-1}, e_{2j}] = -e_{2j} and
    [e_{2j-1}, e_{2n-1}] = -a e_{2n-1} for j = 1..n-1.
    """
    if n < 2:
        raise DimensionError(f"paired algebras need n >= 2, got {n}")
    a = to_rational(a)
    m = 2 * n - 1
    constants = {}
    for j in range(n - 1):
        constants[(2 * j, 2 * j + 1)] = {2 * j + 1: Fraction(-1)}
        constants[(2 * j, m - 1)] = {m - 1: -a}
    return LieAlgebra(m, constants, name=f"paired({n}, a={a})")


def paired_couple(n: int, a: Any, weights: Optional[Sequence[Any]] = None) -> Couple:
    """
    alpha = sum e_{2j}*, beta = sum a_j e_{2j}* + e_{2n-1}* with distinct
    nonzero weights a_j (default a_j = j).
    """
    L = paired_algebra(n, a)
    weights = [to_rational(w) for w in (weights or range(1, n))]
    if len(weights) != n - 1 or len(set(weights)) != n - 1 or not all(weights):
        raise DomainError("weights must be n-1 distinct nonzero scalars")
    m = L.dim
    alpha = dual_basis(m, *[2 * j for j in range(1, n)])
    beta = dual_basis(m, *[2 * j for j in range(1, n)], m, coefficients=list(weights) + [1])
    return Couple(L, alpha, beta)


def paired_degeneracy(n: int, a: Any, weights: Optional[Sequence[Any]] = None) -> PolyElement:
    """Closed form (n-1)! (1 - (n-1) a) t prod(1 + a_j t) of the degeneracy polynomial."""
    ring = parameter_ring()
    t = ring.gens[0]
    a = to_rational(a)
    weights = [to_rational(w) for w in (weights or range(1, n))]
    value = poly_constant(ring, factorial(n - 1) * (1 - (n - 1) * a)) * t
    for w in weights:
        value *= ring.one + poly_constant(ring, w) * t
    return value


def truncated_pencil(m: int) -> Construction:
    """Linear pair (Lambda, d e_m*) on the truncated algebra, based at e_{m-1}*."""
    L = truncated_algebra(m)
    cocycle = ce_d(L, dual_basis(m, m).to_form())
    point = tuple(Fraction(1) if i == m - 2 else Fraction(0) for i in range(m))
    return Construction(pencil=Pencil.linear_pair(L, cocycle), base_point=point,
                        provenance={"construction": "truncated-pencil", "m": m})


def truncated_couple(m: int) -> Couple:
    """alpha = e_m*, beta = e_m* + e_{m-1}*."""
    return Couple(truncated_algebra(m), dual_basis(m, m), dual_basis(m, m, m - 1))


def nijenhuis_truncated_pair(m: int) -> Construction:
    """
    Lie pair of the truncated algebra and its deformation by e_n (x) e_m*,
    m = 2n - 1, based at the all-ones point.
    """
    if m < 5 or m % 2 == 0:
        raise DimensionError(f"expected an odd dimension of at least 5, got {m}")
    n = (m + 1) // 2
    L = truncated_algebra(m)
    deformed = deformed_bracket(L, elementary_endomorphism(m, n - 1, m - 1))
    point = tuple(Fraction(1) for _ in range(m))
    return Construction(pencil=Pencil.lie_pair(L, deformed), base_point=point,
                        provenance={"construction": "nijenhuis-truncated", "m": m})


def _affine_functional(n: int, eigenvalues: Sequence[Any], translation: Sequence[Any]) -> list:
    coords = list(killing_oneform(diagonal(eigenvalues), n).coords)
    for j, value in enumerate(translation):
        coords[n * n + j] += to_rational(value)
    return coords


def special_affine_couple(n: int, families: Optional[ScalarFamilies] = None, seed: int = 0) -> Couple:
    """
    alpha = kil(g, .) + tau and beta = kil(h, .) + mu restricted to sl + V,
    with g = diag(a), h = diag(b), tau = sum v_j*, mu = sum c_j v_j*.
    """
    families = families or scalar_families(n, seed=seed)
    alpha = _affine_functional(n, families.a, [1] * n)[1:]
    beta = _affine_functional(n, families.b, families.c)[1:]
    return Couple(special_affine(n), DualElement(tuple(alpha)), DualElement(tuple(beta)))


def character_extension_couple(n: int, a: Any, families: Optional[ScalarFamilies] = None,
                               seed: int = 0) -> Couple:
    """The same functionals on Aff(n) + K e, with e* added to beta."""
    families = families or scalar_families(n, seed=seed)
    alpha = _affine_functional(n, families.a, [1] * n) + [Fraction(0)]
    beta = _affine_functional(n, families.b, families.c) + [Fraction(1)]
    return Couple(character_extension(n, a), DualElement(tuple(alpha)), DualElement(tuple(beta)))
