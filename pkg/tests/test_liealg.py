"""Tests for structure-constant algebras and generic couples."""

from fractions import Fraction
from math import factorial, prod

import pytest

from poisson_pairs.catalog import (
    diagonal_extension_algebra,
    paired_algebra,
    paired_couple,
    paired_degeneracy,
    plane_extension,
)
from poisson_pairs.constructions import (
    affine_algebra,
    character_extension,
    deformed_bracket,
    elementary_endomorphism,
    secondary_algebra,
    secondary_applicable,
    special_affine,
    truncated_algebra,
)
from poisson_pairs.errors import (
    DimensionError,
    DomainError,
    PreconditionError,
    SingularMatrixError,
)
from poisson_pairs.exterior import (
    DiffForm,
    VolumeForm,
    contraction_preimage,
    exterior_derivative,
    form_from_bivector,
    wedge,
    wedge_power,
)
from poisson_pairs.liealg import (
    AlgebraElement,
    DualElement,
    LieAlgebra,
    bracket,
    ce_d,
    center,
    change_of_basis,
    contact_check,
    degeneracy_polynomial,
    derived_ideal,
    element_from_labels,
    generic_couple_check,
    hamiltonian_subalgebra,
    is_cocycle,
    is_ideal,
    is_unimodular,
    jacobi_check,
    lie_poisson,
    linear_combination,
    modular_vector,
    parameter_forms,
    trace_form,
    unimodular_ideal,
)
from poisson_pairs.models import SubalgebraKind
from poisson_pairs.ring import parameter_ring, poly_constant


def heisenberg():
    return LieAlgebra(3, {(0, 1): {2: 1}}, name="heisenberg")


def test_reversed_pairs_are_normalized():
    L = LieAlgebra(3, {(1, 0): {2: 1}})
    assert L.constants == {(0, 1): {2: Fraction(-1)}}
    assert L.structure_constant(1, 0, 2) == 1


def test_invalid_constants_are_rejected():
    with pytest.raises(DomainError):
        LieAlgebra(3, {(1, 1): {0: 1}})
    with pytest.raises(DimensionError):
        LieAlgebra(3, {(0, 3): {0: 1}})
    with pytest.raises(DimensionError):
        LieAlgebra(3, {(0, 1): {5: 1}})


def test_bracket_is_bilinear_and_skew():
    L = truncated_algebra(5)
    a = AlgebraElement(tuple(Fraction(x) for x in (1, 2, 0, 0, 0)))
    b = AlgebraElement(tuple(Fraction(x) for x in (0, 1, 1, 0, 0)))
    assert bracket(L, a, b) == -bracket(L, b, a)
    # [e1, e2] = e2, [e1, e3] = 2 e3, [e2, e3] = e4
    assert bracket(L, a, b).coords == (0, 1, 2, 2, 0)


def test_truncated_satisfies_jacobi():
    for m in range(3, 8):
        assert jacobi_check(truncated_algebra(m)).ok


def test_jacobi_violation_is_reported():
    L = LieAlgebra(3, {(0, 1): {1: 1}, (0, 2): {2: 1}, (1, 2): {0: 1}})
    report = jacobi_check(L)
    assert not report.ok
    (violation,) = report.violations
    assert (violation.i, violation.j, violation.k) == (0, 1, 2)
    assert violation.defect == (2, 0, 0)


def test_ce_differential_of_truncated_dual():
    L = truncated_algebra(5)
    de5 = ce_d(L, DiffForm(5, 1, {(4,): Fraction(1)}))
    assert str(de5) == "-4*dx1^dx5 - 2*dx2^dx4"


@pytest.mark.parametrize("degree", [1, 2])
def test_ce_differential_squares_to_zero(rng, degree):
    L = truncated_algebra(6)
    for _ in range(5):
        terms = [(rng.sample(range(6), degree), Fraction(rng.randint(-3, 3))) for _ in range(3)]
        form = DiffForm.from_terms(6, degree, terms)
        assert is_cocycle(L, ce_d(L, form))


def test_ce_differential_rejects_polynomial_coefficients(ring3):
    with pytest.raises(DomainError):
        ce_d(heisenberg(), DiffForm(3, 1, {(0,): ring3.gens[0]}))


def test_contact_forms_on_heisenberg():
    L = heisenberg()
    assert contact_check(L, DualElement((Fraction(0), Fraction(0), Fraction(1))))
    assert not contact_check(L, DualElement((Fraction(1), Fraction(0), Fraction(0))))
    with pytest.raises(DimensionError):
        contact_check(LieAlgebra(2, {(0, 1): {0: 1}}), DualElement((Fraction(1), Fraction(0))))


def test_lie_poisson_bivector():
    assert str(lie_poisson(heisenberg())) == "x3*d/dx1^d/dx2"


def test_modular_vectors():
    assert str(modular_vector(truncated_algebra(5))) == "10*d/dx1"
    assert str(modular_vector(diagonal_extension_algebra())) == "d/dx1"
    assert is_unimodular(heisenberg())
    assert not is_unimodular(truncated_algebra(4))


@pytest.mark.parametrize("algebra", [
    truncated_algebra(5),
    diagonal_extension_algebra(),
    plane_extension(1, 0, 1, 2),
    heisenberg(),
])
def test_modular_vector_is_divergence_of_lie_poisson(algebra):
    volume = VolumeForm(algebra.dim)
    omega = form_from_bivector(lie_poisson(algebra), volume)
    divergence = contraction_preimage(exterior_derivative(omega), volume)
    assert divergence.to_rational() == modular_vector(algebra)


def test_unimodular_ideal_is_kernel_of_trace_form():
    L = diagonal_extension_algebra()
    ideal = unimodular_ideal(L)
    assert len(ideal) == 4
    tau = trace_form(L)
    assert all(tau.pair(v) == 0 for v in ideal)


def test_center_and_derived_ideal_of_heisenberg():
    L = heisenberg()
    (z,) = center(L)
    assert z.coords[0] == 0 and z.coords[1] == 0 and z.coords[2]
    derived = derived_ideal(L)
    assert len(derived) == 1
    assert is_ideal(L, derived)


def test_linear_combination_scales_brackets():
    L = plane_extension(1, 0, 0, 1)
    combined = linear_combination(L, heisenberg(), 2, -1)
    assert combined.structure_constant(0, 1, 1) == 2
    assert combined.structure_constant(0, 1, 2) == -1
    with pytest.raises(DimensionError):
        linear_combination(L, truncated_algebra(4), 1, 1)


def test_change_of_basis():
    L = plane_extension(1, 0, 0, 1)
    T = [[Fraction(2) if r == c else Fraction(0) for c in range(3)] for r in range(3)]
    assert change_of_basis(L, T).constants == {(0, 1): {1: Fraction(2)}, (0, 2): {2: Fraction(2)}}
    swap = [[0, 0, 1], [0, 1, 0], [1, 0, 0]]
    assert change_of_basis(L, swap).constants == {(0, 2): {0: Fraction(-1)}, (1, 2): {1: Fraction(-1)}}
    with pytest.raises(SingularMatrixError):
        change_of_basis(L, [[1, 0, 0], [0, 0, 0], [0, 0, 1]])


def test_element_from_labels():
    L = truncated_algebra(5)
    assert element_from_labels(L, {"e5": 1, "e4": 1}).coords == (0, 0, 0, 1, 1)
    with pytest.raises(DomainError):
        element_from_labels(L, {"f1": 1})


def test_hamiltonian_subalgebra_of_contact_form():
    sub = hamiltonian_subalgebra(heisenberg(), DualElement((Fraction(0), Fraction(0), Fraction(1))))
    assert sub.kind is SubalgebraKind.ZERO
    assert sub.abelian is None


def test_hamiltonian_subalgebra_two_dimensional():
    alpha = DualElement((Fraction(0), Fraction(1), Fraction(0)))
    sub = hamiltonian_subalgebra(plane_extension(1, 0, 0, 1), alpha)
    assert sub.kind is SubalgebraKind.TWO_DIMENSIONAL
    assert sub.kernel.coords[:2] == (0, 0)
    assert sub.eigenvalue == 1
    assert sub.abelian is False

    abelian = hamiltonian_subalgebra(plane_extension(1, 0, 0, 0), alpha)
    assert abelian.eigenvalue == 0
    assert abelian.abelian is True


def test_hamiltonian_subalgebra_needs_nondegenerate_differential():
    with pytest.raises(PreconditionError) as info:
        hamiltonian_subalgebra(plane_extension(1, 0, 0, 0), DualElement((Fraction(0), Fraction(0), Fraction(1))))
    assert info.value.reason == "degenerate-differential"


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("a", [Fraction(-1), Fraction(2)])
def test_degeneracy_matches_closed_form(n, a):
    L, alpha, beta = paired_couple(n, a)
    assert degeneracy_polynomial(L, alpha, beta) == paired_degeneracy(n, a)


def test_paired_degeneracy_value(tring):
    t = tring.gens[0]
    assert paired_degeneracy(3, -1) == 12 * t ** 3 + 18 * t ** 2 + 6 * t


@pytest.mark.parametrize("a, generic", [
    (Fraction(-1), True),
    (Fraction(1, 2), True),
    (Fraction(1), False),
])
def test_paired_couple_genericity(a, generic):
    report = generic_couple_check(*paired_couple(3, a))
    assert report.generic is generic
    if generic:
        assert report.pair_generic
    else:
        assert report.reason is not None


def test_generic_couple_needs_odd_dimension():
    L = LieAlgebra(2, {(0, 1): {0: 1}})
    one = DualElement((Fraction(1), Fraction(0)))
    with pytest.raises(DimensionError):
        generic_couple_check(L, one, one)


def test_ad_matrix_columns_hold_brackets():
    M = truncated_algebra(5).ad_matrix(1)
    assert M[1][0] == -1
    assert M[3][2] == 1
    assert M[4][3] == 2
    assert sum(1 for row in M for v in row if v) == 3


CATALOG = {
    "truncated3": truncated_algebra(3),
    "truncated5": truncated_algebra(5),
    "truncated7": truncated_algebra(7),
    "diagonal-extension": diagonal_extension_algebra(),
    "paired2": paired_algebra(2, -1),
    "paired3": paired_algebra(3, 2),
    "paired4": paired_algebra(4, Fraction(1, 2)),
    "affine2": affine_algebra(2),
    "special-affine2": special_affine(2),
    "character-extension2": character_extension(2, Fraction(1)),
    "secondary-truncated3": secondary_algebra(truncated_algebra(3)),
}

UNIMODULAR = {
    "heisenberg": heisenberg(),
    "paired2": paired_algebra(2, -1),
    "paired3": paired_algebra(3, -1),
    "paired4": paired_algebra(4, -1),
    "special-affine2": special_affine(2),
    "character-extension2": character_extension(2, Fraction(2)),
    "deformed-truncated5": deformed_bracket(truncated_algebra(5), elementary_endomorphism(5, 2, 4)),
}


def _random_change_of_basis(L, rng):
    while True:
        T = [[Fraction(rng.randint(-2, 2)) for _ in range(L.dim)] for _ in range(L.dim)]
        try:
            return change_of_basis(L, T)
        except SingularMatrixError:
            continue


@pytest.mark.parametrize("name", CATALOG)
def test_modular_vector_identity_survives_changes_of_basis(name, rng):
    for _ in range(25):
        L = _random_change_of_basis(CATALOG[name], rng)
        volume = VolumeForm(L.dim)
        omega = form_from_bivector(lie_poisson(L), volume)
        divergence = contraction_preimage(exterior_derivative(omega), volume)
        assert divergence.to_rational() == modular_vector(L)


def test_two_dimensional_subalgebras_of_unimodular_algebras_are_not_abelian(rng):
    two_dimensional = 0
    for name, L in UNIMODULAR.items():
        assert is_unimodular(L), name
        functionals = [DualElement.basis(L.dim, k) for k in range(L.dim)]
        functionals += [DualElement(tuple(Fraction(rng.randint(-3, 3)) for _ in range(L.dim))) for _ in range(25)]
        if name.startswith("paired"):
            functionals.append(paired_couple((L.dim + 1) // 2, -1).alpha)
        for alpha in functionals:
            try:
                sub = hamiltonian_subalgebra(L, alpha)
            except PreconditionError as e:
                assert e.reason == "degenerate-differential"
                continue
            if sub.kind is SubalgebraKind.TWO_DIMENSIONAL:
                two_dimensional += 1
                assert sub.abelian is False, (name, alpha.coords)
    assert two_dimensional


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("a", [Fraction(-1), Fraction(2), Fraction(1, 3)])
def test_paired_differential_power_closed_form(n, a):
    L, alpha, beta = paired_couple(n, a)
    _, differential = parameter_forms(L, alpha, beta)
    ring = parameter_ring()
    t = ring.gens[0]
    m = 2 * n - 1

    def factor(j):
        return ring.one + poly_constant(ring, j) * t

    terms = {tuple(range(m - 1)): poly_constant(ring, factorial(n - 1)) * prod(factor(j) for j in range(1, n))}
    for k in range(1, n):
        others = prod((factor(j) for j in range(1, n) if j != k), start=ring.one)
        terms[tuple(i for i in range(m) if i != 2 * k - 1)] = poly_constant(ring, factorial(n - 1) * a) * t * others
    assert (wedge_power(differential, n - 1) - DiffForm(m, m - 1, terms)).is_zero()


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("a", [Fraction(-1), Fraction(2), Fraction(1, 3)])
def test_paired_contact_volume_closed_form(n, a):
    L, _, beta = paired_couple(n, a)
    form = beta.to_form()
    top = wedge(form, wedge_power(ce_d(L, form), n - 1))
    value = top.components.get(tuple(range(L.dim)), Fraction(0))
    assert value == factorial(n - 1) * (1 - (n - 1) * a) * factorial(n - 1)
    assert contact_check(L, beta) is (a != Fraction(1, n - 1))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_reciprocal_of_n_minus_1_is_generic_but_excluded(n):
    couple = paired_couple(n, Fraction(1, n - 1))
    assert not degeneracy_polynomial(*couple)
    assert generic_couple_check(*couple).generic
    assert secondary_applicable(*couple) is False


@pytest.mark.parametrize("n", [3, 4])
def test_reciprocal_of_n_minus_2_is_not_generic(n):
    couple = paired_couple(n, Fraction(1, n - 2))
    report = generic_couple_check(*couple)
    assert not report.generic
    assert report.reason == "abelian-degenerate-subalgebra"
    assert secondary_applicable(*couple) is False
