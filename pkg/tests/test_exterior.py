"""Tests for forms, multivectors and their calculus."""

from fractions import Fraction

import pytest

from poisson_pairs.errors import DegenerateInputError, DimensionError, KindError
from poisson_pairs.exterior import (
    DiffForm,
    MultiVector,
    VolumeForm,
    bivector_from_form,
    contract,
    contraction_preimage,
    exterior_derivative,
    form_from_bivector,
    hamiltonian_field,
    interior_product,
    one_form,
    representative_from_kernel_data,
    skew_matrix,
    sort_with_sign,
    two_form_rank,
    vector_field,
    wedge,
    wedge_power,
)
from poisson_pairs.ring import coordinate_ring


def random_poly(ring, rng, terms=3):
    p = ring.zero
    for _ in range(terms):
        monomial = ring.one
        for x in ring.gens:
            monomial *= x ** rng.randint(0, 2)
        p += rng.randint(-3, 3) * monomial
    return p


def random_form(dim, degree, rng):
    ring = coordinate_ring(dim)
    terms = []
    for _ in range(3):
        indices = rng.sample(range(dim), degree)
        terms.append((indices, random_poly(ring, rng)))
    return DiffForm.from_terms(dim, degree, terms)


def test_sort_with_sign():
    assert sort_with_sign((2, 0, 1)) == ((0, 1, 2), 1)
    assert sort_with_sign((1, 0)) == ((0, 1), -1)
    assert sort_with_sign((1, 1)) == (None, 0)


def test_from_terms_normalizes_order_and_cancels():
    form = DiffForm.from_terms(3, 2, [((1, 0), Fraction(1)), ((0, 1), Fraction(1)), ((2, 1), Fraction(2))])
    assert form.components == {(1, 2): Fraction(-2)}


def test_rendering_of_forms_and_fields():
    ring = coordinate_ring(3)
    x1, _, x3 = ring.gens
    form = DiffForm(3, 2, {(0, 1): -x3, (1, 2): 2 * x1 + ring.one})
    assert str(form) == "-x3*dx1^dx2 + (2*x1 + 1)*dx2^dx3"
    assert str(vector_field(3, [Fraction(10), Fraction(0), Fraction(-1)])) == "10*d/dx1 - d/dx3"
    assert str(DiffForm.zero(3, 1)) == "0"


def test_wedge_is_graded_commutative(rng):
    for _ in range(5):
        a = random_form(5, 1, rng)
        b = random_form(5, 2, rng)
        c = random_form(5, 1, rng)
        assert wedge(a, b) == wedge(b, a)
        assert wedge(a, c) == -wedge(c, a)


def test_wedge_is_associative(rng):
    for _ in range(5):
        a, b, c = (random_form(6, k, rng) for k in (1, 2, 2))
        assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))


def test_wedge_past_top_degree_is_zero():
    a = one_form(2, [Fraction(1), Fraction(2)])
    b = DiffForm(2, 2, {(0, 1): Fraction(1)})
    assert not wedge(a, b)


def test_wedge_rejects_mixed_kinds():
    with pytest.raises(KindError):
        wedge(one_form(3, [1, 0, 0]), vector_field(3, [1, 0, 0]))


@pytest.mark.parametrize("degree", [0, 1, 2, 3])
def test_d_squared_vanishes(rng, degree):
    for _ in range(5):
        form = random_form(4, degree, rng) if degree else DiffForm(4, 0, {(): random_poly(coordinate_ring(4), rng)})
        assert not exterior_derivative(exterior_derivative(form))


def test_d_of_top_form_is_empty():
    ring = coordinate_ring(3)
    top = DiffForm(3, 3, {(0, 1, 2): ring.gens[0]})
    result = exterior_derivative(top)
    assert result.degree == 4 and not result


def test_leibniz_rule(rng):
    a = random_form(4, 1, rng)
    b = random_form(4, 2, rng)
    assert exterior_derivative(wedge(a, b)) == wedge(exterior_derivative(a), b) - wedge(a, exterior_derivative(b))


def test_interior_product_of_coordinate_field():
    ring = coordinate_ring(3)
    x1 = ring.gens[0]
    form = DiffForm(3, 2, {(0, 1): x1})
    v = vector_field(3, [ring.zero, ring.one, ring.zero])
    assert interior_product(v, form) == DiffForm(3, 1, {(0,): -x1})


@pytest.mark.parametrize("m", range(3, 9))
def test_bivector_form_round_trip(rng, m):
    ring = coordinate_ring(m)
    data = {}
    for _ in range(4):
        i, j = sorted(rng.sample(range(m), 2))
        data[(i, j)] = random_poly(ring, rng)
    bivector = MultiVector(m, 2, data)
    volume = VolumeForm(m, Fraction(rng.choice([1, 2, -3])))
    assert bivector_from_form(form_from_bivector(bivector, volume), volume) == bivector


def test_bivector_pairing_against_volume():
    # Lambda(a, b) vol = a ^ b ^ omega
    ring = coordinate_ring(3)
    x1, x2, x3 = ring.gens
    bivector = MultiVector(3, 2, {(0, 1): x3, (0, 2): -x2, (1, 2): x1})
    omega = form_from_bivector(bivector, VolumeForm(3))
    for i in range(3):
        for j in range(3):
            a = DiffForm(3, 1, {(i,): ring.one})
            b = DiffForm(3, 1, {(j,): ring.one})
            top = wedge(wedge(a, b), omega)
            value = contract(bivector, a).components.get((j,), ring.zero)
            assert top.components.get((0, 1, 2), ring.zero) == value


def test_hamiltonian_field_matches_contraction():
    ring = coordinate_ring(3)
    x1, x2, x3 = ring.gens
    bivector = MultiVector(3, 2, {(0, 1): x3, (1, 2): x1})
    volume = VolumeForm(3)
    omega = form_from_bivector(bivector, volume)
    alpha = DiffForm(3, 1, {(0,): x2, (2,): ring.one})
    assert hamiltonian_field(alpha, omega, volume) == contract(bivector, alpha)


def test_contraction_preimage_inverts_interior_product():
    ring = coordinate_ring(3)
    x1, x2, _ = ring.gens
    volume = VolumeForm(3, Fraction(2))
    v = vector_field(3, [x1, ring.zero, x2])
    form = interior_product(v, volume.as_form())
    assert contraction_preimage(form, volume) == v


def test_volume_form_must_be_nonzero():
    with pytest.raises(DegenerateInputError):
        VolumeForm(3, Fraction(0))


def test_skew_matrix():
    beta = DiffForm(3, 2, {(0, 2): Fraction(5)})
    assert skew_matrix(beta) == [[0, 0, 5], [0, 0, 0], [-5, 0, 0]]
    with pytest.raises(DimensionError):
        skew_matrix(one_form(3, [1, 2, 3]))


def test_two_form_rank_at_point():
    ring = coordinate_ring(3)
    x1, x2, _ = ring.gens
    beta = DiffForm(3, 2, {(0, 1): x1, (1, 2): x2})
    assert two_form_rank(beta, (Fraction(1), Fraction(0), Fraction(0))) == 2
    assert two_form_rank(beta, (Fraction(0), Fraction(0), Fraction(7))) == 0


def test_wedge_power_of_symplectic_form():
    beta = DiffForm(4, 2, {(0, 1): Fraction(1), (2, 3): Fraction(1)})
    assert wedge_power(beta, 2).components == {(0, 1, 2, 3): Fraction(2)}


def test_representative_from_kernel_data():
    alpha = one_form(3, [Fraction(0), Fraction(0), Fraction(1)])
    beta = DiffForm(3, 2, {(0, 1): Fraction(1)})
    omega, top = representative_from_kernel_data([alpha], beta)
    assert omega == alpha
    assert top.components == {(0, 1, 2): Fraction(1)}
    with pytest.raises(DegenerateInputError):
        representative_from_kernel_data([alpha], DiffForm(3, 2, {(0, 2): Fraction(1)}))
