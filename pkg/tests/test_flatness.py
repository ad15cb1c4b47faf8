"""Tests for flatness verdicts and the dimension-3 classifiers."""

from fractions import Fraction

import pytest

from poisson_pairs.catalog import (
    diagonal_extension_pencil,
    five_dim_lie_pair,
    plane_extension,
)
from poisson_pairs.errors import DimensionError, InapplicableError
from poisson_pairs.exterior import DiffForm, exterior_derivative
from poisson_pairs.flatness import (
    casimir_proportionality_test,
    classify_lie_3d,
    classify_linear_3d,
    curvature_3d,
    flatness_test,
    image_constraint_holds,
    linear_3d_pencil,
    linear_hamiltonian_rank,
    normalize_plane_extension,
    solve_lambda,
)
from poisson_pairs.liealg import LieAlgebra, trace_form
from poisson_pairs.models import FlatnessReason, Verdict
from poisson_pairs.pencil import Pencil
from poisson_pairs.ring import coordinate_ring, format_poly

GRID = [(Fraction(b2), Fraction(b3)) for b2 in range(-2, 3) for b3 in range(-2, 3) if (b2, b3) != (0, 0)]


def test_five_dim_pair_has_no_lambda():
    construction = five_dim_lie_pair()
    report = flatness_test(construction.pencil, construction.base_point)
    assert report.verdict is Verdict.NON_FLAT
    assert report.reason is FlatnessReason.NO_LAMBDA
    assert report.lam is None


def test_diagonal_extension_is_flat():
    construction = diagonal_extension_pencil()
    report = flatness_test(construction.pencil, construction.base_point)
    assert report.verdict is Verdict.FLAT
    assert report.reason is FlatnessReason.LAMBDA_FOUND
    assert report.lam is not None


@pytest.mark.parametrize("a", [1, 2])
def test_shifted_diagonal_extension_is_not_flat(a):
    construction = diagonal_extension_pencil()
    shifted = construction.pencil.shifted(a, construction.base_point)
    assert flatness_test(shifted, construction.base_point).verdict is Verdict.NON_FLAT


def test_even_dimension_is_inapplicable():
    L = LieAlgebra(4, {(0, 1): {1: 1}})
    p = Pencil.linear_pair(L, DiffForm(4, 2, {(2, 3): Fraction(1)}))
    report = flatness_test(p, [0, 0, 0, 0])
    assert report.verdict is Verdict.INAPPLICABLE
    assert report.reason is FlatnessReason.PRECONDITIONS_FAILED


def test_incompatible_pencil_is_inapplicable():
    p = Pencil.linear_pair(plane_extension(1, 0, 0, 1), DiffForm(3, 2, {(1, 2): Fraction(1)}))
    report = flatness_test(p, [1, 1, 1])
    assert report.verdict is Verdict.INAPPLICABLE
    assert "compatible" in report.detail


def test_non_generic_point_is_inapplicable():
    construction = diagonal_extension_pencil()
    report = flatness_test(construction.pencil, [0, 0, 0, 0, 0])
    assert report.verdict is Verdict.INAPPLICABLE
    assert "generic" in report.detail


def test_lambda_does_not_depend_on_volume_scale():
    p = diagonal_extension_pencil().pencil
    plain = solve_lambda(p.omega, p.omega1)
    scaled = solve_lambda(p.omega.scaled(Fraction(3)), p.omega1.scaled(Fraction(3)))
    assert plain.found and scaled.found
    assert plain.lam == scaled.lam


def test_no_lambda_survives_rescaling():
    p = five_dim_lie_pair().pencil
    assert not solve_lambda(p.omega.scaled(Fraction(-2)), p.omega1.scaled(Fraction(-2))).found


def test_curvature_of_flat_and_curved_linear_pairs():
    L = plane_extension(1, 0, 0, 2)
    assert curvature_3d(linear_3d_pencil(L, 1, 0)).is_zero()
    assert not curvature_3d(linear_3d_pencil(L, 1, 1)).is_zero()


@pytest.mark.parametrize("coefficients", [(1, 0, 0, 2), (1, 0, 1, 2), (2, 1, 0, 1), (1, 0, 1, 1), (3, -1, 2, -1)])
def test_linear_classification_matches_curvature(coefficients):
    L = plane_extension(*coefficients)
    for b2, b3 in GRID:
        classification = classify_linear_3d(L, b2, b3)
        assert classification.flat is (classification.quadratic == 0)
        if not classification.generic_somewhere:
            continue
        flat = curvature_3d(linear_3d_pencil(L, b2, b3)).is_zero()
        assert classification.flat is flat, (b2, b3)


def test_scalar_action_gives_only_flat_pairs():
    classification = classify_linear_3d(plane_extension(1, 0, 0, 1), 1, 1)
    assert not classification.nonflat_choice_exists
    assert classification.flat


def test_normalization_moves_trace_to_first_vector():
    L = LieAlgebra(3, {(1, 0): {0: 1}, (1, 2): {2: 1}})
    normalized = normalize_plane_extension(L)
    tau = trace_form(normalized).coords
    assert tau[0] and not tau[1] and not tau[2]


def test_unimodular_algebra_cannot_be_normalized():
    with pytest.raises(InapplicableError):
        normalize_plane_extension(plane_extension(0, 1, 1, 0))


def test_lie_classification_normal_form():
    result = classify_lie_3d(plane_extension(1, 0, 1, 2), plane_extension(0, 1, 1, 0))
    assert format_poly(result.P) == "x2^2 - x2*x3 - 2*x3^2"
    assert format_poly(result.Q) == "x2^2 - x3^2"
    assert result.coefficients["b"] == 1
    assert result.proportional is False
    assert result.generic_nonflat


def test_lie_classification_with_nilpotent_partner():
    result = classify_lie_3d(plane_extension(1, 0, 1, 2), plane_extension(0, 1, 0, 0))
    assert result.coefficients["b"] == 0
    assert result.eigenvector_nonflat is True
    assert result.generic_nonflat


def test_lie_classification_of_proportional_brackets():
    result = classify_lie_3d(plane_extension(1, 0, 1, 2), plane_extension(2, 0, 2, 4))
    assert not result.generic_nonflat
    assert result.reason == "proportional-brackets"


def test_lie_classification_with_distinct_unimodular_ideals():
    L1 = LieAlgebra(3, {(1, 0): {0: 1}, (1, 2): {2: 1}})
    result = classify_lie_3d(plane_extension(1, 0, 0, 1), L1)
    assert result.reason == "distinct-unimodular-ideals"
    assert not result.generic_nonflat


def test_lie_classification_of_unimodular_pair():
    with pytest.raises(InapplicableError) as info:
        classify_lie_3d(plane_extension(0, 1, 0, 0), plane_extension(0, 1, 1, 0))
    assert info.value.reason == "both-unimodular"


def test_lie_classification_needs_dimension_3():
    with pytest.raises(DimensionError):
        classify_lie_3d(LieAlgebra(5), LieAlgebra(5))


def test_image_constraint_of_flat_pair():
    p = linear_3d_pencil(plane_extension(1, 0, 0, 2), 1, 0)
    assert image_constraint_holds(p, [1, 1, 1])


def test_linear_hamiltonian_rank():
    L = plane_extension(1, 0, 0, 2)
    assert linear_hamiltonian_rank(L, [1, 0, 0]) == 2
    assert linear_hamiltonian_rank(L, [0, 1, 0]) == 1


def test_casimir_proportionality_agrees_with_verdicts():
    construction = diagonal_extension_pencil()
    flat = casimir_proportionality_test(construction.pencil, construction.base_point)
    assert flat.applicable and flat.flat

    shifted = construction.pencil.shifted(1, construction.base_point)
    curved = casimir_proportionality_test(shifted, construction.base_point)
    assert curved.applicable and curved.flat is False
    assert curved.witness is not None


def test_casimir_proportionality_needs_dimension_5():
    p = linear_3d_pencil(plane_extension(1, 0, 0, 2), 1, 0)
    assert not casimir_proportionality_test(p, [1, 1, 1]).applicable


# (a22, a23, a32, a33, b) with [e1,e2]_1 = e3, [e1,e3]_1 = b e2; flat exactly when P is a multiple of Q
NORMAL_FORMS = [
    ((1, 0, 0, 1, 1), True),
    ((2, 0, 0, 2, -1), True),
    ((1, 0, 0, 1, 0), True),
    (("1/2", 0, 0, "1/2", 3), True),
    ((1, 1, 1, 1, 1), True),
    ((1, 2, 2, 1, 1), True),
    ((2, 1, 2, 2, 2), True),
    ((2, -1, 1, 2, -1), True),
    ((1, 3, -3, 1, -1), True),
    ((1, 0, 0, 3, 0), True),
    ((1, 0, 1, 2, 0), False),
    ((0, 0, 1, 1, 0), False),
    ((2, 0, -1, 1, 0), False),
    ((1, 0, 1, 2, 1), False),
    ((3, 1, 0, 1, 1), False),
    ((1, 0, 0, 2, 1), False),
    ((1, 2, 0, 3, -1), False),
    ((0, 1, -1, 2, -1), False),
    ((5, 0, 0, -2, 2), False),
    ((1, 1, 0, 0, 1), False),
]


@pytest.mark.parametrize("values, flat", NORMAL_FORMS)
def test_eigenvector_criterion_agrees_with_proportionality(values, flat):
    a22, a23, a32, a33, b = (Fraction(v) for v in values)
    L, L1 = plane_extension(a22, a23, a32, a33), plane_extension(0, 1, b, 0)
    result = classify_lie_3d(L, L1)
    assert result.reason == "normal-form"
    assert result.coefficients["b"] == b
    assert result.proportional is flat
    assert result.eigenvector_nonflat is (not flat)
    assert result.generic_nonflat is (not flat)
    assert curvature_3d(Pencil.lie_pair(L, L1)).is_zero() is flat


@pytest.mark.parametrize("pencil", [
    diagonal_extension_pencil().pencil,
    linear_3d_pencil(plane_extension(1, 0, 0, 2), 1, 1),
    linear_3d_pencil(plane_extension(1, 0, 0, 2), 1, 0),
], ids=["diagonal-extension", "curved-plane", "flat-plane"])
def test_curvature_survives_rescaling_by_a_function(pencil, rng):
    ring = coordinate_ring(pencil.dim)
    x1 = ring.gens[0]
    plain = solve_lambda(pencil.omega, pencil.omega1)
    for factor in [ring.one + x1 ** 2] + [ring.one + rng.randint(1, 5) * x1 ** 2 for _ in range(3)]:
        scaled = solve_lambda(pencil.omega.scaled(factor), pencil.omega1.scaled(factor))
        assert plain.found and scaled.found
        assert scaled.lam != plain.lam
        assert (exterior_derivative(scaled.lam) - exterior_derivative(plain.lam)).is_zero()
