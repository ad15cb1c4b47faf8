"""Tests for exact elimination over fields and polynomial rings."""

from fractions import Fraction

import pytest

from poisson_pairs.errors import DimensionError, SingularMatrixError
from poisson_pairs.linalg import (
    fraction_free_solve,
    identity,
    inverse,
    mat_mul,
    mat_vec,
    nullspace,
    polynomial_nullspace,
    primitive,
    rank,
    row_reduce,
    solve,
    trace,
)
from poisson_pairs.ring import ParameterField, QuotientField, coordinate_ring, format_poly


def F(*values):
    return [Fraction(v) for v in values]


def test_row_reduce_pivots():
    M, pivots = row_reduce([F(1, 2, 3), F(2, 4, 6), F(0, 1, 1)])
    assert pivots == [0, 1]
    assert M[0] == F(1, 0, 1)
    assert M[1] == F(0, 1, 1)


def test_rank_and_nullspace_agree(rng):
    for _ in range(10):
        rows = [[Fraction(rng.randint(-3, 3)) for _ in range(5)] for _ in range(3)]
        kernel = nullspace(rows)
        assert rank(rows) + len(kernel) == 5
        for vector in kernel:
            assert all(sum(a * b for a, b in zip(row, vector)) == 0 for row in rows)


def test_nullspace_of_empty_matrix_needs_width():
    with pytest.raises(DimensionError):
        nullspace([])
    assert len(nullspace([], ncols=3)) == 3


def test_solve_consistent_and_inconsistent():
    assert solve([F(1, 1), F(1, -1)], F(2, 0)) == (Fraction(1), Fraction(1))
    assert solve([F(1, 1), F(2, 2)], F(1, 3)) is None


def test_inverse_round_trip():
    A = [F(2, 1), F(1, 1)]
    assert mat_mul(A, inverse(A)) == identity(2)
    with pytest.raises(SingularMatrixError):
        inverse([F(1, 2), F(2, 4)])


def test_rank_over_parameter_field():
    K = ParameterField()
    t = K.parameter
    # singular only at t = 1, so generically invertible
    assert rank([[t, K.one], [K.one, t]], K) == 2


def test_rank_over_quotient_field(tring):
    t = tring.gens[0]
    K = QuotientField(t ** 2 - 2)
    r = K.root
    # rows (r, 2) and (1, r) are proportional since r^2 = 2
    assert rank([[r, K.convert(Fraction(2))], [K.one, r]], K) == 1


def test_fraction_free_solve(ring3):
    x1, x2, _ = ring3.gens
    result = fraction_free_solve([[x1, x2], [ring3.zero, x1]], [x1 * x2, x2 ** 2])
    assert result.consistent and result.rank == 2
    a, b = result.solution
    assert a * x1 + b * x2 == x1 * x2
    assert b * x1 == x2 ** 2


def test_fraction_free_solve_reports_inconsistency(ring3):
    x1, _, _ = ring3.gens
    result = fraction_free_solve([[x1], [x1]], [ring3.one, ring3.zero])
    assert not result.consistent
    assert result.certificate is not None


def test_polynomial_nullspace_is_primitive():
    ring = coordinate_ring(2)
    x1, x2 = ring.gens
    kernel = polynomial_nullspace([[x1, x2]])
    assert len(kernel) == 1
    assert [format_poly(v) for v in kernel[0]] == ["x2", "-x1"]


def test_primitive_removes_content():
    ring = coordinate_ring(2)
    x1, x2 = ring.gens
    assert primitive([2 * x1 * x2, 4 * x1]) == [x2, 2 * ring.one]


def test_nullspace_basis_has_one_in_free_column():
    assert nullspace([F(1, 2)]) == [(Fraction(-2), Fraction(1))]
    assert nullspace([F(1, 0, 3), F(0, 1, -1)]) == [(Fraction(-3), Fraction(1), Fraction(1))]
    assert nullspace([F(1, 0), F(0, 1)]) == []


def test_nullspace_over_quotient_field(tring):
    t = tring.gens[0]
    K = QuotientField(t ** 2 - 2)
    r = K.root
    (vector,) = nullspace([[r, K.convert(Fraction(2))], [K.one, r]], K, 2)
    assert vector == (-r, K.one)


def test_inverse_over_parameter_field():
    K = ParameterField()
    t = K.parameter
    A = [[t, K.one], [K.one, t]]
    assert mat_mul(A, inverse(A, K), K) == identity(2, K)


def test_inverse_over_quotient_field_detects_singularity(tring):
    t = tring.gens[0]
    K = QuotientField(t ** 2 - 2)
    r = K.root
    with pytest.raises(SingularMatrixError):
        inverse([[r, K.convert(Fraction(2))], [K.one, r]], K)


def test_mat_vec_and_trace():
    A = [F(1, 2), F(3, 4)]
    assert mat_vec(A, F(1, -1)) == F(-1, -1)
    assert trace(A) == Fraction(5)
    assert trace(identity(3)) == Fraction(3)
    with pytest.raises(DimensionError):
        mat_mul(A, [F(1, 2, 3)] * 3)
