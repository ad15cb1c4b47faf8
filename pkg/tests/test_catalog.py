"""Tests for the named worked instances."""

from fractions import Fraction

import pytest

from poisson_pairs.catalog import (
    character_extension_couple,
    contact_plane_couple,
    diagonal_extension_algebra,
    diagonal_extension_cocycle,
    dual_basis,
    five_dim_lie_pair,
    nijenhuis_truncated_pair,
    paired_algebra,
    paired_couple,
    special_affine_couple,
    truncated_couple,
    truncated_pencil,
)
from poisson_pairs.constructions import scalar_families
from poisson_pairs.errors import DimensionError, DomainError
from poisson_pairs.liealg import is_cocycle, jacobi_check
from poisson_pairs.pencil import compatibility_check


def test_dual_basis():
    assert dual_basis(5, 5, 4).coords == (0, 0, 0, 1, 1)
    assert dual_basis(3, 1, 3, coefficients=[2, Fraction(-1, 2)]).coords == (2, 0, Fraction(-1, 2))


def test_five_dim_representatives():
    p = five_dim_lie_pair().pencil
    assert str(p.omega1) == "x2*dx1^dx3^dx4 - x1*dx1^dx3^dx5 - x1*dx2^dx3^dx4"


def test_diagonal_extension_cocycle_is_closed():
    assert is_cocycle(diagonal_extension_algebra(), diagonal_extension_cocycle())


def test_contact_plane_couple():
    L, alpha, beta = contact_plane_couple(1, 0)
    assert L.bracket_basis(0, 2) == {1: 1}
    assert alpha.coords == (0, 1, 0)
    assert beta.coords == (0, 0, 1)


def test_paired_algebra_shape():
    L = paired_algebra(3, Fraction(-1))
    assert L.dim == 5
    assert L.bracket_basis(0, 1) == {1: -1}
    assert L.bracket_basis(2, 4) == {4: 1}
    assert jacobi_check(L).ok
    with pytest.raises(DimensionError):
        paired_algebra(1, 0)


def test_paired_couple_weights():
    _, alpha, beta = paired_couple(3, 0, weights=[2, 5])
    assert alpha.coords == (0, 1, 0, 1, 0)
    assert beta.coords == (0, 2, 0, 5, 1)
    with pytest.raises(DomainError):
        paired_couple(3, 0, weights=[1, 1])
    with pytest.raises(DomainError):
        paired_couple(3, 0, weights=[0, 1])


def test_truncated_pencil_base_point():
    built = truncated_pencil(5)
    assert built.base_point == (0, 0, 0, 1, 0)
    assert built.provenance["m"] == 5


def test_truncated_couple():
    _, alpha, beta = truncated_couple(5)
    assert alpha.coords == (0, 0, 0, 0, 1)
    assert beta.coords == (0, 0, 0, 1, 1)


def test_nijenhuis_pair():
    built = nijenhuis_truncated_pair(5)
    assert compatibility_check(built.pencil).ok
    assert built.base_point == (1, 1, 1, 1, 1)
    with pytest.raises(DimensionError):
        nijenhuis_truncated_pair(6)


def test_affine_couples_have_matching_lengths():
    families = scalar_families(2, seed=3)
    L, alpha, beta = special_affine_couple(2, families)
    assert len(alpha.coords) == len(beta.coords) == L.dim == 5

    L, alpha, beta = character_extension_couple(2, 1, families)
    assert L.dim == 7
    assert alpha.coords[-1] == 0
    assert beta.coords[-1] == 1
