"""Shared fixtures and markers."""

import random

import pytest

from poisson_pairs.ring import coordinate_ring, parameter_ring


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: end-to-end computations that take minutes")


@pytest.fixture
def rng():
    return random.Random(20240601)


@pytest.fixture
def ring3():
    return coordinate_ring(3)


@pytest.fixture
def tring():
    return parameter_ring()
