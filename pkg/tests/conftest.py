"""Shared fixtures and helpers for the cloneforge test suite."""

import random

import pytest

from cloneforge import builtin, make_operation


def random_operation(rng, k, arity):
    """A uniformly random operation on {0..k-1} of the given arity."""
    return make_operation(
        k, arity, [rng.randrange(k) for _ in range(k**arity)]
    )


def seeded_rng(seed):
    return random.Random(seed)


@pytest.fixture
def nand():
    return make_operation(2, 2, [1, 1, 1, 0])


@pytest.fixture
def nor():
    return make_operation(2, 2, [1, 0, 0, 0])


@pytest.fixture
def webb3():
    return builtin("webb", k=3)


@pytest.fixture
def median2():
    return builtin("median", k=2)


@pytest.fixture
def xor3():
    return builtin("ternary_sum")


@pytest.fixture
def dual_discriminator3():
    return builtin("dual_discriminator", k=3)


@pytest.fixture
def ell3():
    return builtin("ell", k=3)
