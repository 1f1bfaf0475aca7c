import pytest

from b3param.linalg import Matrix, invert
from b3param.rng import SplitMix64
from b3param.scalars import DEFAULT_PRIME, EisensteinField, RationalField, make_prime_field


@pytest.fixture
def f7():
    return make_prime_field(7)


@pytest.fixture
def big():
    return make_prime_field(DEFAULT_PRIME)


@pytest.fixture
def qrho():
    return EisensteinField()


@pytest.fixture
def rationals():
    return RationalField(bound=9)


def random_matrix(field, rows, cols, rng):
    return Matrix(rows, cols, field, [field.random(rng) for _ in range(rows * cols)])


def random_invertible(field, n, rng):
    while True:
        m = random_matrix(field, n, n, rng)
        try:
            invert(m)
            return m
        except Exception:
            continue


@pytest.fixture
def rng():
    return SplitMix64(20261015)
