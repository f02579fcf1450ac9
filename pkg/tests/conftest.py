import itertools

import pytest

from ramspace import ell_space, matrix_space, partition_space


@pytest.fixture(scope="session")
def e8():
    return ell_space(8)


@pytest.fixture(scope="session")
def e12():
    return ell_space(12)


@pytest.fixture(scope="session")
def m24():
    return matrix_space(2, 4)


@pytest.fixture(scope="session")
def p6():
    return partition_space(6)


def pairs_of(elems, k=2):
    return list(itertools.combinations(elems, k))
