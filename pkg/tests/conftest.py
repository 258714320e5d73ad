import pytest

from fqbrandt.classset import brandt_matrices, enumerate_classes
from fqbrandt.field import GF
from fqbrandt.lattice import Lattice, maximalize
from fqbrandt.poly import parse_poly
from fqbrandt.quat import build_definite_algebra

PRIMES_Q3 = ["t", "t + 1", "t^2 + 1", "t^3 + 2*t + 1"]


def build(text, p=3, e=1):
    F = GF(p, e)
    n0 = parse_poly(F, text)
    A = build_definite_algebra(n0)
    R = maximalize(Lattice.standard_order(A), n0)
    return enumerate_classes(R, n0)


@pytest.fixture(scope="session")
def F3():
    return GF(3)


@pytest.fixture(scope="session")
def classsets():
    return {text: build(text) for text in PRIMES_Q3}


@pytest.fixture(scope="session")
def brandt6(classsets):
    return {text: brandt_matrices(C, 6) for text, C in classsets.items()}


@pytest.fixture(scope="session")
def cs3(classsets):
    return classsets["t^3 + 2*t + 1"]


@pytest.fixture(scope="session")
def B3(brandt6):
    return brandt6["t^3 + 2*t + 1"]
