import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fqbrandt.field import GF
from fqbrandt.poly import INFINITY, Place, Poly, enumerate_monic, factor, irreducibles
from fqbrandt.quat import (
    QuatAlgebra,
    QuatError,
    build_definite_algebra,
    candidate_places,
    hilbert_symbol,
    ramified_places,
)
from oracles import conic_symbol

F3 = GF(3)
A = QuatAlgebra(Poly(F3, (2,)), Poly(F3, (1, 2, 0, 1)))

coord = st.lists(st.integers(0, 2), max_size=3).map(lambda c: Poly(F3, c))
elems = st.tuples(coord, coord, coord, coord).map(lambda c: A.elem(*c))


@settings(max_examples=80, deadline=None)
@given(elems, elems, elems)
def test_associative(x, y, z):
    assert (x * y) * z == x * (y * z)


@settings(max_examples=80, deadline=None)
@given(elems, elems)
def test_norm_multiplicative_and_conjugation(x, y):
    assert (x * y).reduced_norm() == _mul(x.reduced_norm(), y.reduced_norm())
    assert (x * y).conjugate() == y.conjugate() * x.conjugate()
    n, d = x.reduced_norm()
    assert x * x.conjugate() == A.elem(n, 0, 0, 0, den=d)


def _mul(u, v):
    from fqbrandt.poly import Frac

    f = Frac(u[0], u[1]) * Frac(v[0], v[1])
    return f.num, f.den


@settings(max_examples=50, deadline=None)
@given(elems)
def test_inverse(x):
    if not any(x.num):
        return
    assert x * x.inverse() == A.one()


def test_basis_relations():
    one, i, j, k = A.basis()
    assert i * i == A.elem(A.a, 0, 0, 0)
    assert j * j == A.elem(A.b, 0, 0, 0)
    assert i * j == k and j * i == -k


def test_hilbert_symbol_tame_cases():
    t = Poly.t(F3)
    two = Poly(F3, (2,))
    # 2 is a nonsquare in F_3: (2, t)_t = -1, (2, t^2)_t = 1
    assert hilbert_symbol(two, t, Place(t)) == -1
    assert hilbert_symbol(two, t * t, Place(t)) == 1
    assert hilbert_symbol(two, t, INFINITY) == -1


def test_hilbert_product_formula():
    rng = random.Random(7)
    for _ in range(30):
        a = Poly(F3, [rng.randrange(3) for _ in range(rng.randint(1, 4))])
        b = Poly(F3, [rng.randrange(3) for _ in range(rng.randint(1, 4))])
        if not a or not b:
            continue
        places = candidate_places(a, b)
        prod_ = 1
        for v in places:
            prod_ *= hilbert_symbol(a, b, v)
        assert prod_ == 1
        # places outside the support of a, b are unramified
        for P in irreducibles(F3, 1):
            if Place(P) not in places:
                assert hilbert_symbol(a, b, Place(P)) == 1


def test_conic_oracle_on_fixed_cases():
    t = Poly.t(F3)
    two = Poly(F3, (2,))
    assert conic_symbol(two, t, 0) == -1
    assert conic_symbol(two, t + 1, 0) == 1
    assert conic_symbol(two, t, None) == -1


@pytest.mark.parametrize("text", ["t", "t + 1", "t^2 + 1", "t^3 + 2*t + 1"])
def test_definite_algebra_ramification(text):
    from fqbrandt.poly import parse_poly

    n0 = parse_poly(F3, text)
    B = build_definite_algebra(n0)
    assert ramified_places(B) == [Place(n0), INFINITY]


def test_definite_algebra_composite_level():
    t = Poly.t(F3)
    n0 = t * (t + 1) * (t + 2)
    B = build_definite_algebra(n0)
    assert ramified_places(B) == [Place(P) for P, _ in factor(n0)] + [INFINITY]


def test_definite_algebra_errors():
    t = Poly.t(F3)
    with pytest.raises(QuatError):
        build_definite_algebra(t * (t + 1))
    with pytest.raises(QuatError):
        build_definite_algebra(t * t * (t + 1))
    with pytest.raises(QuatError):
        build_definite_algebra(Poly(F3, (0, 2)))


def test_definite_algebra_over_f9_and_f5():
    for F in (GF(3, 2), GF(5)):
        for n0 in enumerate_monic(F, 1)[:2]:
            B = build_definite_algebra(n0)
            assert ramified_places(B) == [Place(n0), INFINITY]
