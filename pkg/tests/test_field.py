import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fqbrandt.field import GF, FieldError, is_prime

FIELDS = [(3, 1), (5, 1), (3, 2), (7, 2), (5, 3)]


def test_is_prime_small():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_rejects_even_and_composite():
    with pytest.raises(FieldError):
        GF(2)
    with pytest.raises(FieldError):
        GF(9)


def test_field_is_cached():
    assert GF(3, 2) is GF(3, 2)


@pytest.mark.parametrize("p,e", FIELDS)
def test_multiplicative_group(p, e):
    F = GF(p, e)
    for a in range(1, F.q):
        assert F.mul(a, F.inv(a)) == 1
        assert F.pow(a, F.q - 1) == 1


@pytest.mark.parametrize("p,e", FIELDS)
def test_character_counts_squares(p, e):
    F = GF(p, e)
    squares = {F.mul(a, a) for a in range(1, F.q)}
    assert len(squares) == (F.q - 1) // 2
    for a in range(1, F.q):
        assert F.character(a) == (1 if a in squares else -1)
    assert F.character(F.nonsquare) == -1


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(FIELDS), st.data())
def test_ring_axioms(pe, data):
    F = GF(*pe)
    a, b, c = (data.draw(st.integers(0, F.q - 1)) for _ in range(3))
    assert F.add(a, F.neg(a)) == 0
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.sub(F.add(a, b), b) == a


@pytest.mark.parametrize("p,e", FIELDS)
def test_vectorised_ops_match_scalar(p, e):
    import numpy as np

    F = GF(p, e)
    x = np.arange(F.q).repeat(F.q)
    y = np.tile(np.arange(F.q), F.q)
    assert F.vadd(x, y).tolist() == [F.add(a, b) for a, b in zip(x.tolist(), y.tolist())]
    assert F.vmul(x, y).tolist() == [F.mul(a, b) for a, b in zip(x.tolist(), y.tolist())]
    assert F.vneg(x).tolist() == [F.neg(a) for a in x.tolist()]
