from itertools import product

import numpy as np
import pytest

from fqbrandt.classset import brandt_lattice
from fqbrandt.field import GF
from fqbrandt.lattice import enumerate_by_norm
from fqbrandt.poly import Frac
from fqbrandt.quat import qnorm
from fqbrandt.theta import encode, group_transform, norm_counts, ntt_params


@pytest.mark.parametrize("p,K", [(3, 0), (3, 5), (5, 3), (7, 2)])
def test_transform_round_trip(p, K):
    rng = np.random.default_rng(p * 10 + K)
    a = rng.integers(0, 1000, p**K)
    assert np.array_equal(group_transform(group_transform(a, p), p, inverse=True), a)


def test_transform_is_group_convolution():
    p, K = 3, 3
    rng = np.random.default_rng(0)
    x, y = rng.integers(0, 5, 27), rng.integers(0, 5, 27)

    def idx(d):
        return sum(c * p**k for k, c in enumerate(d))

    ref = np.zeros(27, dtype=np.int64)
    for d1 in product(range(p), repeat=K):
        for d2 in product(range(p), repeat=K):
            ref[idx([(a + b) % p for a, b in zip(d1, d2)])] += x[idx(d1)] * y[idx(d2)]
    P, _ = ntt_params(p)
    got = group_transform(group_transform(x, p) * group_transform(y, p) % P, p, inverse=True)
    assert np.array_equal(got, ref)


def python_counts(L, E):
    F = L.A.F
    counts = np.zeros(F.q ** (E + 1), dtype=np.int64)
    counts[0] = 1
    d2 = L.den * L.den
    for x in enumerate_by_norm(L, E - 2 * L.den.deg):
        v = Frac(qnorm(L.A.a, L.A.b, x.num), x.den * x.den) * Frac(d2)
        c = np.array(v.num.c + (0,) * (E + 1 - len(v.num.c)))
        counts[encode(F, c[None, :], E)[0]] += 1
    return counts


@pytest.mark.parametrize("text", ["t", "t^2 + 1", "t^3 + 2*t + 1"])
def test_three_counting_routes_agree(classsets, text):
    R = classsets[text].R
    E = 4
    ref = python_counts(R, E)
    assert np.array_equal(norm_counts(R, E, "box"), ref)
    assert np.array_equal(norm_counts(R, E, "split"), ref)


def test_scaled_counts_on_brandt_lattices(cs3):
    for i, j in [(0, 2), (2, 3), (3, 3)]:
        L, c = brandt_lattice(cs3, i, j)
        s = c * L.den * L.den
        assert np.array_equal(norm_counts(L, 3, "split", s), norm_counts(L, 3, "box", s))


def test_extension_field_routes_agree():
    from conftest import build

    C = build("t", 3, 2)
    R = C.R
    assert np.array_equal(norm_counts(R, 2, "split"), norm_counts(R, 2, "box"))
    assert norm_counts(R, 0, "split")[1:].sum() == R.unit_count


def test_unknown_method():
    F = GF(3)
    with pytest.raises(ValueError):
        norm_counts(None, 1, "nope")
    assert F.q == 3
