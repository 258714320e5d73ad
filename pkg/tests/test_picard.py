from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fqbrandt.classset import ClassSetError
from fqbrandt.picard import (
    PicElement,
    SignedMeasure,
    decay_verdict,
    equid_experiment,
    hecke_action,
    mass_measure,
    measure_of,
    supersingular_report,
    tv_distance,
)
from fqbrandt.poly import Poly, gcd, sigma_n0


def test_hecke_action_degree(cs3, B3):
    one = Poly(cs3.F, (1,))
    for i in range(cs3.n):
        e = PicElement.basis(cs3, i)
        assert hecke_action(cs3, B3[one], e) == e
        for m, M in B3.items():
            assert hecke_action(cs3, M, e).degree == sigma_n0(m, cs3.n0)


def test_hecke_action_compatible_with_products(cs3, B3):
    F = cs3.F
    a, b = Poly(F, (0, 1)), Poly(F, (1, 1))
    e = PicElement(cs3, (2, 0, 1, 5))
    lhs = hecke_action(cs3, B3[a], hecke_action(cs3, B3[b], e))
    assert lhs == hecke_action(cs3, B3[a * b], e)
    assert measure_of(lhs) == measure_of(hecke_action(cs3, B3[b * a], e))


def test_measures(cs3):
    e1 = PicElement.basis(cs3, 0)
    assert measure_of(e1).weights == (1, 0, 0, 0)
    assert measure_of(2 * e1) == measure_of(e1)
    mu = mass_measure(cs3)
    assert mu.weights == (Fraction(1, 13), Fraction(4, 13), Fraction(4, 13), Fraction(4, 13))
    with pytest.raises(ValueError):
        measure_of(PicElement(cs3, (1, -1, 0, 0)))
    with pytest.raises(ValueError):
        SignedMeasure((Fraction(1, 2),))


def test_tv_distance_basics(cs3):
    e = [measure_of(PicElement.basis(cs3, k)) for k in range(4)]
    assert tv_distance(e[0], e[0]) == 0
    assert tv_distance(e[0], e[1]) == 2


weights = st.lists(st.integers(0, 20), min_size=3, max_size=3).filter(lambda v: sum(v) > 0)


@settings(max_examples=100, deadline=None)
@given(weights, weights, weights)
def test_tv_triangle_inequality(a, b, c):
    mk = lambda v: SignedMeasure(tuple(Fraction(x, sum(v)) for x in v))  # noqa: E731
    x, y, z = mk(a), mk(b), mk(c)
    assert tv_distance(x, z) <= tv_distance(x, y) + tv_distance(y, z)
    assert tv_distance(x, y) == tv_distance(y, x)


def test_trivial_level_has_zero_distance(classsets, brandt6):
    C = classsets["t"]
    rows = {m: M[0] for m, M in brandt6["t"].items()}
    rep = equid_experiment(C, 0, rows, 6)
    assert all(r.distance == 0 for r in rep.rows)
    assert supersingular_report(C) == [("phi_1", Fraction(1))]


def test_experiment_small(cs3, B3):
    rows = {m: M[0] for m, M in B3.items()}
    rep = equid_experiment(cs3, 0, rows, 6, coprime_only=True)
    assert all(gcd(r.m, cs3.n0).is_one() for r in rep.rows)
    assert rep.rows[0].distance == tv_distance(measure_of(PicElement.basis(cs3, 0)), mass_measure(cs3))
    bounded, decreasing = decay_verdict(rep)
    assert decreasing
    csv_text = rep.to_csv()
    assert csv_text.splitlines()[0] == "m,deg_m_n0,i,tv_distance,normalized_ratio,certified_bound_C"
    assert len(csv_text.splitlines()) == len(rep.rows) + 1


def test_twists_reduce_to_another_row(cs3, B3):
    """Distances at m and at its coprime part agree after moving to the witness row."""
    n0 = cs3.n0
    F = cs3.F
    m = Poly(F, (0, 1))
    reps = [equid_experiment(cs3, i, {mm: B3[mm][i] for mm in (m, m * n0)}, 6) for i in range(4)]
    twisted = {r.i: r.distance for rep in reps for r in rep.rows if r.m == m * n0}
    plain = {r.i: r.distance for rep in reps for r in rep.rows if r.m == m}
    assert sorted(twisted.values()) == sorted(plain.values())


def test_supersingular_weights(cs3):
    rep = supersingular_report(cs3)
    assert sum(w for _, w in rep) == 1
    assert rep[0][1] == Fraction(8, 26) * Fraction(1, 4)


def test_experiment_rejects_bad_rows(cs3, B3):
    rows = {m: M[0].copy() for m, M in B3.items() if m.deg <= 1}
    rows[Poly(cs3.F, (0, 1))][0] += 1
    with pytest.raises(ClassSetError):
        equid_experiment(cs3, 0, rows, 1)
    assert isinstance(np.asarray(rows[Poly(cs3.F, (0, 1))]), np.ndarray)


def test_ratios_within_spectral_bound(cs3, B3):
    from fqbrandt.picard import spectral_ratio_bound

    bound = spectral_ratio_bound(cs3, B3[Poly(cs3.F, (0, 1))], 0)
    rows = {m: M[0] for m, M in B3.items()}
    rep = equid_experiment(cs3, 0, rows, 6, coprime_only=True)
    assert max(r.ratio for r in rep.rows) <= bound
    assert 4 < bound < 6
