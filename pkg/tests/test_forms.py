from fractions import Fraction

import numpy as np
import pytest

from fqbrandt.forms import (
    CoefficientSeries,
    cuspidal_part,
    decomposition_check,
    eisenstein_series,
    evaluate,
    hecke_covariance_check,
    ramanujan_table,
    spectral_check,
    spectral_report,
    theta_series,
)
from fqbrandt.poly import Poly, sigma_n0


def test_theta_coefficients(cs3, B3):
    F = cs3.F
    one = Poly(F, (1,))
    for i in range(4):
        for j in range(4):
            T = theta_series(cs3, B3, i, j, 6)
            assert T[one] == Fraction(int(i == j), 9)
            assert T.kappa == Fraction(1, cs3.weights[j])
    kappas = sum(theta_series(cs3, B3, 0, j, 6).kappa for j in range(4))
    assert kappas == cs3.mass


def test_eisenstein(cs3, B3):
    E = eisenstein_series(cs3, B3, 6)
    assert E.kappa == Fraction(13, 4)
    assert E[Poly(cs3.F, (1,))] == Fraction(1, 9)
    for m, c in E.coeffs.items():
        assert c == Fraction(sigma_n0(m, cs3.n0), 3 ** (m.deg + 2))


def test_eisenstein_independent_of_row(cs3, B3):
    rows = []
    for i in range(4):
        total = theta_series(cs3, B3, i, 0, 6)
        for j in range(1, 4):
            total = total + theta_series(cs3, B3, i, j, 6)
        rows.append(total)
    for r in rows:
        assert dict(r.coeffs) == dict(rows[0].coeffs) and r.kappa == rows[0].kappa


def test_cuspidal(cs3, B3, classsets, brandt6):
    for i in range(4):
        for j in range(4):
            assert cuspidal_part(cs3, B3, i, j, 6).kappa == 0
    C1 = classsets["t"]
    g = cuspidal_part(C1, brandt6["t"], 0, 0, 6)
    assert not any(g.coeffs.values())


def test_evaluate_rule(cs3, B3):
    F = cs3.F
    T = theta_series(cs3, B3, 1, 2, 6)
    lam = Poly(F, (1, 1))
    assert evaluate(T, 1, Poly(F, (1,))) == 0
    assert evaluate(T, 3, lam) == T[lam]
    assert evaluate(T, 5, lam) == T[lam] / 9
    assert evaluate(T, 5, lam.scale(2)) == evaluate(T, 5, lam)
    assert evaluate(T, 4, Poly(F)) == T.kappa / 81
    with pytest.raises(ValueError):
        evaluate(T, 20, Poly(F, (0,) * 7 + (1,)))


def test_series_json_round_trip(cs3, B3):
    g = cuspidal_part(cs3, B3, 2, 3, 4)
    back = CoefficientSeries.from_json(cs3.F, g.to_json())
    assert back == g


def test_checks_pass(cs3, B3):
    assert decomposition_check(cs3, B3, 6).ok
    assert hecke_covariance_check(cs3, B3, 4).ok


def test_ramanujan_table(cs3, B3, classsets, brandt6):
    table = ramanujan_table(cs3, B3, 6)
    one = Poly(cs3.F, (1,))
    for m, i, j, dev, rho in table.rows:
        if m == one:
            expected = abs(int(i == j) - Fraction(1, cs3.weights[j]) / cs3.mass)
            assert dev == expected
    assert 0 < table.overall_max < 2
    trivial = ramanujan_table(classsets["t"], brandt6["t"], 6)
    assert trivial.overall_max == 0


def test_spectral(cs3, B3):
    results = spectral_report(cs3, B3, 3)
    assert len(results) == 3 + 3 + 7
    assert all(r.ok for r in results)
    r = spectral_check(cs3, B3[Poly(cs3.F, (0, 1))], Poly(cs3.F, (0, 1)))
    assert r.sigma == 4 and r.eisenstein_multiplicity == 1
    with pytest.raises(ValueError):
        spectral_check(cs3, B3[cs3.n0], cs3.n0)


def test_spectral_flags_violations(cs3):
    F = cs3.F
    t = Poly(F, (0, 1))
    # a row-stochastic-like matrix with row sums 4 and an eigenvalue -4 outside [-2 sqrt 3, 2 sqrt 3]
    M = np.array([[0, 4, 0, 0], [4, 0, 0, 0], [0, 0, 0, 4], [0, 0, 4, 0]])
    r = spectral_check(cs3, M, t)
    assert r.real_rooted and not r.within_bound
    assert r.eisenstein_multiplicity == 2
