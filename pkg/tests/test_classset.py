from fractions import Fraction

import numpy as np
import pytest

from fqbrandt.classset import (
    are_equivalent,
    brandt_identities,
    brandt_matrix,
    check_anchor,
    check_symmetry,
    enumerate_classes,
    mass_target,
    norm_q_ideals,
    reduction_identity_check,
)
from fqbrandt.field import GF
from fqbrandt.lattice import Lattice, ideal_norm, maximalize
from fqbrandt.poly import Frac, Poly, sigma_n0
from fqbrandt.quat import build_definite_algebra

F3 = GF(3)
t = Poly.t(F3)


def test_neighbour_counts(cs3):
    R, n0 = cs3.R, cs3.n0
    for P in [t, t + 1, t * t + 1]:
        Js = norm_q_ideals(R, R, P)
        assert len(Js) == 3**P.deg + 1
        assert len(set(Js)) == len(Js)
        for J in Js:
            assert ideal_norm(J, R) == Frac(P) and R.contains_lattice(J)
    assert len(norm_q_ideals(R, R, n0)) == 1


def test_equivalence(cs3):
    R = cs3.R
    for k, I in enumerate(cs3.ideals):
        assert are_equivalent(I, I, R)
        x = cs3.A.elem(1, 1, t, 0)
        assert are_equivalent(I, I.right_mul(x), R)
        for J in cs3.ideals[k + 1 :]:
            assert not are_equivalent(I, J, R)


def test_class_sets(classsets):
    expected = {"t": [4], "t + 1": [4], "t^2 + 1": [1], "t^3 + 2*t + 1": [4, 1, 1, 1]}
    for text, C in classsets.items():
        assert C.weights == expected[text]
        assert C.mass == mass_target(C.n0)
        assert C.certified
        assert C.ideals[0] == C.R
        for I, O in zip(C.ideals, C.right_orders):
            assert O.discriminant == C.n0


def test_composite_level_is_uncertified():
    n0 = t * (t + 1) * (t + 2)
    A = build_definite_algebra(n0)
    R = maximalize(Lattice.standard_order(A), n0)
    C = enumerate_classes(R, n0, degree_budget=1)
    assert not C.certified
    assert mass_target(n0) is None
    assert C.n >= 1


def test_brandt_trivial_level(brandt6):
    for m, M in brandt6["t"].items():
        assert M.tolist() == [[sigma_n0(m, t)]]


def test_brandt_small_values(B3):
    assert np.array_equal(B3[Poly(F3, (1,))], np.eye(4, dtype=np.int64))
    # regression value; the box and split routes both reproduce it
    assert B3[t + 1].tolist() == [[0, 0, 0, 4], [0, 2, 1, 1], [0, 1, 1, 2], [1, 1, 2, 0]]


def test_single_matrix_agrees(cs3, B3):
    for m in [t + 1, t**2 + t + 2]:
        assert np.array_equal(brandt_matrix(cs3, m), B3[m])
    with pytest.raises(ValueError):
        brandt_matrix(cs3, Poly(F3, (0, 2)))


def test_box_route_agrees(cs3, B3):
    from fqbrandt.classset import brandt_matrices

    box = brandt_matrices(cs3, 3, method="box")
    for m, M in box.items():
        assert np.array_equal(M, B3[m])


def test_parallel_matches_serial(cs3, B3):
    from fqbrandt.classset import brandt_matrices

    par = brandt_matrices(cs3, 2, jobs=2)
    for m, M in par.items():
        assert np.array_equal(M, B3[m])


def test_identity_reports(classsets, brandt6):
    for text, C in classsets.items():
        B = brandt6[text]
        assert check_anchor(C, B).ok
        assert check_symmetry(C, B).ok
        assert brandt_identities(C, B, 6).ok
        rep, wit = reduction_identity_check(C, B)
        assert rep.ok
        assert all(None not in w for w in wit.values())


def test_reports_catch_a_corrupted_entry(cs3, B3):
    bad = {m: M.copy() for m, M in B3.items()}
    m = t * (t + 1)
    bad[m][1, 2] += 1
    bad[m][1, 3] -= 1
    assert check_anchor(cs3, bad).ok  # row sums survive this change
    assert not brandt_identities(cs3, bad, 6).ok
    assert not check_symmetry(cs3, bad).ok


def test_ramified_operator_is_an_involution(cs3, B3):
    P = B3[cs3.n0]
    assert sorted(P.sum(axis=0).tolist()) == [1] * 4 and set(P.ravel().tolist()) <= {0, 1}
    assert np.array_equal(P @ P, np.eye(4, dtype=np.int64))
    _, wit = reduction_identity_check(cs3, B3)
    assert sorted(wit[cs3.n0]) == [0, 1, 2, 3]


def test_mass_fractions():
    assert mass_target(t) == Fraction(1, 4)
    assert mass_target(t**3 + 2 * t + 1) == Fraction(13, 4)
