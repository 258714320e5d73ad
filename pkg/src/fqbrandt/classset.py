"""Left ideal classes of a maximal order and their Brandt matrices."""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .lattice import (
    Lattice,
    enumerate_by_norm,
    ideal_inverse,
    ideal_norm,
    right_order,
)
from .poly import (
    Frac,
    Poly,
    coprime_part,
    enumerate_monic,
    factor,
    gcd,
    inverse_mod,
    irreducibles,
    is_irreducible,
    sigma_n0,
)
from .quat import QuatAlgebra, QuatElem
from .theta import encode, norm_counts

log = logging.getLogger(__name__)


class ClassSetError(RuntimeError):
    pass


# -- linear algebra over the residue field A/P --------------------------------------------


def _rref_mod(rows: list[list[Poly]], P: Poly) -> list[list[Poly]]:
    rows = [[x % P for x in r] for r in rows]
    out: list[list[Poly]] = []
    ncols = len(rows[0]) if rows else 0
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = inverse_mod(rows[r][col], P)
        rows[r] = [(x * inv) % P for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                c = rows[i][col]
                rows[i] = [(x - c * y) % P for x, y in zip(rows[i], rows[r])]
        r += 1
    out = [r_ for r_ in rows[:r]]
    return out


def _left_action_matrices(I: Lattice, R: Lattice, P: Poly) -> list[list[list[Poly]]]:
    """Matrices (mod P) of x -> r x on I/PI for r in the basis of R."""
    mats = []
    for r in R.basis():
        M = []
        for b in I.basis():
            c = I.coordinates(r * b)
            if c is None:
                raise ClassSetError("I is not a left R-module")
            M.append([x % P for x in c])
        mats.append(M)
    return mats


def norm_q_ideals(I: Lattice, R: Lattice, P: Poly) -> list[Lattice]:
    """Left R-ideals J in I with [I : J] = P^2, i.e. Nr(J) = Nr(I) P."""
    if not (P.is_monic() and is_irreducible(P)):
        raise ClassSetError(f"{P} is not a monic irreducible")
    F = P.F
    mats = _left_action_matrices(I, R, P)
    residues = [Poly(F, c) for c in _residue_tuples(F, P.deg)]
    one, zero = Poly(F, (1,)), Poly(F)
    seen: set = set()
    out = []
    basis = I.basis()
    for lead in range(4):
        for rest in _product(residues, 3 - lead):
            v = [zero] * lead + [one] + list(rest)
            span = [v] + [[sum((v[k] * M[k][l] for k in range(4)), zero) for l in range(4)] for M in mats]
            E = _rref_mod(span, P)
            if len(E) != 2:
                continue
            key = tuple(tuple(x.c for x in r) for r in E)
            if key in seen:
                continue
            seen.add(key)
            gens = [b * P for b in basis]
            for r in E:
                num = [Poly(F)] * 4
                for c, row in zip(r, I.rows):
                    num = [x + c * y for x, y in zip(num, row)]
                gens.append(QuatElem(I.A, tuple(num), I.den))
            out.append(Lattice.from_elements(I.A, gens))
    return out


def _residue_tuples(F, d):
    from itertools import product

    return list(product(range(F.q), repeat=d))


def _product(items, n):
    from itertools import product

    return product(items, repeat=n)


def are_equivalent(I: Lattice, J: Lattice, R: Lattice) -> bool:
    """True iff J = I x for some x in D^*."""
    nI, nJ = ideal_norm(I, R), ideal_norm(J, R)
    L = ideal_inverse(I, R) * J
    return bool(enumerate_by_norm(L, 0, exact=nJ / nI))


# -- class sets ----------------------------------------------------------------------------


@dataclass
class ClassSet:
    A: QuatAlgebra
    n0: Poly
    R: Lattice
    ideals: list[Lattice]
    right_orders: list[Lattice]
    unit_counts: list[int]
    norms: list[Frac]
    certified: bool = True

    @property
    def F(self):
        return self.A.F

    @property
    def q(self) -> int:
        return self.A.F.q

    @property
    def n(self) -> int:
        return len(self.ideals)

    @property
    def weights(self) -> list[int]:
        return [u // (self.q - 1) for u in self.unit_counts]

    @property
    def mass(self) -> Fraction:
        return sum((Fraction(1, w) for w in self.weights), Fraction(0))


def mass_target(n0: Poly) -> Optional[Fraction]:
    """(q^deg(p) - 1)/(q^2 - 1) when n0 = p is prime, else None."""
    fac = factor(n0)
    if len(fac) != 1:
        return None
    q = n0.F.q
    return Fraction(q**n0.deg - 1, q**2 - 1)


def enumerate_classes(R: Lattice, n0: Poly, degree_budget: int = 3) -> ClassSet:
    """Breadth-first search over P-neighbours, P running through primes not dividing n0.

    For prime n0 the search stops exactly when the mass formula is met; for
    composite n0 it closes under all primes up to ``degree_budget`` and the
    result is flagged as uncertified.
    """
    F = R.A.F
    target = mass_target(n0)
    ideals = [R]
    rorders = [R]
    units = [R.unit_count]
    mass = Fraction(1, units[0] // (F.q - 1))

    def done() -> bool:
        return target is not None and mass == target

    for d in range(1, degree_budget + 1):
        if done():
            break
        for P in irreducibles(F, d):
            if P.divides(n0) or done():
                continue
            queue = list(ideals)
            while queue and not done():
                I = queue.pop(0)
                for J in norm_q_ideals(I, R, P):
                    if any(are_equivalent(K, J, R) for K in ideals):
                        continue
                    O = right_order(J)
                    if O.discriminant != n0:
                        raise ClassSetError("right order of a neighbour is not maximal")
                    ideals.append(J)
                    rorders.append(O)
                    units.append(O.unit_count)
                    mass += Fraction(1, units[-1] // (F.q - 1))
                    queue.append(J)
                    log.info("class %d found (P=%s), mass %s", len(ideals), P, mass)
                    if target is not None and mass > target:
                        raise ClassSetError(f"mass {mass} overshoots target {target}")
                    if done():
                        break
    if target is not None and not done():
        raise ClassSetError(f"degree budget {degree_budget} exhausted at mass {mass} < {target}")
    norms = [ideal_norm(I, R) for I in ideals]
    order = [0] + sorted(range(1, len(ideals)), key=lambda k: (norms[k].deg, ideals[k].sort_key()))
    return ClassSet(
        A=R.A,
        n0=n0,
        R=R,
        ideals=[ideals[k] for k in order],
        right_orders=[rorders[k] for k in order],
        unit_counts=[units[k] for k in order],
        norms=[norms[k] for k in order],
        certified=target is not None,
    )


# -- Brandt matrices ------------------------------------------------------------------------


def brandt_lattice(C: ClassSet, i: int, j: int) -> tuple[Lattice, Poly]:
    """(conj(I_j) I_i, Nr(I_i) Nr(I_j)).

    B_ij(m) counts b in I_j^-1 I_i with Nr(b) = m Nr(I_i)/Nr(I_j), up to left
    multiplication by R_j^*.  Scaling by Nr(I_j) turns this into elements y of
    conj(I_j) I_i with Nr(y) in F_q^* m Nr(I_i) Nr(I_j).
    """
    Ii, Ij = C.ideals[i], C.ideals[j]
    L = Ij.conjugate() * Ii
    c = C.norms[i] * C.norms[j]
    if not c.is_poly():
        raise ClassSetError("class representatives must be integral ideals")
    return L, c.num


def _monic_indices(F, D: int) -> tuple[list[Poly], np.ndarray]:
    """Monic m of degree <= D and, for each, the indices of u*m for u in F_q^*."""
    ms: list[Poly] = []
    blocks = []
    for d in range(D + 1):
        mons = enumerate_monic(F, d)
        M = _pad_cols(np.array([m.c for m in mons], dtype=np.int64), D + 1)
        blocks.append(np.stack([encode(F, F.vmul(M, np.int64(u)), D) for u in range(1, F.q)], axis=1))
        ms.extend(mons)
    return ms, np.concatenate(blocks)


def _pad_cols(M: np.ndarray, n: int) -> np.ndarray:
    return np.pad(M, [(0, 0), (0, n - M.shape[1])])


def brandt_entries(C: ClassSet, i: int, j: int, D: int, method: str = "split") -> dict[Poly, int]:
    """B_ij(m) for every monic m of degree <= D."""
    L, c = brandt_lattice(C, i, j)
    ms, idx = _monic_indices(C.F, D)
    counts = norm_counts(L, D, method, scale=c * L.den * L.den)
    raw = counts[idx].sum(axis=1)
    u = C.unit_counts[j]
    if np.any(raw % u):
        raise ClassSetError(f"raw counts for ({i},{j}) not divisible by #R_j^* = {u}")
    return dict(zip(ms, (raw // u).tolist()))


def _entries_task(args):
    C, i, j, D, method = args
    return brandt_entries(C, i, j, D, method)


def brandt_rows(
    C: ClassSet, rows: list[int], D: int, method: str = "split", jobs: int = 1
) -> dict[Poly, np.ndarray]:
    """Selected rows of B(m) for all monic m of degree <= D, as arrays (len(rows), n).

    Each entry (i, j) is an independent lattice count; with ``jobs > 1`` they
    run in worker processes.  The result does not depend on ``jobs``.
    """
    tasks = [(C, i, j, D, method) for i in rows for j in range(C.n)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_entries_task, tasks))
    else:
        results = [_entries_task(t) for t in tasks]
    ms = enumerate_all_monic(C.F, D)
    out = {m: np.zeros((len(rows), C.n), dtype=np.int64) for m in ms}
    for (_, i, j, _, _), res in zip(tasks, results):
        a = rows.index(i)
        for m, v in res.items():
            out[m][a, j] = v
    return out


def enumerate_all_monic(F, D: int) -> list[Poly]:
    return [m for d in range(D + 1) for m in enumerate_monic(F, d)]


def brandt_matrices(C: ClassSet, D: int, method: str = "split", jobs: int = 1) -> dict[Poly, np.ndarray]:
    """Full Brandt matrices B(m), deg m <= D."""
    return brandt_rows(C, list(range(C.n)), D, method, jobs)


def brandt_matrix(C: ClassSet, m: Poly, method: str = "split") -> np.ndarray:
    if not m.is_monic():
        raise ValueError("m must be monic")
    D = m.deg
    out = np.zeros((C.n, C.n), dtype=np.int64)
    for i in range(C.n):
        for j in range(C.n):
            out[i, j] = brandt_entries(C, i, j, D, method)[m]
    return out


# -- identity checks -------------------------------------------------------------------------


@dataclass
class Report:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, msg: str) -> None:
        self.failures.append(msg)

    def __str__(self) -> str:
        status = "PASS" if self.ok else f"FAIL ({self.failures[0]})"
        return f"{self.name}: {self.checked} checks, {status}"


def check_anchor(C: ClassSet, B: dict[Poly, np.ndarray]) -> Report:
    """B((1)) = Id, entries >= 0, row sums = sigma_n0(m)."""
    rep = Report("identity anchor / row sums")
    F = C.F
    one = Poly(F, (1,))
    if not np.array_equal(B[one], np.eye(C.n, dtype=np.int64)):
        rep.fail("B((1)) != Id")
    for m, M in B.items():
        rep.checked += 1
        if np.any(M < 0):
            rep.fail(f"negative entry in B({m})")
        s = sigma_n0(m, C.n0)
        if np.any(M.sum(axis=1) != s):
            rep.fail(f"row sums of B({m}) = {M.sum(axis=1).tolist()} != {s}")
    return rep


def check_symmetry(C: ClassSet, B: dict[Poly, np.ndarray]) -> Report:
    rep = Report("weighted symmetry w_j B_ij = w_i B_ji")
    w = np.array(C.weights, dtype=np.int64)
    for m, M in B.items():
        rep.checked += 1
        W = M * w[None, :]
        if not np.array_equal(W, W.T):
            rep.fail(f"B({m}) not weighted-symmetric")
    return rep


def brandt_identities(C: ClassSet, B: dict[Poly, np.ndarray], D: int) -> Report:
    """Hecke relations as exact integer matrix identities for deg <= D."""
    rep = Report("Hecke relations")
    F, q, n0 = C.F, C.q, C.n0
    one = Poly(F, (1,))
    Id = B[one]
    mats = {m: M for m, M in B.items() if m.deg <= D}
    ms = sorted(mats, key=lambda m: (m.deg, m.c))
    obj = lambda M: M.astype(object)  # noqa: E731  exact python ints
    # commutation
    for a in ms:
        for b in ms:
            if a.deg + b.deg > D or b.c < a.c:
                continue
            rep.checked += 1
            Ma, Mb = obj(mats[a]), obj(mats[b])
            if not np.array_equal(Ma.dot(Mb), Mb.dot(Ma)):
                rep.fail(f"B({a}) and B({b}) do not commute")
            if gcd(a, b).is_one():
                rep.checked += 1
                if not np.array_equal(obj(mats[(a * b)]), Ma.dot(Mb)):
                    rep.fail(f"B(({a})({b})) != B({a})B({b})")
    # prime powers
    for d in range(1, D + 1):
        for P in irreducibles(F, d):
            BP = obj(mats[P])
            prev, cur = obj(Id), BP
            l = 1
            while (l + 1) * d <= D:
                nxt = P ** (l + 1)
                rep.checked += 1
                if P.divides(n0):
                    expect = cur.dot(BP)
                    label = f"B({P}^{l + 1}) != B({P})^{l + 1}"
                else:
                    expect = cur.dot(BP) - q**d * prev
                    label = f"recursion fails at {P}^{l + 1}"
                got = obj(mats[nxt])
                if not np.array_equal(got, expect):
                    rep.fail(label)
                prev, cur = cur, got
                l += 1
    return rep


def reduction_identity_check(C: ClassSet, B: dict[Poly, np.ndarray]) -> tuple[Report, dict]:
    """For m not coprime to n0, find k(i) with B_i.(m)/sigma(m) = B_k.(m')/sigma(m')."""
    rep = Report("reduction to the coprime part")
    witnesses = {}
    for m, M in B.items():
        if gcd(m, C.n0).is_one():
            continue
        mc = coprime_part(m, C.n0)
        Mc = B[mc]
        s, sc = sigma_n0(m, C.n0), sigma_n0(mc, C.n0)
        wmap = []
        for i in range(C.n):
            rep.checked += 1
            row = [Fraction(int(x), s) for x in M[i]]
            k = next(
                (k for k in range(C.n) if row == [Fraction(int(x), sc) for x in Mc[k]]),
                None,
            )
            if k is None:
                rep.fail(f"no witness row for i={i}, m={m}")
            wmap.append(k)
        witnesses[m] = wmap
    return rep, witnesses
