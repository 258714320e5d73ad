"""Full-rank A-lattices in a quaternion algebra over F_q(t), A = F_q[t].

A lattice is stored as an integral 4x4 basis matrix in row Hermite normal
form together with a monic common denominator; two lattices are equal
exactly when these agree.  Because the algebra is definite, -deg Nr is
(twice) a valuation at infinity, which is what makes :func:`reduce_basis`
and bounded-norm enumeration work.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from itertools import product
from typing import Callable, Optional, Sequence

from .poly import Frac, Poly, factor, gcd, lcm, monic_sqrt
from .quat import QuatAlgebra, QuatElem, qbilinear, qconj, qmul, qnorm

Vec = tuple  # tuple of Poly


class LatticeError(ValueError):
    pass


# -- matrices over A ------------------------------------------------------------


def hermite_rows(vecs: Sequence[Sequence[Poly]], ncols: int) -> list[list[Poly]]:
    """Row Hermite normal form of the A-span of ``vecs``.

    Returns the nonzero rows: echelon shape, monic pivots, and every entry
    above a pivot of degree strictly below the pivot's.
    """
    rows = [list(v) for v in vecs if any(v)]
    r = 0
    for col in range(ncols):
        while True:
            nz = [i for i in range(r, len(rows)) if rows[i][col]]
            if len(nz) <= 1:
                break
            piv = min(nz, key=lambda i: rows[i][col].deg)
            pv = rows[piv]
            for i in nz:
                if i != piv:
                    qt = rows[i][col] // pv[col]
                    if qt:
                        rows[i] = [x - qt * y for x, y in zip(rows[i], pv)]
        nz = [i for i in range(r, len(rows)) if rows[i][col]]
        if not nz:
            continue
        i = nz[0]
        rows[r], rows[i] = rows[i], rows[r]
        inv = rows[r][col].F.inv(rows[r][col].lc)
        rows[r] = [x.scale(inv) for x in rows[r]]
        pv = rows[r]
        for k in range(r):
            qt = rows[k][col] // pv[col]
            if qt:
                rows[k] = [x - qt * y for x, y in zip(rows[k], pv)]
        rows = rows[: r + 1] + [row for row in rows[r + 1 :] if any(row)]
        r += 1
    return rows[:r]


def det(M: Sequence[Sequence[Poly]]) -> Poly:
    n = len(M)
    if n == 1:
        return M[0][0]
    if n == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    total = None
    for j in range(n):
        if not M[0][j]:
            continue
        minor = [row[:j] + row[j + 1 :] for row in M[1:]]
        term = M[0][j] * det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total if total is not None else M[0][0] - M[0][0]


def cofactor_matrix(M: Sequence[Sequence[Poly]]) -> list[list[Poly]]:
    n = len(M)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            minor = [list(r[:j]) + list(r[j + 1 :]) for k, r in enumerate(M) if k != i]
            c = det(minor)
            row.append(-c if (i + j) % 2 else c)
        out.append(row)
    return out


# -- lattices ---------------------------------------------------------------------


class Lattice:
    """Rank-4 A-lattice  (1/den) * rowspan(rows)  in coordinates 1, i, j, ij."""

    def __init__(self, A: QuatAlgebra, rows, den: Poly):
        self.A = A
        self.rows = tuple(tuple(r) for r in rows)
        self.den = den

    @classmethod
    def from_vectors(cls, A: QuatAlgebra, vecs, den: Optional[Poly] = None) -> "Lattice":
        F = A.F
        if den is None:
            den = Poly(F, (1,))
        if not den.is_monic():
            inv = F.inv(den.lc)
            vecs = [[x.scale(inv) for x in v] for v in vecs]
            den = den.scale(inv)
        H = hermite_rows(vecs, 4)
        if len(H) != 4:
            raise LatticeError("generators do not span a full-rank lattice")
        g = den.monic()
        for row in H:
            for x in row:
                if x:
                    g = gcd(g, x)
                    if g.is_one():
                        break
        if not g.is_one():
            H = [[x // g for x in row] for row in H]
            den = den // g
        return cls(A, H, den)

    @classmethod
    def from_elements(cls, A: QuatAlgebra, elems: Sequence[QuatElem]) -> "Lattice":
        den = Poly(A.F, (1,))
        for x in elems:
            den = lcm(den, x.den)
        vecs = [[c * (den // x.den) for c in x.num] for x in elems]
        return cls.from_vectors(A, vecs, den)

    @classmethod
    def standard_order(cls, A: QuatAlgebra) -> "Lattice":
        F = A.F
        one, zero = Poly(F, (1,)), Poly(F)
        return cls.from_vectors(A, [[one if i == j else zero for j in range(4)] for i in range(4)])

    # -- accessors --------------------------------------------------------

    def basis(self) -> list[QuatElem]:
        return [QuatElem(self.A, r, self.den) for r in self.rows]

    def __eq__(self, other) -> bool:
        return isinstance(other, Lattice) and self.rows == other.rows and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.rows, self.den))

    def sort_key(self):
        return (self.den.c, tuple(tuple(x.c for x in r) for r in self.rows))

    def __repr__(self) -> str:
        return f"Lattice(den={self.den}, rows={[list(map(str, r)) for r in self.rows]})"

    @functools.cached_property
    def det(self) -> Frac:
        """Covolume relative to the standard lattice A<1, i, j, ij>."""
        d = Poly(self.A.F, (1,))
        for k in range(4):
            d = d * self.rows[k][k]
        return Frac(d, self.den**4)

    # -- arithmetic --------------------------------------------------------

    def _rescaled(self, den: Poly) -> list[list[Poly]]:
        f = den // self.den
        return [[x * f for x in r] for r in self.rows]

    def __add__(self, other: "Lattice") -> "Lattice":
        den = lcm(self.den, other.den)
        return Lattice.from_vectors(self.A, self._rescaled(den) + other._rescaled(den), den)

    def __mul__(self, other: "Lattice") -> "Lattice":
        a, b = self.A.a, self.A.b
        vecs = [qmul(a, b, r, s) for r in self.rows for s in other.rows]
        return Lattice.from_vectors(self.A, vecs, self.den * other.den)

    def scale(self, c) -> "Lattice":
        if isinstance(c, Poly):
            c = Frac(c)
        vecs = [[x * c.num for x in r] for r in self.rows]
        return Lattice.from_vectors(self.A, vecs, self.den * c.den)

    def left_mul(self, x: QuatElem) -> "Lattice":
        a, b = self.A.a, self.A.b
        return Lattice.from_vectors(self.A, [qmul(a, b, x.num, r) for r in self.rows], x.den * self.den)

    def right_mul(self, x: QuatElem) -> "Lattice":
        a, b = self.A.a, self.A.b
        return Lattice.from_vectors(self.A, [qmul(a, b, r, x.num) for r in self.rows], x.den * self.den)

    def conjugate(self) -> "Lattice":
        return Lattice.from_vectors(self.A, [qconj(r) for r in self.rows], self.den)

    def coordinates(self, x: QuatElem) -> Optional[list[Poly]]:
        """Coefficients of x on the basis if they are all in A, else None."""
        # solve c * rows = x.num * den / x.den, columnwise (rows are triangular)
        target = [c * self.den for c in x.num]
        xd = x.den
        C: list[Poly] = []
        for col in range(4):
            acc = target[col]
            for k in range(col):
                acc = acc - C[k] * self.rows[k][col]
            qt, r = divmod(acc, self.rows[col][col])
            if r:
                return None
            C.append(qt)
        out = []
        for c in C:
            qt, r = divmod(c, xd)
            if r:
                return None
            out.append(qt)
        return out

    def contains(self, x: QuatElem) -> bool:
        return self.coordinates(x) is not None

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(self.contains(x) for x in other.basis())

    def dual(self) -> "Lattice":
        """Dual for the coordinate dot product."""
        C = cofactor_matrix(self.rows)
        dh = Poly(self.A.F, (1,))
        for k in range(4):
            dh = dh * self.rows[k][k]
        return Lattice.from_vectors(self.A, [[x * self.den for x in r] for r in C], dh)

    def intersection(self, other: "Lattice") -> "Lattice":
        return (self.dual() + other.dual()).dual()

    def index_in(self, other: "Lattice") -> Frac:
        """[other : self] as a monic fraction (a polynomial when self is a sublattice)."""
        return (self.det / other.det).monic()

    # -- quadratic data ----------------------------------------------------

    def gram_trace(self) -> list[list[Frac]]:
        a, b = self.A.a, self.A.b
        two = Poly(self.A.F, (self.A.F.from_int(2),))
        d2 = self.den * self.den
        return [[Frac(two * qmul(a, b, r, s)[0], d2) for s in self.rows] for r in self.rows]

    def norms(self) -> list[Frac]:
        a, b = self.A.a, self.A.b
        d2 = self.den * self.den
        return [Frac(qnorm(a, b, r), d2) for r in self.rows]

    def is_integral(self) -> bool:
        return all(x.is_poly() for row in self.gram_trace() for x in row) and all(
            n.is_poly() for n in self.norms()
        )

    def is_order(self) -> bool:
        return self.contains(self.A.one()) and (self * self) == self

    @functools.cached_property
    def discriminant(self) -> Poly:
        """Reduced discriminant: monic square root of the trace-form Gram determinant."""
        G = self.gram_trace()
        den = Poly(self.A.F, (1,))
        for row in G:
            for x in row:
                den = lcm(den, x.den)
        M = [[x.num * (den // x.den) for x in row] for row in G]
        d = Frac(det(M), den**4).monic()
        root = monic_sqrt(d)
        if not root.is_poly():
            raise LatticeError("discriminant of a non-integral lattice")
        return root.num

    def reduced(self) -> "ReducedBasis":
        return reduce_basis(self)

    @functools.cached_property
    def unit_count(self) -> int:
        return len(enumerate_by_norm(self, 0))

    @property
    def weight(self) -> int:
        q = self.A.F.q
        n = self.unit_count
        if n % (q - 1):
            raise LatticeError("unit count not divisible by q-1")
        return n // (q - 1)


# -- orders and ideals -----------------------------------------------------------------


def left_order(I: Lattice) -> Lattice:
    """{x : x I in I}."""
    out = None
    for b in I.basis():
        L = I.right_mul(b.inverse())
        out = L if out is None else out.intersection(L)
    return out


def right_order(I: Lattice) -> Lattice:
    """{x : I x in I}."""
    out = None
    for b in I.basis():
        L = I.left_mul(b.inverse())
        out = L if out is None else out.intersection(L)
    return out


def ideal_norm(I: Lattice, O: Lattice) -> Frac:
    """Reduced norm of a locally principal lattice I with left or right order O."""
    return monic_sqrt(I.index_in(O))


def ideal_inverse(I: Lattice, O: Lattice) -> Lattice:
    """conj(I) / Nr(I); satisfies I * I^-1 = left order of I."""
    n = ideal_norm(I, O)
    return I.conjugate().scale(Frac(n.den, n.num))


def _ring_closure(L: Lattice, max_rounds: int = 64) -> Optional[Lattice]:
    for _ in range(max_rounds):
        if not L.is_integral():
            return None
        L2 = L + L * L
        if L2 == L:
            return L
        L = L2
    return None


def maximalize(O: Lattice, n0: Poly) -> Lattice:
    """A maximal order containing O, for an algebra ramified exactly at n0 (and oo).

    Each round adjoins x/P for some x in O and a prime P where O fails to
    be maximal, found by scanning the lines of (A/P)^4, and closes under
    multiplication.  The discriminant degree drops every round.
    """
    from .poly import enumerate_polys

    F = O.A.F
    while True:
        d = O.discriminant
        if d == n0:
            return O
        bad = [P for P, e in factor(d) if e >= 2 or not P.divides(n0)]
        if not bad:
            raise LatticeError(f"discriminant {d} squarefree but differs from n0={n0}")
        P = bad[0]
        found = None
        residues = list(enumerate_polys(F, P.deg - 1))
        one = Poly(F, (1,))
        zero = Poly(F)
        for lead in range(4):
            for rest in product(residues, repeat=3 - lead):
                coeffs = [zero] * lead + [one] + list(rest)
                num = [zero] * 4
                for c, r in zip(coeffs, O.rows):
                    if c:
                        num = [x + c * y for x, y in zip(num, r)]
                x = QuatElem(O.A, num, O.den * P)
                if O.contains(x):
                    continue
                gens = O.basis() + [x]
                cand = _ring_closure(Lattice.from_elements(O.A, gens))
                if cand is not None:
                    found = cand
                    break
            if found is not None:
                break
        if found is None:
            raise LatticeError(f"no overorder found at {P}")
        if not found.discriminant.deg < d.deg:
            raise LatticeError("maximalization made no progress")
        O = found


# -- reduction and enumeration ---------------------------------------------------------


def _coef(f: Poly, k: int) -> int:
    return f[k]


def reduce_rows(rows: list, form: Callable, F) -> list:
    """Ultrametric reduction of integral row vectors for an anisotropic form.

    ``form(x, y)`` is the polynomial bilinear form.  On return,
    deg form(v, v) = max_k (2 deg c_k + deg form(r_k, r_k)) for v = sum c_k r_k.
    """
    rows = [tuple(r) for r in rows]
    t = Poly.t(F)
    while True:
        degs = [form(r, r).deg for r in rows]
        if any(d is None for d in degs):
            raise LatticeError("form is isotropic on the lattice")
        changed = False
        for parity in (0, 1):
            S = [k for k in range(len(rows)) if degs[k] % 2 == parity]
            if not S:
                continue
            G = {
                (k, l): _coef(form(rows[k], rows[l]), (degs[k] + degs[l]) // 2)
                for k in S
                for l in S
            }
            gamma = _isotropic_vector(G, S, F)
            if gamma is None:
                continue
            support = [k for k in S if gamma[k]]
            kstar = max(support, key=lambda k: degs[k])
            inv = F.inv(gamma[kstar])
            new = [Poly(F)] * len(rows[kstar])
            for k in support:
                c = (t ** ((degs[kstar] - degs[k]) // 2)).scale(F.mul(gamma[k], inv))
                new = [x + c * y for x, y in zip(new, rows[k])]
            rows[kstar] = tuple(new)
            changed = True
            break
        if not changed:
            break
    order = sorted(range(len(rows)), key=lambda k: form(rows[k], rows[k]).deg)
    return [rows[k] for k in order]


def _isotropic_vector(G: dict, S: list, F) -> Optional[dict]:
    for vals in product(range(F.q), repeat=len(S)):
        if not any(vals):
            continue
        acc = 0
        for i, k in enumerate(S):
            if not vals[i]:
                continue
            for j, l in enumerate(S):
                if vals[j]:
                    acc = F.add(acc, F.mul(F.mul(vals[i], vals[j]), G[(k, l)]))
        if acc == 0:
            return dict(zip(S, vals))
    return None


@dataclass(frozen=True)
class ReducedBasis:
    """Integral rows r_k with elements r_k / den; ``degs`` are deg Nr(r_k / den)."""

    A: QuatAlgebra
    rows: tuple
    den: Poly
    degs: tuple

    def elements(self) -> list[QuatElem]:
        return [QuatElem(self.A, r, self.den) for r in self.rows]

    def box(self, d: int) -> list[int]:
        """Max coefficient degree per basis vector for deg Nr <= d (-1: only 0)."""
        return [(d - dk) // 2 if d >= dk else -1 for dk in self.degs]


def reduce_basis(L: Lattice) -> ReducedBasis:
    A = L.A
    form = lambda x, y: qbilinear(A.a, A.b, x, y)  # noqa: E731
    rows = reduce_rows(list(L.rows), form, A.F)
    shift = 2 * L.den.deg
    degs = tuple(qnorm(A.a, A.b, r).deg - shift for r in rows)
    return ReducedBasis(A, tuple(rows), L.den, degs)


def _polys_up_to(F, d: int) -> list[Poly]:
    if d < 0:
        return [Poly(F)]
    return [Poly(F, c) for c in product(range(F.q), repeat=d + 1)]


def enumerate_by_norm(
    L: Lattice,
    d: int,
    exact: Optional[Frac] = None,
    include_zero: bool = False,
) -> list[QuatElem]:
    """Elements x of L with deg Nr(x) <= d (or Nr(x) in F_q^* * exact)."""
    rb = reduce_basis(L)
    A, F = L.A, L.A.F
    if exact is not None:
        d = exact.deg
    boxes = [_polys_up_to(F, b) for b in rb.box(d)]
    d2 = rb.den * rb.den
    out = []
    target = exact.monic() if exact is not None else None
    for cs in product(*boxes):
        num = [Poly(F)] * 4
        for c, r in zip(cs, rb.rows):
            if c:
                num = [x + c * y for x, y in zip(num, r)]
        if not any(num):
            if include_zero and target is None:
                out.append(QuatElem(A, tuple(num), rb.den))
            continue
        nr = Frac(qnorm(A.a, A.b, num), d2)
        if target is not None:
            if nr.monic() == target:
                out.append(QuatElem(A, tuple(num), rb.den))
        elif nr.deg <= d:
            out.append(QuatElem(A, tuple(num), rb.den))
    return out


def enumerate_naive(L: Lattice, d: int, coef_deg: Optional[int] = None) -> list[QuatElem]:
    """Oracle: all coefficient vectors on the Hermite basis with deg c_k <= coef_deg."""
    A, F = L.A, L.A.F
    box = _polys_up_to(F, d if coef_deg is None else coef_deg)
    d2 = L.den * L.den
    out = []
    for cs in product(box, repeat=4):
        num = [Poly(F)] * 4
        for c, r in zip(cs, L.rows):
            if c:
                num = [x + c * y for x, y in zip(num, r)]
        if not any(num):
            continue
        if Frac(qnorm(A.a, A.b, num), d2).deg <= d:
            out.append(QuatElem(A, tuple(num), L.den))
    return out


def lattice_to_json(L: Lattice) -> dict:
    return {"denominator": L.den.to_json(), "basis": [[x.to_json() for x in r] for r in L.rows]}


def lattice_from_json(A: QuatAlgebra, data: dict) -> Lattice:
    F = A.F
    den = Poly.from_json(F, data["denominator"])
    rows = [[Poly.from_json(F, x) for x in r] for r in data["basis"]]
    L = Lattice.from_vectors(A, rows, den)
    return L
