"""Quaternion algebras (a, b | F_q(t)) and their local invariants."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import count

from .field import GF
from .poly import (
    INFINITY,
    Place,
    Poly,
    enumerate_monic,
    factor,
    gcd,
    is_squarefree,
    quadratic_character,
)


class QuatError(ValueError):
    pass


def qmul(a: Poly, b: Poly, x, y):
    """Product of coordinate vectors on the basis 1, i, j, ij."""
    x0, x1, x2, x3 = x
    y0, y1, y2, y3 = y
    ab = a * b
    return (
        x0 * y0 + a * (x1 * y1) + b * (x2 * y2) - ab * (x3 * y3),
        x0 * y1 + x1 * y0 + b * (x3 * y2 - x2 * y3),
        x0 * y2 + x2 * y0 + a * (x1 * y3 - x3 * y1),
        x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
    )


def qnorm(a: Poly, b: Poly, x) -> Poly:
    x0, x1, x2, x3 = x
    return x0 * x0 - a * (x1 * x1) - b * (x2 * x2) + (a * b) * (x3 * x3)


def qbilinear(a: Poly, b: Poly, x, y) -> Poly:
    """Polarisation of the norm: B(x, x) = Nr(x)."""
    return x[0] * y[0] - a * (x[1] * y[1]) - b * (x[2] * y[2]) + (a * b) * (x[3] * y[3])


def qconj(x):
    return (x[0], -x[1], -x[2], -x[3])


@dataclass(frozen=True)
class QuatAlgebra:
    a: Poly
    b: Poly

    def __post_init__(self):
        if not self.a or not self.b:
            raise QuatError("a and b must be nonzero")
        if self.a.F is not self.b.F:
            raise QuatError("a and b over different fields")

    @property
    def F(self) -> GF:
        return self.a.F

    def elem(self, *coords, den=None) -> "QuatElem":
        F = self.F
        cs = [c if isinstance(c, Poly) else Poly(F, (F.from_int(c),)) for c in coords]
        d = den if den is not None else Poly(F, (1,))
        return QuatElem(self, tuple(cs), d)

    def one(self) -> "QuatElem":
        return self.elem(1, 0, 0, 0)

    def basis(self) -> list["QuatElem"]:
        return [self.elem(*[1 if k == i else 0 for k in range(4)]) for i in range(4)]

    def __repr__(self) -> str:
        return f"QuatAlgebra(({self.a}, {self.b}) over {self.F})"


class QuatElem:
    """x = (x0 + x1 i + x2 j + x3 ij) / den, stored in lowest terms."""

    __slots__ = ("A", "num", "den")

    def __init__(self, A: QuatAlgebra, num, den: Poly):
        if not den:
            raise ZeroDivisionError("zero denominator")
        g = den
        for c in num:
            g = gcd(g, c)
        if not g.is_one():
            num = tuple(c // g for c in num)
            den = den // g
        inv = den.F.inv(den.lc)
        self.A = A
        self.num = tuple(c.scale(inv) for c in num)
        self.den = den.scale(inv)

    def __add__(self, other: "QuatElem") -> "QuatElem":
        num = tuple(x * other.den + y * self.den for x, y in zip(self.num, other.num))
        return QuatElem(self.A, num, self.den * other.den)

    def __neg__(self) -> "QuatElem":
        return QuatElem(self.A, tuple(-x for x in self.num), self.den)

    def __sub__(self, other: "QuatElem") -> "QuatElem":
        return self + (-other)

    def __mul__(self, other) -> "QuatElem":
        if isinstance(other, Poly):
            return QuatElem(self.A, tuple(x * other for x in self.num), self.den)
        A = self.A
        return QuatElem(A, qmul(A.a, A.b, self.num, other.num), self.den * other.den)

    def __eq__(self, other) -> bool:
        return isinstance(other, QuatElem) and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def conjugate(self) -> "QuatElem":
        return QuatElem(self.A, qconj(self.num), self.den)

    def trace(self) -> tuple[Poly, Poly]:
        """Reduced trace as a fraction (numerator, monic denominator)."""
        F = self.A.F
        return _reduce(self.num[0].scale(F.from_int(2)), self.den)

    def reduced_norm(self) -> tuple[Poly, Poly]:
        A = self.A
        return _reduce(qnorm(A.a, A.b, self.num), self.den * self.den)

    def inverse(self) -> "QuatElem":
        n, d = self.reduced_norm()
        if not n:
            raise ZeroDivisionError("element of norm zero")
        c = self.conjugate()
        return QuatElem(self.A, tuple(x * d for x in c.num), c.den * n)

    def is_integral_coords(self) -> bool:
        return self.den.is_one()

    def __repr__(self) -> str:
        s = "(" + ", ".join(map(str, self.num)) + ")"
        return s if self.den.is_one() else f"{s}/({self.den})"


def _reduce(n: Poly, d: Poly) -> tuple[Poly, Poly]:
    g = gcd(n, d) if n else d
    n, d = n // g, d // g
    inv = d.F.inv(d.lc)
    return n.scale(inv), d.scale(inv)


# -- Hilbert symbols ----------------------------------------------------------


def _split_at(f: Poly, v: Place) -> tuple[int, int | Poly]:
    """(valuation, unit part reduced to the residue field) of f at v."""
    if v.is_infinite:
        # uniformizer 1/t: f = t^deg * (lc + ...), residue of unit part is lc
        return -f.deg, f.lc
    P = v.prime
    k = 0
    while True:
        qt, r = divmod(f, P)
        if r:
            return k, f
        f, k = qt, k + 1


def hilbert_symbol(a: Poly, b: Poly, v: Place) -> int:
    """Tame Hilbert symbol (a, b)_v in odd residue characteristic."""
    if not a or not b:
        raise QuatError("Hilbert symbol of zero")
    F = a.F
    alpha, u = _split_at(a, v)
    beta, w = _split_at(b, v)
    if v.is_infinite:
        x = F.mul(F.pow(u, beta % 2), F.pow(w, alpha % 2))
        if (alpha * beta) % 2:
            x = F.neg(x)
        return F.character(x)
    P = v.prime
    x = (u.powmod(beta % 2, P) * w.powmod(alpha % 2, P)) % P
    if (alpha * beta) % 2:
        x = -x
    return quadratic_character(x, P)


def candidate_places(a: Poly, b: Poly) -> list[Place]:
    primes = {P for P, _ in factor(a)} | {P for P, _ in factor(b)}
    return [Place(P) for P in sorted(primes, key=lambda P: P.c)] + [INFINITY]


def ramified_places(A: QuatAlgebra) -> list[Place]:
    return [v for v in candidate_places(A.a, A.b) if hilbert_symbol(A.a, A.b, v) == -1]


def _nonzero_polys_by_degree(F: GF, d: int):
    for m in enumerate_monic(F, d):
        for c in range(1, F.q):
            yield m.scale(c)


def _sort_polys(ps):
    return sorted(ps, key=lambda f: f.c)


def build_definite_algebra(n0: Poly, max_total_degree: int | None = None) -> QuatAlgebra:
    """First pair (a, b), by total degree then lexicographically, whose
    algebra ramifies exactly at the primes of n0 and at infinity."""
    if not n0 or not n0.is_monic():
        raise QuatError("n0 must be monic and nonzero")
    fac = factor(n0)
    if not is_squarefree(n0):
        raise QuatError(f"{n0} is not squarefree")
    if len(fac) % 2 == 0:
        raise QuatError("n0 needs an odd number of prime factors for a definite algebra")
    F = n0.F
    target = [Place(P) for P, _ in fac] + [INFINITY]
    limit = max_total_degree if max_total_degree is not None else 2 * n0.deg + 2
    for s in count(0):
        if s > limit:
            break
        for da in range(s + 1):
            as_ = _sort_polys(_nonzero_polys_by_degree(F, da))
            bs = _sort_polys(_nonzero_polys_by_degree(F, s - da))
            for a in as_:
                for b in bs:
                    if ramified_places(QuatAlgebra(a, b)) == target:
                        return QuatAlgebra(a, b)
    raise QuatError(f"no definite algebra found for n0={n0} up to total degree {limit}")
