"""Polynomials over F_q, and the arithmetic functions on monic ones.

A :class:`Poly` is an immutable little-endian coefficient tuple.  The zero
polynomial has ``deg`` equal to ``None``; there is deliberately no
integer stand-in for -infinity, so code that takes degrees must decide
what to do with zero.
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass
from itertools import product
from typing import Iterator, Optional

from .field import GF


class Poly:
    __slots__ = ("F", "c", "_hash")

    def __init__(self, F: GF, coeffs=()):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.F = F
        self.c = tuple(c)
        self._hash = None

    # -- constructors --------------------------------------------------

    @classmethod
    def const(cls, F: GF, a: int) -> "Poly":
        return cls(F, (a,))

    @classmethod
    def t(cls, F: GF) -> "Poly":
        return cls(F, (0, 1))

    @classmethod
    def from_json(cls, F: GF, data) -> "Poly":
        if F.e == 1:
            return cls(F, [int(x) % F.p for x in data])
        return cls(F, [F._undigits([int(d) for d in x]) for x in data])

    def to_json(self) -> list:
        if self.F.e == 1:
            return list(self.c)
        return [self.F._digits(a) for a in self.c]

    def key(self) -> str:
        """Compact text key, e.g. ``"1,2,0,1"`` for t^3+2t+1 over F_3."""
        if self.F.e == 1:
            return ",".join(map(str, self.c))
        return ",".join(":".join(map(str, self.F._digits(a))) for a in self.c)

    @classmethod
    def from_key(cls, F: GF, key: str) -> "Poly":
        if not key:
            return cls(F)
        if F.e == 1:
            return cls(F, [int(x) for x in key.split(",")])
        return cls(F, [F._undigits([int(d) for d in x.split(":")]) for x in key.split(",")])

    # -- basic properties ----------------------------------------------

    @property
    def deg(self) -> Optional[int]:
        return len(self.c) - 1 if self.c else None

    @property
    def lc(self) -> int:
        return self.c[-1] if self.c else 0

    def is_zero(self) -> bool:
        return not self.c

    def is_one(self) -> bool:
        return self.c == (1,)

    def is_monic(self) -> bool:
        return bool(self.c) and self.c[-1] == 1

    def __bool__(self) -> bool:
        return bool(self.c)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.F is other.F and self.c == other.c
        if isinstance(other, int):
            return self.c == Poly(self.F, (self.F.from_int(other),)).c
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.F.p, self.F.e, self.c))
        return self._hash

    def __lt__(self, other: "Poly") -> bool:
        return self.c < other.c

    def __getitem__(self, i: int) -> int:
        return self.c[i] if 0 <= i < len(self.c) else 0

    def __repr__(self) -> str:
        if not self.c:
            return "0"
        terms = []
        for i in range(len(self.c) - 1, -1, -1):
            a = self.c[i]
            if not a:
                continue
            coef = str(a) if self.F.e == 1 else "[" + ",".join(map(str, self.F._digits(a))) + "]"
            if i == 0:
                terms.append(coef)
            else:
                mon = "t" if i == 1 else f"t^{i}"
                terms.append(mon if a == 1 else f"{coef}*{mon}")
        return " + ".join(terms)

    # -- ring operations -----------------------------------------------

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.F is not self.F:
                raise ValueError("polynomials over different fields")
            return other
        if isinstance(other, int):
            return Poly(self.F, (self.F.from_int(other),))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        F = self.F
        if F.e == 1:
            p = F.p
            out = [(x + y) % p for x, y in zip(a, b)] + list(a[len(b):])
        else:
            out = [F.add(x, y) for x, y in zip(a, b)] + list(a[len(b):])
        return Poly(F, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        F = self.F
        return Poly(F, [F.neg(x) for x in self.c])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.c, other.c
        if not a or not b:
            return Poly(self.F)
        F = self.F
        out = [0] * (len(a) + len(b) - 1)
        if F.e == 1:
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        out[i + j] += x * y
            p = F.p
            return Poly(F, [v % p for v in out])
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = F.add(out[i + j], F.mul(x, y))
        return Poly(F, out)

    __rmul__ = __mul__

    def scale(self, a: int) -> "Poly":
        F = self.F
        return Poly(F, [F.mul(a, x) for x in self.c])

    def shift(self, n: int) -> "Poly":
        return Poly(self.F, (0,) * n + self.c) if self.c else self

    def __divmod__(self, other):
        other = self._coerce(other)
        if not other.c:
            raise ZeroDivisionError("polynomial division by zero")
        F = self.F
        r = list(self.c)
        db = len(other.c) - 1
        if len(r) - 1 < db:
            return Poly(F), self
        inv = F.inv(other.c[-1])
        b = other.c
        quot = [0] * (len(r) - db)
        if F.e == 1:
            p = F.p
            for k in range(len(r) - 1, db - 1, -1):
                c = r[k] * inv % p
                if c:
                    quot[k - db] = c
                    for i in range(db + 1):
                        r[k - db + i] = (r[k - db + i] - c * b[i]) % p
        else:
            for k in range(len(r) - 1, db - 1, -1):
                c = F.mul(r[k], inv)
                if c:
                    quot[k - db] = c
                    for i in range(db + 1):
                        r[k - db + i] = F.sub(r[k - db + i], F.mul(c, b[i]))
        return Poly(F, quot), Poly(F, r[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __pow__(self, n: int) -> "Poly":
        result = Poly(self.F, (1,))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def powmod(self, n: int, m: "Poly") -> "Poly":
        result = Poly(self.F, (1,))
        base = self % m
        while n:
            if n & 1:
                result = result * base % m
            base = base * base % m
            n >>= 1
        return result

    def divides(self, other: "Poly") -> bool:
        return (other % self).is_zero()

    def monic(self) -> "Poly":
        if not self.c:
            return self
        return self.scale(self.F.inv(self.c[-1]))

    def __call__(self, x: int) -> int:
        F = self.F
        acc = 0
        for a in reversed(self.c):
            acc = F.add(F.mul(acc, x), a)
        return acc

    def derivative(self) -> "Poly":
        F = self.F
        return Poly(F, [F.mul(F.from_int(i), a) for i, a in enumerate(self.c)][1:])


def gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd (zero only if both inputs are zero)."""
    while b:
        a, b = b, a % b
    return a.monic()


def xgcd(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """Return (g, s, u) with s*a + u*b = g, g monic."""
    F = a.F
    r0, r1 = a, b
    s0, s1 = Poly(F, (1,)), Poly(F)
    u0, u1 = Poly(F), Poly(F, (1,))
    while r1:
        qt, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - qt * s1
        u0, u1 = u1, u0 - qt * u1
    if not r0:
        return r0, s0, u0
    inv = F.inv(r0.lc)
    return r0.scale(inv), s0.scale(inv), u0.scale(inv)


def inverse_mod(a: Poly, m: Poly) -> Poly:
    g, s, _ = xgcd(a % m, m)
    if not g.is_one():
        raise ZeroDivisionError(f"{a} is not invertible modulo {m}")
    return s % m


def lcm(a: Poly, b: Poly) -> Poly:
    return (a * b // gcd(a, b)).monic()


# -- enumeration ----------------------------------------------------------


def enumerate_monic(F: GF, d: int) -> list[Poly]:
    """All monic polynomials of degree exactly d, lexicographic in the
    little-endian coefficient list."""
    if d < 0:
        raise ValueError("degree must be non-negative")
    return [Poly(F, low + (1,)) for low in product(range(F.q), repeat=d)]


def enumerate_polys(F: GF, max_deg: int) -> Iterator[Poly]:
    """All polynomials of degree <= max_deg (zero included)."""
    for c in product(range(F.q), repeat=max_deg + 1):
        yield Poly(F, c)


def is_irreducible(f: Poly) -> bool:
    """Rabin's test."""
    if not f:
        raise ValueError("zero polynomial")
    n = f.deg
    if n < 1:
        return False
    if n == 1:
        return True
    f = f.monic()
    F = f.F
    x = Poly.t(F)
    if not (x.powmod(F.q**n, f) - x).is_zero():
        return False
    for r in _prime_factors(n):
        h = x.powmod(F.q ** (n // r), f) - x
        if not gcd(h, f).is_one():
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@functools.lru_cache(maxsize=None)
def irreducibles(F: GF, d: int) -> tuple[Poly, ...]:
    """Monic irreducibles of degree d in enumeration order."""
    return tuple(f for f in enumerate_monic(F, d) if is_irreducible(f))


@functools.lru_cache(maxsize=65536)
def factor(f: Poly) -> tuple[tuple[Poly, int], ...]:
    """Factor into monic irreducibles by trial division.

    Returns ``((P, e), ...)`` sorted by coefficient list; the leading
    coefficient of f is dropped.
    """
    if not f:
        raise ValueError("cannot factor the zero polynomial")
    F = f.F
    rest = f.monic()
    found: dict[Poly, int] = {}
    d = 1
    while rest.deg >= 2 * d:
        if is_irreducible(rest):
            break
        for P in irreducibles(F, d):
            while True:
                qt, r = divmod(rest, P)
                if r:
                    break
                found[P] = found.get(P, 0) + 1
                rest = qt
        d += 1
    if rest.deg > 0:
        found[rest] = found.get(rest, 0) + 1
    return tuple(sorted(found.items(), key=lambda kv: kv[0].c))


def primes_dividing(f: Poly) -> list[Poly]:
    return [P for P, _ in factor(f)]


def is_squarefree(f: Poly) -> bool:
    return all(e == 1 for _, e in factor(f))


def valuation(f: Poly, P: Poly) -> int:
    if not f:
        raise ValueError("valuation of zero")
    v = 0
    while True:
        qt, r = divmod(f, P)
        if r:
            return v
        f, v = qt, v + 1


# -- arithmetic functions ---------------------------------------------------


def sigma_n0(m: Poly, n0: Poly) -> int:
    """Sum of q^deg(d) over monic divisors d of m coprime to n0."""
    if not m:
        raise ValueError("sigma of zero")
    q = m.F.q
    total = 1
    for P, e in factor(m):
        if P.divides(n0):
            continue
        qd = q**P.deg
        total *= sum(qd**k for k in range(e + 1))
    return total


def sigma0(m: Poly) -> int:
    """Number of monic divisors of m."""
    if not m:
        raise ValueError("sigma0 of zero")
    total = 1
    for _, e in factor(m):
        total *= e + 1
    return total


def coprime_part(m: Poly, n0: Poly) -> Poly:
    """The largest monic divisor of m coprime to n0."""
    if not m:
        raise ValueError("coprime part of zero")
    m = m.monic()
    out = Poly(m.F, (1,))
    for P, e in factor(m):
        if not P.divides(n0):
            out = out * P**e
    return out


def quadratic_character(u, P: Optional[Poly] = None, F: Optional[GF] = None) -> int:
    """Legendre symbol of u in F_q (P None) or in the residue field A/(P)."""
    if P is None:
        if isinstance(u, Poly):
            F, u = u.F, u[0] if u.deg in (None, 0) else _not_const(u)
        return F.character(u)
    u = u % P
    if not u:
        return 0
    r = u.powmod((P.F.q**P.deg - 1) // 2, P)
    return 1 if r.is_one() else -1


def _not_const(u):
    raise ValueError(f"{u} is not a constant")


@dataclass(frozen=True)
class Place:
    """A place of F_q(t): a monic irreducible, or None for infinity."""

    prime: Optional[Poly] = None

    @property
    def is_infinite(self) -> bool:
        return self.prime is None

    def __post_init__(self):
        if self.prime is not None and not (self.prime.is_monic() and is_irreducible(self.prime)):
            raise ValueError(f"{self.prime} is not a monic irreducible")

    def __repr__(self) -> str:
        return "Place(oo)" if self.prime is None else f"Place({self.prime})"

    def sort_key(self):
        return (1, ()) if self.prime is None else (0, self.prime.c)


INFINITY = Place(None)


class Frac:
    """Element of F_q(t) as num/den with den monic and gcd(num, den) = 1."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Optional[Poly] = None):
        if den is None:
            den = Poly(num.F, (1,))
        if not den:
            raise ZeroDivisionError("zero denominator")
        g = gcd(num, den) if num else den
        num, den = num // g, den // g
        inv = num.F.inv(den.lc)
        self.num, self.den = num.scale(inv), den.scale(inv)

    @property
    def deg(self) -> Optional[int]:
        return None if not self.num else self.num.deg - self.den.deg

    def __mul__(self, other: "Frac") -> "Frac":
        if isinstance(other, Poly):
            other = Frac(other)
        return Frac(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "Frac") -> "Frac":
        if isinstance(other, Poly):
            other = Frac(other)
        if not other.num:
            raise ZeroDivisionError("division by zero")
        return Frac(self.num * other.den, self.den * other.num)

    def __add__(self, other: "Frac") -> "Frac":
        return Frac(self.num * other.den + other.num * self.den, self.den * other.den)

    def __eq__(self, other) -> bool:
        return isinstance(other, Frac) and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def monic(self) -> "Frac":
        return Frac(self.num.monic(), self.den)

    def is_poly(self) -> bool:
        return self.den.is_one()

    def __repr__(self) -> str:
        return str(self.num) if self.den.is_one() else f"({self.num})/({self.den})"


def monic_sqrt(f: Frac) -> Frac:
    """Monic square root of a monic fraction that is a perfect square up to units."""
    out = Frac(Poly(f.num.F, (1,)))
    for part, sign in ((f.num, 1), (f.den, -1)):
        for P, e in factor(part):
            if e % 2:
                raise ValueError(f"{f} is not a square")
            root = Frac(P ** (e // 2))
            out = out * root if sign > 0 else out / root
    return out


_TERM = re.compile(r"^(?:(\[[\d,\s]*\]|\d+)\s*\*?\s*)?(t(?:\s*\^\s*(\d+))?)?$")


def parse_poly(F: GF, text: str) -> Poly:
    """Read ``"t^3 + 2*t + 1"`` (the printed form, also with ``-``) or a compact key ``"1,2,0,1"``."""
    s = text.strip()
    if not s or s == "0":
        return Poly(F)
    if "t" not in s:
        if "," in s or ":" in s:
            return Poly.from_key(F, s)
        return Poly(F, (F.from_int(int(s)),))
    s = s.replace(" ", "").replace("-", "+-")
    out = Poly(F)
    for term in filter(None, s.split("+")):
        neg = term.startswith("-")
        m = _TERM.match(term.lstrip("-"))
        if not m or not (m.group(1) or m.group(2)):
            raise ValueError(f"cannot parse term {term!r} in {text!r}")
        coef_txt, mon, exp = m.groups()
        if coef_txt is None:
            a = 1
        elif coef_txt.startswith("["):
            a = F._undigits([int(d) for d in coef_txt[1:-1].split(",")])
        else:
            a = F.from_int(int(coef_txt))
        k = 0 if mon is None else int(exp) if exp else 1
        f = Poly(F, (a,)).shift(k)
        out = out - f if neg else out + f
    return out
