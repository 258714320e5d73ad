"""Finite fields F_q with q = p^e, p odd.

Elements are plain ints in ``range(q)``.  For e > 1 the int encodes the
coordinate vector over F_p in base p (digit i is the coefficient of x^i
modulo the defining polynomial).  Multiplication in extension fields goes
through discrete log / exp tables built once per field.
"""

from __future__ import annotations

import functools

import numpy as np

DEFAULT_BOUND = 2**16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class FieldError(ValueError):
    pass


class GF:
    """The finite field with ``p**e`` elements.

    Instances are cached, so ``GF(3) is GF(3)``; equality is identity.
    """

    def __new__(cls, p: int, e: int = 1, bound: int = DEFAULT_BOUND):
        return _make_field(cls, p, e, bound)

    def _setup(self, p: int, e: int) -> None:
        self.p = p
        self.e = e
        self.q = p**e
        if e == 1:
            self.modulus = (0, 1)
            self._log = self._exp = None
            return
        self.modulus = _first_irreducible_over_prime(p, e)
        self._build_log_tables()

    # -- construction helpers -------------------------------------------

    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.e):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def _undigits(self, ds) -> int:
        a = 0
        for d in reversed(ds):
            a = a * self.p + d
        return a

    def _slow_mul(self, a: int, b: int) -> int:
        p, e = self.p, self.e
        x, y = self._digits(a), self._digits(b)
        prod = [0] * (2 * e - 1)
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    prod[i + j] = (prod[i + j] + xi * yj) % p
        mod = self.modulus
        for k in range(len(prod) - 1, e - 1, -1):
            c = prod[k]
            if c:
                for i in range(e + 1):
                    prod[k - e + i] = (prod[k - e + i] - c * mod[i]) % p
        return self._undigits(prod[:e])

    def _build_log_tables(self) -> None:
        q = self.q
        for g in range(2, q):
            exp = [1]
            x = g
            while x != 1:
                exp.append(x)
                x = self._slow_mul(x, g)
                if len(exp) > q - 1:
                    break
            if len(exp) == q - 1:
                break
        else:  # pragma: no cover - a primitive element always exists
            raise FieldError("no primitive element found")
        self.generator = g
        self._exp = np.array(exp + exp, dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        log[np.array(exp)] = np.arange(q - 1)
        self._log = log
        self._exp_list = exp
        self._log_list = log.tolist()

    # -- scalar arithmetic ---------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        p, r, s = self.p, 0, 1
        while a or b:
            r += ((a % p + b % p) % p) * s
            a //= p
            b //= p
            s *= p
        return r

    def neg(self, a: int) -> int:
        if self.e == 1:
            return -a % self.p
        p, r, s = self.p, 0, 1
        while a:
            r += (-(a % p) % p) * s
            a //= p
            s *= p
        return r

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp_list[(self._log_list[a] + self._log_list[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in GF(%d)" % self.q)
        if self.e == 1:
            return pow(a, -1, self.p)
        return self._exp_list[(-self._log_list[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        if self.e == 1:
            return pow(a, n, self.p)
        if a == 0:
            return 0 if n > 0 else 1
        return self._exp_list[(self._log_list[a] * n) % (self.q - 1)]

    def from_int(self, n: int) -> int:
        """Image of the integer n in the prime subfield."""
        return n % self.p

    def elements(self) -> range:
        return range(self.q)

    def character(self, a: int) -> int:
        """Quadratic character: 1 on nonzero squares, -1 on nonsquares, 0 at 0."""
        if a == 0:
            return 0
        return 1 if self.pow(a, (self.q - 1) // 2) == 1 else -1

    @functools.cached_property
    def nonsquare(self) -> int:
        """Smallest element (in the int encoding) that is not a square."""
        return next(a for a in range(1, self.q) if self.character(a) == -1)

    # -- vectorised arithmetic on int arrays ----------------------------

    def vadd(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        if self.e == 1:
            return (x + y) % self.p
        p, out, s = self.p, np.zeros(np.broadcast(x, y).shape, dtype=np.int64), 1
        for _ in range(self.e):
            out += ((x // s % p + y // s % p) % p) * s
            s *= p
        return out

    def vneg(self, x: np.ndarray) -> np.ndarray:
        if self.e == 1:
            return -x % self.p
        p, out, s = self.p, np.zeros_like(x), 1
        for _ in range(self.e):
            out += (-(x // s % p) % p) * s
            s *= p
        return out

    def vsub(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return self.vadd(x, self.vneg(y))

    def vmul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        if self.e == 1:
            return x * y % self.p
        x, y = np.broadcast_arrays(np.asarray(x), np.asarray(y))
        zero = (x == 0) | (y == 0)
        out = self._exp[self._log[x] + self._log[y]]
        return np.where(zero, 0, out)

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.e})" if self.e > 1 else f"GF({self.p})"

    def __reduce__(self):
        return (GF, (self.p, self.e))


@functools.lru_cache(maxsize=None)
def _cached_field(p: int, e: int):
    obj = object.__new__(GF)
    obj._setup(p, e)
    return obj


def _make_field(cls, p: int, e: int, bound: int):
    if not isinstance(p, int) or not isinstance(e, int) or e < 1:
        raise FieldError(f"bad field parameters p={p!r}, e={e!r}")
    if p == 2 or not is_prime(p):
        raise FieldError(f"characteristic must be an odd prime, got {p}")
    if p**e > bound:
        raise FieldError(f"q = {p}^{e} exceeds bound {bound}")
    return _cached_field(p, e)


def _first_irreducible_over_prime(p: int, e: int) -> tuple[int, ...]:
    """Lexicographically first monic irreducible of degree e over F_p."""
    from itertools import product

    for low in product(range(p), repeat=e):
        f = list(low) + [1]
        if _irreducible_mod_p(f, p):
            return tuple(f)
    raise FieldError("no irreducible polynomial found")  # pragma: no cover


def _irreducible_mod_p(f: list[int], p: int) -> bool:
    # trial division by all monic polys of degree <= deg f / 2; only used for tiny e
    from itertools import product

    n = len(f) - 1
    if f[0] == 0:
        return n == 1
    for d in range(1, n // 2 + 1):
        for low in product(range(p), repeat=d):
            g = list(low) + [1]
            r = list(f)
            for k in range(n, d - 1, -1):
                c = r[k]
                if c:
                    for i in range(d + 1):
                        r[k - d + i] = (r[k - d + i] - c * g[i]) % p
            if not any(r[:d]):
                return False
    return True
