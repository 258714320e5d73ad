"""Counting lattice elements by exact reduced norm, vectorised with numpy.

Both counters return an array ``counts`` of length q**(E+1) where
``counts[v]`` is the number of x in L with den(L)**2 * Nr(x) equal to the
polynomial encoded by v (coefficient k contributes ``c_k * q**k``), over
all values of degree <= E.

* :func:`norm_counts_box` enumerates the coefficient box of a reduced basis.
* :func:`norm_counts_split` splits the norm form as x0^2 - a x1^2 plus
  -b (x2^2 - a x3^2), enumerates each half on cosets of the two binary
  sublattices, and convolves over the additive group of F_q[t]_{<=E} with
  an exact number-theoretic transform.  It touches ~q^(E/2) vectors per
  coset instead of ~q^E, which is what makes degree-10 Brandt rows cheap.
"""

from __future__ import annotations

import functools
from itertools import product

import numpy as np

from .field import GF, is_prime
from .lattice import Lattice, LatticeError, hermite_rows, reduce_rows
from .poly import Poly


def diag_coeffs(L: Lattice) -> list[Poly]:
    a, b = L.A.a, L.A.b
    return [Poly(a.F, (1,)), -a, -b, a * b]


# -- batched polynomial arithmetic ----------------------------------------------------


def _as_array(f: Poly, length: int) -> np.ndarray:
    out = np.zeros(length, dtype=np.int64)
    out[: len(f.c)] = f.c
    return out


def bmul(F: GF, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Row-wise product of coefficient arrays (last axis = coefficients)."""
    a, b = X.shape[-1], Y.shape[-1]
    shape = np.broadcast_shapes(X.shape[:-1], Y.shape[:-1]) + (a + b - 1,)
    out = np.zeros(shape, dtype=np.int64)
    if F.e == 1:
        for i in range(a):
            out[..., i : i + b] += X[..., i : i + 1] * Y
        return out % F.p
    for i in range(a):
        out[..., i : i + b] = F.vadd(out[..., i : i + b], F.vmul(X[..., i : i + 1], Y))
    return out


def badd(F: GF, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    n = max(X.shape[-1], Y.shape[-1])
    X = _pad(X, n)
    Y = _pad(Y, n)
    return F.vadd(X, Y)


def _pad(X: np.ndarray, n: int) -> np.ndarray:
    if X.shape[-1] == n:
        return X
    pad = [(0, 0)] * (X.ndim - 1) + [(0, n - X.shape[-1])]
    return np.pad(X, pad)


def all_polys(F: GF, d: int) -> np.ndarray:
    """Array (q**(d+1), d+1) of every polynomial of degree <= d; d < 0 gives [[0]]."""
    if d < 0:
        return np.zeros((1, 1), dtype=np.int64)
    q = F.q
    idx = np.arange(q ** (d + 1), dtype=np.int64)
    cols = [(idx // q**k) % q for k in range(d + 1)]
    return np.stack(cols, axis=1)


def encode(F: GF, V: np.ndarray, E: int) -> np.ndarray:
    """Index of each coefficient row; rows of degree > E must be zero-padded away first."""
    q = F.q
    V = V[..., : E + 1]
    weights = q ** np.arange(V.shape[-1], dtype=np.int64)
    return (V * weights).sum(axis=-1)


def _degree_ok(V: np.ndarray, E: int) -> np.ndarray:
    if V.shape[-1] <= E + 1:
        return np.ones(V.shape[:-1], dtype=bool)
    return ~np.any(V[..., E + 1 :], axis=-1)


def _diag_form(F: GF, X: np.ndarray, coeffs: list[np.ndarray]) -> np.ndarray:
    """sum_k coeffs[k] * X[..., k, :]^2."""
    acc = None
    for k, c in enumerate(coeffs):
        xk = X[..., k, :]
        term = bmul(F, bmul(F, xk, xk), c)
        acc = term if acc is None else badd(F, acc, term)
    return acc


# -- route 1: reduced-basis box ---------------------------------------------------------


def norm_counts_box(L: Lattice, E: int, chunk: int = 1 << 18) -> np.ndarray:
    F = L.A.F
    coeffs = diag_coeffs(L)
    form = lambda x, y: sum((c * (u * v) for c, u, v in zip(coeffs, x, y)), Poly(F))  # noqa: E731
    rows = reduce_rows(list(L.rows), form, F)
    degs = [form(r, r).deg for r in rows]
    width = max(max((x.deg or 0) for x in r) for r in rows) + 1
    parts = []
    for r, dk in zip(rows, degs):
        C = all_polys(F, (E - dk) // 2 if E >= dk else -1)
        vec = np.stack([_as_array(x, width) for x in r])  # (4, width)
        parts.append(bmul(F, C[:, None, :], vec[None, :, :]))  # (n_k, 4, w)
    wmax = max(p.shape[-1] for p in parts)
    parts = [_pad(p, wmax) for p in parts]
    inner = F.vadd(parts[2][:, None], parts[3][None, :]).reshape(-1, 4, wmax)
    outer = F.vadd(parts[0][:, None], parts[1][None, :]).reshape(-1, 4, wmax)
    cvec = [_as_array(c, c.deg + 1) for c in coeffs]
    counts = np.zeros(F.q ** (E + 1), dtype=np.int64)
    step = max(1, chunk // max(1, inner.shape[0]))
    for s in range(0, outer.shape[0], step):
        X = F.vadd(outer[s : s + step, None], inner[None, :]).reshape(-1, 4, wmax)
        V = _diag_form(F, X, cvec)
        ok = _degree_ok(V, E)
        counts += np.bincount(encode(F, V[ok], E), minlength=counts.size)
    return counts


# -- route 2: orthogonal split + exact transform --------------------------------------------


@functools.lru_cache(maxsize=None)
def ntt_params(p: int) -> tuple[int, int]:
    """(P, zeta): a prime P with p * P**2 < 2**63, p | P - 1, zeta a primitive p-th root of unity."""
    k = int(((2**63 - 1) // p) ** 0.5) // p
    while True:
        P = k * p + 1
        if p * P * P < 2**63 and is_prime(P):
            break
        k -= 1
    for g in range(2, P):
        z = pow(g, (P - 1) // p, P)
        if z != 1:
            return P, z
    raise AssertionError("unreachable")  # pragma: no cover


@functools.lru_cache(maxsize=None)
def _dft_matrix(p: int, inverse: bool) -> np.ndarray:
    P, z = ntt_params(p)
    if inverse:
        z = pow(z, P - 2, P)
    return np.array([[pow(z, j * k, P) for j in range(p)] for k in range(p)], dtype=np.int64)


def group_transform(a: np.ndarray, p: int, inverse: bool = False) -> np.ndarray:
    """Fourier transform over (Z/p)^K mod P, K = log_p(len(a))."""
    P, _ = ntt_params(p)
    W = _dft_matrix(p, inverse)
    n = a.size
    K = round(np.log(n) / np.log(p)) if n > 1 else 0
    if p**K != n:
        raise ValueError("length is not a power of p")
    a = (a.astype(np.int64) % P).reshape((p,) * K)
    for _ in range(K):
        # contracting the leading axis appends the new one at the end: K steps restore the order
        a = np.tensordot(a, W, axes=([0], [1])) % P
    a = a.reshape(n)
    if inverse:
        a = a * pow(n % P, P - 2, P) % P
    return a


def _binary_basis_coords(k1, k2, s):
    """Polynomial parts (q1, q2) of the coordinates of s on the basis k1, k2."""
    delta = k1[0] * k2[1] - k1[1] * k2[0]
    n1 = s[0] * k2[1] - s[1] * k2[0]
    n2 = k1[0] * s[1] - k1[1] * s[0]
    return n1 // delta, n2 // delta


def _coset_values(F: GF, basis, shift, coeffs: list[Poly], E: int) -> np.ndarray:
    """Coefficient rows of Q(shift + c1 k1 + c2 k2), Q = sum coeffs[i] x_i^2, over the box, degree <= E."""
    form = lambda x, y: sum((c * (u * v) for c, u, v in zip(coeffs, x, y)), Poly(F))  # noqa: E731
    k1, k2 = reduce_rows(list(basis), form, F)
    q1, q2 = _binary_basis_coords(k1, k2, shift)
    s = [shift[i] - q1 * k1[i] - q2 * k2[i] for i in range(2)]
    d1, d2 = form(k1, k1).deg, form(k2, k2).deg
    width = max(max((x.deg or 0) for x in v) for v in (k1, k2, s)) + 1
    parts = []
    for k, dk in ((k1, d1), (k2, d2)):
        C = all_polys(F, (E - dk) // 2 if E >= dk else -1)
        vec = np.stack([_as_array(x, width) for x in k])
        parts.append(bmul(F, C[:, None, :], vec[None, :, :]))
    w = max(p.shape[-1] for p in parts)
    X = F.vadd(_pad(parts[0], w)[:, None], _pad(parts[1], w)[None, :]).reshape(-1, 2, w)
    sv = np.stack([_as_array(x, w) for x in s])
    X = F.vadd(X, sv[None])
    V = _diag_form(F, X, [_as_array(c, c.deg + 1) for c in coeffs])
    V = V[_degree_ok(V, E), : E + 1]
    return _pad(V, E + 1)


def _bucket(F: GF, V: np.ndarray, scale: Poly, D: int, negate: bool) -> dict[int, np.ndarray]:
    """Split rows v = scale * a + r by the residue r (negated if asked): r -> counts over a."""
    ds = scale.deg
    sv = np.array(scale.c, dtype=np.int64)
    V = V.copy()
    for k in range(V.shape[1] - 1, ds - 1, -1):
        lead = V[:, k : k + 1].copy()
        V[:, k - ds : k + 1] = F.vsub(V[:, k - ds : k + 1], F.vmul(lead, sv[None, :]))
        V[:, k] = lead[:, 0]  # the quotient coefficient of t^(k - ds), parked in the freed slot
    R = V[:, :ds]
    if negate:
        R = F.vneg(R)
    ridx = encode(F, R, ds - 1) if ds else np.zeros(len(V), dtype=np.int64)
    aidx = encode(F, V[:, ds : ds + D + 1], D)
    out = {}
    size = F.q ** (D + 1)
    for r in np.unique(ridx):
        out[int(r)] = np.bincount(aidx[ridx == r], minlength=size)
    return out


def split_cosets(L: Lattice):
    """Decompose den*L against the planes <1, i> and <j, ij>.

    Returns (K1, K2, reps): bases of the two plane sublattices and a list of
    (s1, s2) coset representatives with den*L = union over reps of
    (s1 + K1) x (s2 + K2).
    """
    F = L.A.F
    rows = [list(r) for r in L.rows]
    H1 = hermite_rows(rows, 4)
    K2 = [tuple(H1[2][2:]), tuple(H1[3][2:])]
    H2 = hermite_rows([r[2:] + r[:2] for r in rows], 4)
    K1 = [tuple(H2[2][2:]), tuple(H2[3][2:])]
    p00, p01, p11 = H1[0][0], H1[0][1], H1[1][1]
    T = []
    for v in K1:
        c0, r0 = divmod(v[0], p00)
        c1, r1 = divmod(v[1] - c0 * p01, p11)
        if r0 or r1:
            raise LatticeError("plane sublattice not inside the projection")
        T.append([c0, c1])
    (alpha, _), (_, gamma) = hermite_rows(T, 2)
    us = [Poly(F, c) for c in product(range(F.q), repeat=alpha.deg)] if alpha.deg else [Poly(F)]
    vs = [Poly(F, c) for c in product(range(F.q), repeat=gamma.deg)] if gamma.deg else [Poly(F)]
    reps = []
    for u in us:
        for v in vs:
            m = [u * x + v * y for x, y in zip(H1[0], H1[1])]
            reps.append((tuple(m[:2]), tuple(m[2:])))
    return K1, K2, reps


def norm_counts_split(L: Lattice, D: int, scale: Poly | None = None) -> np.ndarray:
    F = L.A.F
    a, b = L.A.a, L.A.b
    one = Poly(F, (1,))
    scale = scale if scale is not None else one
    E = D + scale.deg
    K1, K2, reps = split_cosets(L)
    P, _ = ntt_params(F.p)
    acc = np.zeros(F.q ** (D + 1), dtype=np.int64)
    total = 0  # bound on every entry of the result
    for s1, s2 in reps:
        b1 = _bucket(F, _coset_values(F, K1, s1, [one, -a], E), scale, D, False)
        b2 = _bucket(F, _coset_values(F, K2, s2, [-b, a * b], E), scale, D, True)
        for r in b1.keys() & b2.keys():
            # each output entry of this convolution is at most min(S1 M2, M1 S2)
            x, y = b1[r], b2[r]
            total += min(int(x.sum()) * int(y.max()), int(x.max()) * int(y.sum()))
            acc = (acc + group_transform(b1[r], F.p) * group_transform(b2[r], F.p) % P) % P
    if total >= P:
        raise OverflowError("count exceeds the transform modulus; use the box method")
    return group_transform(acc, F.p, inverse=True)


def norm_counts_box_scaled(L: Lattice, D: int, scale: Poly | None = None) -> np.ndarray:
    F = L.A.F
    scale = scale if scale is not None else Poly(F, (1,))
    E = D + scale.deg
    full = norm_counts_box(L, E)
    A = all_polys(F, D)
    idx = encode(F, _pad(bmul(F, A, np.array(scale.c, dtype=np.int64)[None, :]), E + 1), E)
    return full[idx]


def norm_counts(L: Lattice, D: int, method: str = "split", scale: Poly | None = None) -> np.ndarray:
    """counts[a] = #{x in L : den(L)^2 Nr(x) = scale * a}, over all a of degree <= D.

    The index of a is sum_k a_k q^k; index 0 counts x = 0.
    """
    if method == "split":
        return norm_counts_split(L, D, scale)
    if method == "box":
        return norm_counts_box_scaled(L, D, scale)
    raise ValueError(f"unknown counting method {method!r}")
