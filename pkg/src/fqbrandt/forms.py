"""Fourier-coefficient data of theta series, the Eisenstein series and their cuspidal parts.

A series is stored as a constant-term scale kappa plus a map from monic m to
c(m).  The two-parameter coefficients are derived: c(r, 0) = kappa q^-r and,
for lambda != 0 generating m, c(r, lambda) = q^(deg lambda + 2 - r) c(m) when
deg lambda + 2 <= r and 0 otherwise.

The constant term of Theta_ij is taken to be q^-r / w_j (not q^-r w_j); only
this choice makes E = sum_j Theta_ij carry the constant q^-r * mass and makes
the cuspidal projection below have vanishing constant term.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np
import sympy

from .classset import ClassSet, ClassSetError, Report
from .poly import Poly, gcd, irreducibles, sigma0, sigma_n0


@dataclass(frozen=True)
class CoefficientSeries:
    level: Poly
    kappa: Fraction
    coeffs: Mapping[Poly, Fraction]
    degree: int

    @property
    def q(self) -> int:
        return self.level.F.q

    def __getitem__(self, m: Poly) -> Fraction:
        return self.coeffs[m]

    def __sub__(self, other: "CoefficientSeries") -> "CoefficientSeries":
        return _combine(self, other, Fraction(-1))

    def __add__(self, other: "CoefficientSeries") -> "CoefficientSeries":
        return _combine(self, other, Fraction(1))

    def scaled(self, k: Fraction) -> "CoefficientSeries":
        return CoefficientSeries(self.level, k * self.kappa, {m: k * v for m, v in self.coeffs.items()}, self.degree)

    def to_json(self) -> dict:
        return {
            "level": self.level.key(),
            "kappa": _ftext(self.kappa),
            "degree": self.degree,
            "coefficients": [{"m": m.key(), "c": _ftext(v)} for m, v in sorted(self.coeffs.items(), key=_mkey)],
        }

    @classmethod
    def from_json(cls, F, data: dict) -> "CoefficientSeries":
        return cls(
            Poly.from_key(F, data["level"]),
            Fraction(data["kappa"]),
            {Poly.from_key(F, e["m"]): Fraction(e["c"]) for e in data["coefficients"]},
            data["degree"],
        )


def _mkey(item):
    return (item[0].deg, item[0].c)


def _ftext(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _combine(f: CoefficientSeries, g: CoefficientSeries, sign: Fraction) -> CoefficientSeries:
    if f.level != g.level:
        raise ValueError("series of different levels")
    D = min(f.degree, g.degree)
    keys = [m for m in f.coeffs if m.deg <= D]
    return CoefficientSeries(f.level, f.kappa + sign * g.kappa, {m: f[m] + sign * g[m] for m in keys}, D)


def _scale(q: int, m: Poly) -> Fraction:
    return Fraction(1, q ** (m.deg + 2))


def theta_series(C: ClassSet, B: Mapping[Poly, np.ndarray], i: int, j: int, D: int) -> CoefficientSeries:
    """c(m) = q^-(deg m + 2) B_ij(m), kappa = 1/w_j."""
    q = C.q
    coeffs = {m: _scale(q, m) * int(M[i, j]) for m, M in B.items() if m.deg <= D}
    return CoefficientSeries(C.n0, Fraction(1, C.weights[j]), coeffs, D)


def eisenstein_series(C: ClassSet, B: Mapping[Poly, np.ndarray], D: int) -> CoefficientSeries:
    """c(m) = q^-(deg m + 2) sigma_n0(m), kappa = mass."""
    q = C.q
    coeffs = {m: _scale(q, m) * sigma_n0(m, C.n0) for m in B if m.deg <= D}
    return CoefficientSeries(C.n0, C.mass, coeffs, D)


def cuspidal_part(C: ClassSet, B: Mapping[Poly, np.ndarray], i: int, j: int, D: int) -> CoefficientSeries:
    """g_ij = Theta_ij - E / (w_j mass)."""
    k = Fraction(1, C.weights[j]) / C.mass
    return theta_series(C, B, i, j, D) - eisenstein_series(C, B, D).scaled(k)


def evaluate(f: CoefficientSeries, r: int, lam: Poly) -> Fraction:
    q = f.q
    if not lam:
        return f.kappa / Fraction(q) ** r
    if lam.deg > f.degree:
        raise ValueError(f"deg {lam.deg} is beyond the computed degree {f.degree}")
    if lam.deg + 2 > r:
        return Fraction(0)
    return Fraction(q) ** (lam.deg + 2 - r) * f[lam.monic()]


# -- checks --------------------------------------------------------------------------------


def decomposition_check(C: ClassSet, B: Mapping[Poly, np.ndarray], D: int) -> Report:
    """Theta_ij = g_ij + E/(w_j mass), kappa(g) = 0, sum_j Theta_ij = E for each i, sum_j g_ij = 0."""
    rep = Report("theta / Eisenstein / cuspidal decomposition")
    E = eisenstein_series(C, B, D)
    for i in range(C.n):
        row_total = None
        g_total = None
        for j in range(C.n):
            T = theta_series(C, B, i, j, D)
            g = cuspidal_part(C, B, i, j, D)
            k = Fraction(1, C.weights[j]) / C.mass
            rep.checked += 1
            if g.kappa != 0:
                rep.fail(f"kappa(g_{i + 1}{j + 1}) = {g.kappa}")
            back = g + E.scaled(k)
            if back.kappa != T.kappa or dict(back.coeffs) != dict(T.coeffs):
                rep.fail(f"Theta_{i + 1}{j + 1} != g + E/(w mass)")
            for m, v in g.coeffs.items():
                rebuilt = v * C.q ** (m.deg + 2) + Fraction(sigma_n0(m, C.n0)) * k
                if rebuilt != int(B[m][i, j]):
                    rep.fail(f"B_{i + 1}{j + 1}({m}) not recovered from g")
            row_total = T if row_total is None else row_total + T
            g_total = g if g_total is None else g_total + g
        rep.checked += 1
        if row_total.kappa != E.kappa or dict(row_total.coeffs) != dict(E.coeffs):
            rep.fail(f"sum_j Theta_{i + 1}j != E")
        if g_total.kappa != 0 or any(g_total.coeffs.values()):
            rep.fail(f"sum_j g_{i + 1}j != 0")
    return rep


def hecke_covariance_check(C: ClassSet, B: Mapping[Poly, np.ndarray], D: int) -> Report:
    """sum_k B_ik(m) c_{Theta_kj}(a) = q^-(deg a + 2) B_ij(m a) for coprime m, a."""
    rep = Report("Hecke covariance of theta coefficients")
    q = C.q
    thetas = [[theta_series(C, B, k, j, D) for j in range(C.n)] for k in range(C.n)]
    ms = sorted((m for m in B if m.deg <= D), key=lambda f: (f.deg, f.c))
    for m in ms:
        for a in ms:
            if m.deg + a.deg > D or not gcd(m, a).is_one():
                continue
            for i in range(C.n):
                for j in range(C.n):
                    rep.checked += 1
                    lhs = sum((int(B[m][i, k]) * thetas[k][j][a] for k in range(C.n)), Fraction(0))
                    if lhs != _scale(q, a) * int(B[m * a][i, j]):
                        rep.fail(f"covariance fails at m={m}, a={a}, ({i + 1},{j + 1})")
    return rep


@dataclass
class RamanujanTable:
    rows: list[tuple[Poly, int, int, Fraction, float]]  # (m, i, j, |c| numerator form, rho)

    def degree_maxima(self) -> dict[int, float]:
        out: dict[int, float] = {}
        for m, _, _, _, rho in self.rows:
            out[m.deg] = max(out.get(m.deg, 0.0), rho)
        return dict(sorted(out.items()))

    @property
    def overall_max(self) -> float:
        return max((r[-1] for r in self.rows), default=0.0)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["m", "deg", "i", "j", "deviation", "rho"])
        for m, i, j, dev, rho in self.rows:
            w.writerow([m.key(), m.deg, i + 1, j + 1, _ftext(dev), f"{rho:.12g}"])
        return buf.getvalue()


def ramanujan_table(C: ClassSet, B: Mapping[Poly, np.ndarray], D: int, pairs=None) -> RamanujanTable:
    """rho(m) = |B_ij(m) - sigma(m)/(w_j mass)| q^(-deg m / 2) / sigma0(m) from the cuspidal coefficients."""
    q = C.q
    pairs = pairs if pairs is not None else [(i, j) for i in range(C.n) for j in range(C.n)]
    rows = []
    for i, j in pairs:
        g = cuspidal_part(C, B, i, j, D)
        if g.kappa != 0:
            raise ClassSetError("ramanujan_table needs a cuspidal series")
        for m in sorted(g.coeffs, key=lambda f: (f.deg, f.c)):
            dev = abs(g[m] * q ** (m.deg + 2))
            rho = float(dev) / (q ** (m.deg / 2) * sigma0(m))
            rows.append((m, i, j, dev, rho))
    return RamanujanTable(rows)


@dataclass
class SpectralResult:
    prime: Poly
    sigma: int
    charpoly: list[int]  # coefficients, highest degree first
    cofactor: list[int]
    bound_sq: int  # the bound is sqrt(bound_sq) = 2 q^(deg/2)
    real_rooted: bool
    within_bound: bool
    eisenstein_multiplicity: int

    @property
    def ok(self) -> bool:
        return self.real_rooted and self.within_bound


def spectral_check(C: ClassSet, B_q: np.ndarray, Q: Poly) -> SpectralResult:
    """Certify that the non-Eisenstein eigenvalues of B(Q) lie in [-2 q^(d/2), 2 q^(d/2)].

    Exact: integer characteristic polynomial, then Sturm counting of the roots
    of the squarefree part of h(sqrt Y) h(-sqrt Y) in [0, 4 q^d].
    """
    if Q.divides(C.n0):
        raise ValueError("Q must not divide n0")
    X, Y = sympy.symbols("X Y")
    M = sympy.Matrix(np.asarray(B_q, dtype=object).tolist())
    chi = sympy.Poly(M.charpoly(X).as_expr(), X)
    s = sigma_n0(Q, C.n0)
    h, rem = sympy.div(chi, sympy.Poly(X - s, X))
    if not rem.is_zero:
        raise ClassSetError(f"X - {s} does not divide the characteristic polynomial of B({Q})")
    mult, rest = 1, h
    while rest.degree() > 0 and rest.eval(s) == 0:
        rest = sympy.div(rest, sympy.Poly(X - s, X))[0]
        mult += 1
    bound_sq = 4 * C.q**Q.deg
    if h.degree() <= 0:
        return SpectralResult(Q, s, _ints(chi), _ints(h), bound_sq, True, True, mult)
    sq = sympy.Poly(sympy.sqf_part(h.as_expr()), X)
    real_rooted = sq.count_roots() == sq.degree()
    even = sympy.Poly(sympy.expand(h.as_expr() * h.as_expr().subs(X, -X)), X)
    G = sympy.Poly(sum(c * Y ** (k // 2) for (k,), c in even.terms()), Y)
    Gs = sympy.Poly(sympy.sqf_part(G.as_expr()), Y)
    within = Gs.count_roots(0, bound_sq) == Gs.degree()
    return SpectralResult(Q, s, _ints(chi), _ints(h), bound_sq, real_rooted, within, mult)


def _ints(P) -> list[int]:
    return [int(c) for c in P.all_coeffs()]


def spectral_report(C: ClassSet, B: Mapping[Poly, np.ndarray], max_degree: int) -> list[SpectralResult]:
    out = []
    for d in range(1, max_degree + 1):
        for Q in irreducibles(C.F, d):
            if not Q.divides(C.n0):
                out.append(spectral_check(C, B[Q], Q))
    return out
