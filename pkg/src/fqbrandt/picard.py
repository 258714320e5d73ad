"""Divisors on the class set, Hecke action, and the equidistribution experiment."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np

from .classset import ClassSet, ClassSetError, mass_target
from .poly import Poly, coprime_part, sigma0, sigma_n0


@dataclass(frozen=True)
class PicElement:
    """sum_i coeffs[i] e_i."""

    C: ClassSet
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.C.n:
            raise ValueError("coefficient vector has the wrong length")

    @classmethod
    def basis(cls, C: ClassSet, i: int) -> "PicElement":
        return cls(C, tuple(int(k == i) for k in range(C.n)))

    @property
    def degree(self) -> int:
        return sum(self.coeffs)

    def __add__(self, other: "PicElement") -> "PicElement":
        return PicElement(self.C, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __rmul__(self, k: int) -> "PicElement":
        return PicElement(self.C, tuple(k * a for a in self.coeffs))


@dataclass(frozen=True)
class SignedMeasure:
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        if sum(self.weights) != 1:
            raise ValueError("weights must sum to 1")

    def __len__(self) -> int:
        return len(self.weights)


def hecke_action(C: ClassSet, B_m: np.ndarray, e: PicElement) -> PicElement:
    """t_m e for the Brandt matrix B_m = B(m): t_m e_i = sum_j B_ij(m) e_j."""
    M = np.asarray(B_m, dtype=object)
    if M.shape != (C.n, C.n):
        raise ValueError("Brandt matrix of the wrong size")
    v = np.array(e.coeffs, dtype=object).dot(M)
    return PicElement(C, tuple(int(x) for x in v))


def measure_of(e: PicElement) -> SignedMeasure:
    d = e.degree
    if d == 0:
        raise ValueError("divisor of degree 0 has no normalized measure")
    return SignedMeasure(tuple(Fraction(a, d) for a in e.coeffs))


def mass_measure(C: ClassSet) -> SignedMeasure:
    """delta of e* = sum_i e_i / w_i."""
    inv = [Fraction(1, w) for w in C.weights]
    total = sum(inv)
    return SignedMeasure(tuple(x / total for x in inv))


def tv_distance(mu: SignedMeasure, nu: SignedMeasure) -> Fraction:
    """sum_j |mu_j - nu_j|, the sup of |mu(f) - nu(f)| over max|f| <= 1."""
    if len(mu) != len(nu):
        raise ValueError("measures on different sets")
    return sum((abs(a - b) for a, b in zip(mu.weights, nu.weights)), Fraction(0))


# -- experiment ------------------------------------------------------------------------------


@dataclass(frozen=True)
class EquidRow:
    m: Poly
    deg_m_n0: int
    i: int
    distance: Fraction
    ratio: float


@dataclass
class EquidReport:
    q: int
    rows: list[EquidRow]
    bound_C: float

    def degree_maxima(self) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for r in self.rows:
            out[r.deg_m_n0] = max(out.get(r.deg_m_n0, Fraction(0)), r.distance)
        return dict(sorted(out.items()))

    def max_ratio(self, lo: int, hi: int) -> float:
        vals = [r.ratio for r in self.rows if lo <= r.deg_m_n0 <= hi]
        return max(vals) if vals else 0.0

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["m", "deg_m_n0", "i", "tv_distance", "normalized_ratio", "certified_bound_C"])
        for r in self.rows:
            w.writerow([r.m.key(), r.deg_m_n0, r.i + 1, f"{float(r.distance):.12g}", f"{r.ratio:.12g}", f"{self.bound_C:.12g}"])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "certified_bound_C": self.bound_C,
            "rows": [
                {"m": r.m.key(), "deg_m_n0": r.deg_m_n0, "i": r.i + 1, "tv_distance": _frac_text(r.distance)}
                for r in self.rows
            ],
        }


def _frac_text(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def equid_experiment(
    C: ClassSet,
    i: int,
    rows: Mapping[Poly, np.ndarray],
    D: int,
    coprime_only: bool = False,
    calibration_degree: int = 4,
) -> EquidReport:
    """Distances d_i(m) = |delta(t_m e_i) - mu| for every m in ``rows`` with deg m_n0 <= D.

    ``rows[m]`` is row i of B(m) (a length-n vector).  The constant C is the
    largest normalized ratio d_i(m) q^(deg m_n0 / 2) / sigma0(m_n0) over
    deg m_n0 <= calibration_degree.
    """
    mu = mass_measure(C)
    q = C.q
    out = []
    for m in sorted(rows, key=lambda f: (f.deg, f.c)):
        mc = coprime_part(m, C.n0)
        if mc.deg > D or (coprime_only and mc != m):
            continue
        row = [int(x) for x in np.asarray(rows[m]).reshape(-1)]
        s = sigma_n0(m, C.n0)
        if sum(row) != s or min(row) < 0:
            raise ClassSetError(f"row {i} of B({m}) is not a measure of mass sigma(m)")
        e = PicElement(C, tuple(row))
        delta = measure_of(e)
        d = tv_distance(delta, mu)
        # the summands of d are exactly |B_ij(m)/sigma(m) - (1/w_j)/deg e*|
        assert d == sum(abs(Fraction(b, s) - w) for b, w in zip(row, mu.weights))
        ratio = float(d) * q ** (mc.deg / 2) / sigma0(mc)
        out.append(EquidRow(m, mc.deg, i, d, ratio))
    calib = [r.ratio for r in out if r.deg_m_n0 <= calibration_degree]
    return EquidReport(q, out, max(calib) if calib else 0.0)


def decay_verdict(report: EquidReport, calibration_degree: int = 4, first: int = 2) -> tuple[bool, bool]:
    """(ratios bounded by C beyond the calibration range, per-degree maxima weakly decreasing from ``first``)."""
    C = report.bound_C
    bounded = all(r.ratio <= C * (1 + 1e-12) for r in report.rows)
    maxima = [v for d, v in report.degree_maxima().items() if d >= first]
    decreasing = all(a >= b for a, b in zip(maxima, maxima[1:]))
    return bounded, decreasing


def supersingular_report(C: ClassSet) -> list[tuple[str, Fraction]]:
    """Weights (q^2 - 1)/(q^deg p - 1) / w_i on the supersingular points phi_i."""
    target = mass_target(C.n0)
    if target is None:
        raise ClassSetError("n0 is not prime")
    weights = [Fraction(1, w) / target for w in C.weights]
    if tuple(weights) != mass_measure(C).weights:
        raise ClassSetError("mass-formula normalization disagrees with the class set")
    return [(f"phi_{k + 1}", x) for k, x in enumerate(weights)]


def row_dicts(rows: Mapping[Poly, np.ndarray], a: int = 0) -> dict[Poly, np.ndarray]:
    """Pick row ``a`` out of the (k, n) arrays returned by ``brandt_rows``."""
    return {m: np.asarray(v)[a] for m, v in rows.items()}



def spectral_ratio_bound(C: ClassSet, B_gen: np.ndarray, i: int) -> float:
    """Floating-point diagnostic: sum over non-Eisenstein eigenvectors v_k of |c_k| |v_k|_1,
    where e_i = sum c_k v_k in a common left eigenbasis of the Brandt matrices.

    Given the Ramanujan bound |lambda_k(m)| <= sigma0(m) q^(deg m / 2) and
    sigma(m) >= q^deg m, every normalized ratio for m coprime to n0 is at most
    this number.  ``B_gen`` must have distinct eigenvalues (e.g. B(P) for a
    small prime P) so that its eigenbasis is shared by all B(m).
    """
    M = np.asarray(B_gen, dtype=float)
    vals, vecs = np.linalg.eig(M.T)
    if np.min(np.abs(vals[:, None] - vals[None, :]) + np.eye(len(vals)) * 1e9) < 1e-6:
        raise ValueError("generator has repeated eigenvalues")
    coeffs = np.linalg.solve(vecs, np.eye(C.n)[i])
    top = int(np.argmax(vals.real))
    return float(sum(abs(coeffs[k]) * np.abs(vecs[:, k]).sum() for k in range(C.n) if k != top))
