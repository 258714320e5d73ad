"""JSON persistence for class sets and cached Brandt data.

Exact rationals are written as "num/den" strings and polynomials as compact
keys (see ``Poly.key``).  Every write goes to a temporary file that is then
renamed into place, and output is key-sorted so reruns are byte-identical.
"""

from __future__ import annotations

import json
import os
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Optional

import numpy as np

from .classset import ClassSet, ClassSetError
from .field import GF
from .lattice import lattice_from_json, lattice_to_json
from .poly import Frac, Poly, enumerate_monic, sigma_n0
from .quat import QuatAlgebra

FORMAT_VERSION = 1


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def atomic_write(path: Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def frac_text(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


# -- class sets ---------------------------------------------------------------------------


def classset_to_json(C: ClassSet) -> dict:
    F = C.F
    return {
        "format": FORMAT_VERSION,
        "p": F.p,
        "e": F.e,
        "q": F.q,
        "n0": C.n0.key(),
        "n0_text": str(C.n0),
        "algebra": {"a": C.A.a.key(), "b": C.A.b.key()},
        "order": lattice_to_json(C.R),
        "classes": [
            {
                "index": k + 1,
                "ideal": lattice_to_json(I),
                "right_order": lattice_to_json(O),
                "norm": {"num": nr.num.key(), "den": nr.den.key()},
                "unit_count": u,
                "weight": w,
            }
            for k, (I, O, nr, u, w) in enumerate(zip(C.ideals, C.right_orders, C.norms, C.unit_counts, C.weights))
        ],
        "n": C.n,
        "mass": frac_text(C.mass),
        "certified": C.certified,
    }


def classset_from_json(data: dict) -> ClassSet:
    F = GF(data["p"], data["e"])
    A = QuatAlgebra(Poly.from_key(F, data["algebra"]["a"]), Poly.from_key(F, data["algebra"]["b"]))
    cls = data["classes"]
    C = ClassSet(
        A=A,
        n0=Poly.from_key(F, data["n0"]),
        R=lattice_from_json(A, data["order"]),
        ideals=[lattice_from_json(A, c["ideal"]) for c in cls],
        right_orders=[lattice_from_json(A, c["right_order"]) for c in cls],
        unit_counts=[int(c["unit_count"]) for c in cls],
        norms=[Frac(Poly.from_key(F, c["norm"]["num"]), Poly.from_key(F, c["norm"]["den"])) for c in cls],
        certified=bool(data["certified"]),
    )
    if frac_text(C.mass) != data["mass"]:
        raise ClassSetError("stored mass disagrees with the stored weights")
    return C


def save_classset(C: ClassSet, path: Path) -> None:
    atomic_write(path, dumps(classset_to_json(C)))


def load_classset(path: Path) -> ClassSet:
    with open(path, encoding="utf-8") as fh:
        return classset_from_json(json.load(fh))


# -- Brandt cache -----------------------------------------------------------------------------


class BrandtCache:
    """Full matrices in ``<root>/<n0 key>/brandt_deg<d>.json``; single rows in ``row<i>_deg<d>.json``.

    One file per degree holds every monic m of that degree.  Loading checks
    the row-sum invariant of every matrix or row.
    """

    def __init__(self, root: Path, C: ClassSet):
        self.C = C
        self.dir = Path(root) / C.n0.key().replace(",", "_").replace(":", "-")

    def _matrix_path(self, d: int) -> Path:
        return self.dir / f"brandt_deg{d}.json"

    def _row_path(self, i: int, d: int) -> Path:
        return self.dir / f"row{i + 1}_deg{d}.json"

    def has_matrices(self, d: int) -> bool:
        return self._matrix_path(d).exists()

    def has_rows(self, i: int, d: int) -> bool:
        return self._row_path(i, d).exists() or self.has_matrices(d)

    def store_matrices(self, B: Mapping[Poly, np.ndarray], degrees) -> None:
        for d in degrees:
            entries = [
                {"m": m.key(), "matrix": np.asarray(B[m]).tolist()}
                for m in sorted((m for m in B if m.deg == d), key=lambda f: f.c)
            ]
            atomic_write(self._matrix_path(d), dumps({"n0": self.C.n0.key(), "degree": d, "entries": entries}))

    def store_rows(self, i: int, rows: Mapping[Poly, np.ndarray], degrees) -> None:
        for d in degrees:
            entries = [
                {"m": m.key(), "row": np.asarray(rows[m]).reshape(-1).tolist()}
                for m in sorted((m for m in rows if m.deg == d), key=lambda f: f.c)
            ]
            atomic_write(self._row_path(i, d), dumps({"n0": self.C.n0.key(), "degree": d, "row": i + 1, "entries": entries}))

    def _read(self, path: Path) -> dict:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        if data["n0"] != self.C.n0.key():
            raise ClassSetError(f"{path} belongs to a different level")
        return data

    def load_matrices(self, D: int) -> dict[Poly, np.ndarray]:
        F, n = self.C.F, self.C.n
        out = {}
        for d in range(D + 1):
            data = self._read(self._matrix_path(d))
            for e in data["entries"]:
                m = Poly.from_key(F, e["m"])
                M = np.array(e["matrix"], dtype=np.int64)
                if M.shape != (n, n):
                    raise ClassSetError(f"cached B({m}) has shape {M.shape}")
                self._validate(m, M)
                out[m] = M
            self._complete(out, d)
        return out

    def load_rows(self, i: int, D: int) -> dict[Poly, np.ndarray]:
        F = self.C.F
        out = {}
        for d in range(D + 1):
            if self.has_matrices(d):
                data = self._read(self._matrix_path(d))
                items = [(e["m"], e["matrix"][i]) for e in data["entries"]]
            else:
                data = self._read(self._row_path(i, d))
                items = [(e["m"], e["row"]) for e in data["entries"]]
            for key, row in items:
                m = Poly.from_key(F, key)
                v = np.array(row, dtype=np.int64)
                self._validate(m, v[None, :])
                out[m] = v
            self._complete(out, d)
        return out

    def _validate(self, m: Poly, M: np.ndarray) -> None:
        s = sigma_n0(m, self.C.n0)
        if np.any(M < 0) or np.any(M.sum(axis=1) != s):
            raise ClassSetError(f"cached data for m = {m} fails the row-sum check (expected {s})")

    def _complete(self, out: dict, d: int) -> None:
        missing = [m for m in enumerate_monic(self.C.F, d) if m not in out]
        if missing:
            raise ClassSetError(f"cache for degree {d} is missing {len(missing)} entries, e.g. {missing[0]}")


def default_cache_root(out: Optional[Path]) -> Path:
    return Path(out or ".") / "cache"
