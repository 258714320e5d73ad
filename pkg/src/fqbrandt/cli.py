"""Command-line front end: build | brandt | check | equid | ramanujan.

Exit codes: 0 success, 1 a checked identity or criterion failed, 2 bad
configuration or missing inputs.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .classset import (
    ClassSetError,
    brandt_identities,
    brandt_matrices,
    brandt_rows,
    check_anchor,
    check_symmetry,
    enumerate_classes,
    reduction_identity_check,
)
from .field import GF, FieldError
from .forms import decomposition_check, hecke_covariance_check, ramanujan_table, spectral_report
from .lattice import Lattice, LatticeError, maximalize
from .persist import BrandtCache, atomic_write, dumps, load_classset, save_classset
from .picard import decay_verdict, equid_experiment, row_dicts, spectral_ratio_bound, supersingular_report
from .poly import irreducibles, is_irreducible, parse_poly
from .quat import QuatError, build_definite_algebra

log = logging.getLogger("fqbrandt")


class ConfigError(ValueError):
    pass


class CheckFailed(RuntimeError):
    pass


@dataclass
class RunConfig:
    p: int = 3
    e: int = 1
    n0: list[str] = field(default_factory=lambda: ["t"])
    max_brandt_degree: int = 6
    source_index: int = 1
    out: str = "out"
    cache: Optional[str] = None
    seed: int = 0
    jobs: int = 1
    class_degree_budget: int = 4
    method: str = "split"

    @property
    def cache_dir(self) -> Path:
        return Path(self.cache) if self.cache else Path(self.out) / "cache"

    def validate(self):
        try:
            F = GF(self.p, self.e)
        except FieldError as exc:
            raise ConfigError(str(exc)) from exc
        if len(self.n0) != 1:
            raise ConfigError("n0 must list exactly one irreducible polynomial")
        try:
            n0 = parse_poly(F, self.n0[0])
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if not n0 or not n0.is_monic() or not is_irreducible(n0):
            raise ConfigError(f"n0 = {n0} is not monic irreducible")
        if self.max_brandt_degree < 2:
            raise ConfigError("max_brandt_degree must be at least 2")
        if self.method not in ("split", "box"):
            raise ConfigError(f"unknown method {self.method!r}")
        if self.jobs < 1:
            raise ConfigError("jobs must be positive")
        return F, n0


def load_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        if isinstance(data.get("n0"), str):
            data["n0"] = [data["n0"]]
        known = set(asdict(cfg))
        extra = set(data) - known
        if extra:
            raise ConfigError(f"unknown config keys: {sorted(extra)}")
        cfg = RunConfig(**{**asdict(cfg), **data})
    overrides = {
        "p": args.p,
        "e": args.e,
        "n0": [args.n0] if args.n0 else None,
        "out": args.out,
        "cache": args.cache,
        "max_brandt_degree": args.max_degree,
        "source_index": args.source_index,
        "seed": args.seed,
        "jobs": args.jobs,
        "method": args.method,
    }
    for k, v in overrides.items():
        if v is not None:
            setattr(cfg, k, v)
    return cfg


# -- commands --------------------------------------------------------------------------


def _classset_path(cfg: RunConfig) -> Path:
    return Path(cfg.out) / "classset.json"


def cmd_build(cfg: RunConfig) -> int:
    F, n0 = cfg.validate()
    try:
        A = build_definite_algebra(n0)
        R = maximalize(Lattice.standard_order(A), n0)
        C = enumerate_classes(R, n0, cfg.class_degree_budget)
    except (QuatError, LatticeError) as exc:
        raise ConfigError(str(exc)) from exc
    save_classset(C, _classset_path(cfg))
    print(f"algebra ({A.a}, {A.b}); n = {C.n}; weights {C.weights}; mass {C.mass}")
    return 0


def _load(cfg: RunConfig):
    cfg.validate()
    path = _classset_path(cfg)
    if not path.exists():
        raise ConfigError(f"{path} not found; run 'build' first")
    return load_classset(path)


def cmd_brandt(cfg: RunConfig) -> int:
    C = _load(cfg)
    D = cfg.max_brandt_degree
    cache = BrandtCache(cfg.cache_dir, C)
    if all(cache.has_matrices(d) for d in range(D + 1)):
        B = cache.load_matrices(D)
        print(f"cache hit: {len(B)} matrices up to degree {D}")
        return 0
    t0 = time.time()
    B = brandt_matrices(C, D, cfg.method, cfg.jobs)
    cache.store_matrices(B, range(D + 1))
    print(f"computed {len(B)} matrices up to degree {D} in {time.time() - t0:.1f}s")
    return 0


def _matrices(cfg: RunConfig, C):
    cache = BrandtCache(cfg.cache_dir, C)
    D = cfg.max_brandt_degree
    if not all(cache.has_matrices(d) for d in range(D + 1)):
        raise ConfigError(f"Brandt matrices up to degree {D} are not cached; run 'brandt' first")
    return cache.load_matrices(D)


def cmd_check(cfg: RunConfig) -> int:
    C = _load(cfg)
    D = cfg.max_brandt_degree
    B = _matrices(cfg, C)
    reports = [
        check_anchor(C, B),
        check_symmetry(C, B),
        brandt_identities(C, B, D),
        reduction_identity_check(C, B)[0],
        decomposition_check(C, B, D),
        hecke_covariance_check(C, B, D),
    ]
    spectral = spectral_report(C, B, min(3, D))
    for r in reports:
        print(r)
    bad_spec = [s for s in spectral if not s.ok]
    print(f"spectral bound: {len(spectral)} primes, " + ("PASS" if not bad_spec else f"FAIL at {bad_spec[0].prime}"))
    failed = [r for r in reports if not r.ok]
    if failed or bad_spec:
        first = failed[0].failures[0] if failed else f"spectral bound fails at {bad_spec[0].prime}"
        raise CheckFailed(first)
    return 0


def cmd_equid(cfg: RunConfig) -> int:
    C = _load(cfg)
    D = cfg.max_brandt_degree
    i = cfg.source_index - 1
    if not 0 <= i < C.n:
        raise ConfigError(f"source index {cfg.source_index} out of range 1..{C.n}")
    cache = BrandtCache(cfg.cache_dir, C)
    if all(cache.has_rows(i, d) for d in range(D + 1)):
        rows = cache.load_rows(i, D)
    else:
        rows = row_dicts(brandt_rows(C, [i], D, cfg.method, cfg.jobs))
        cache.store_rows(i, rows, [d for d in range(D + 1) if not cache.has_rows(i, d)])
    rep = equid_experiment(C, i, rows, D)
    out = Path(cfg.out)
    atomic_write(out / "equid.csv", rep.to_csv())
    atomic_write(out / "equid.json", dumps(rep.to_json()))
    coprime = equid_experiment(C, i, rows, D, coprime_only=True)
    bounded, decreasing = decay_verdict(coprime)
    print(f"fitted constant C = {coprime.bound_C:.12g} (max normalized ratio over deg <= 4)")
    print(f"max normalized ratio over all degrees = {coprime.max_ratio(0, D):.12g}")
    gen = _spectral_generator(cfg, C, D)
    if gen is not None:
        print(f"spectral ratio bound (diagnostic) = {spectral_ratio_bound(C, gen, i):.12g}")
    for d, v in coprime.degree_maxima().items():
        print(f"  deg {d}: max distance {float(v):.12g}")
    print(f"ratio bounded by C: {'PASS' if bounded else 'FAIL'}")
    print(f"per-degree maxima weakly decreasing from degree 2: {'PASS' if decreasing else 'FAIL'}")
    if C.certified:
        for label, wgt in supersingular_report(C):
            print(f"  {label}: {wgt}")
    if not (bounded and decreasing):
        raise CheckFailed("decay criterion not met")
    return 0


def _spectral_generator(cfg: RunConfig, C, D: int):
    """B(P) for the first degree-1 prime P not dividing n0 with simple spectrum, if cached."""
    cache = BrandtCache(cfg.cache_dir, C)
    if D < 1 or not all(cache.has_matrices(d) for d in range(2)):
        return None
    B = cache.load_matrices(1)
    for P in irreducibles(C.F, 1):
        if P.divides(C.n0):
            continue
        vals = np.linalg.eigvals(B[P].astype(float))
        if len(vals) == 1 or np.min(np.abs(np.subtract.outer(vals, vals)) + 1e9 * np.eye(len(vals))) > 1e-6:
            return B[P]
    return None


def cmd_ramanujan(cfg: RunConfig) -> int:
    C = _load(cfg)
    D = cfg.max_brandt_degree
    B = _matrices(cfg, C)
    table = ramanujan_table(C, B, D)
    atomic_write(Path(cfg.out) / "ramanujan.csv", table.to_csv())
    for d, v in table.degree_maxima().items():
        print(f"  deg {d}: max rho {v:.12g}")
    spectral = spectral_report(C, B, min(3, D))
    for s in spectral:
        print(f"  B({s.prime}): sigma {s.sigma}, cofactor {s.cofactor}, {'PASS' if s.ok else 'FAIL'}")
    if not all(s.ok for s in spectral):
        raise CheckFailed("spectral bound violated")
    return 0


COMMANDS = {
    "build": cmd_build,
    "brandt": cmd_brandt,
    "check": cmd_check,
    "equid": cmd_equid,
    "ramanujan": cmd_ramanujan,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fqbrandt", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--config", help="JSON file with RunConfig fields")
    ap.add_argument("--out", help="output directory (default: out)")
    ap.add_argument("--cache", help="cache directory (default: <out>/cache)")
    ap.add_argument("--max-degree", type=int, help="largest deg m for Brandt matrices and sweeps")
    ap.add_argument("--source-index", type=int, help="1-based class index for the equidistribution sweep")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--jobs", type=int, help="worker processes for Brandt counting")
    ap.add_argument("--p", type=int, help="field characteristic")
    ap.add_argument("--e", type=int, help="field degree over F_p")
    ap.add_argument("--n0", help='level, e.g. "t^3 + 2*t + 1"')
    ap.add_argument("--method", choices=["split", "box"], help="lattice counting route")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = load_config(args)
        return COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (CheckFailed, ClassSetError) as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
