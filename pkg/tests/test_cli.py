import json
import time

import numpy as np
import pytest

from fqbrandt.cli import main
from fqbrandt.persist import BrandtCache, classset_from_json, classset_to_json, dumps, load_classset

P3 = "t^3 + 2*t + 1"


def run(tmp_path, *args):
    return main([*args, "--out", str(tmp_path)])


def read_tree(root):
    return {p.relative_to(root).as_posix(): p.read_bytes() for p in sorted(root.rglob("*")) if p.is_file()}


def test_trivial_level_pipeline(tmp_path, capsys):
    assert run(tmp_path, "build", "--n0", "t") == 0
    data = json.loads((tmp_path / "classset.json").read_text())
    assert data["n"] == 1 and [c["weight"] for c in data["classes"]] == [4]
    assert run(tmp_path, "brandt", "--n0", "t", "--max-degree", "6") == 0
    assert run(tmp_path, "check", "--n0", "t", "--max-degree", "6") == 0
    assert run(tmp_path, "equid", "--n0", "t", "--max-degree", "6") == 0
    lines = (tmp_path / "equid.csv").read_text().splitlines()[1:]
    assert lines and all(line.split(",")[-3] == "0" for line in lines)


def test_pipeline_is_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        for cmd in ("build", "brandt", "check", "ramanujan", "equid"):
            assert run(out, cmd, "--n0", P3, "--max-degree", "4") == 0
    assert read_tree(a) == read_tree(b)
    data = json.loads((a / "classset.json").read_text())
    assert data["mass"] == "13/4"
    # the cache holds one entry per monic m of degree <= 4
    cache = BrandtCache(a / "cache", load_classset(a / "classset.json"))
    assert len(cache.load_matrices(4)) == sum(3**d for d in range(5))


def test_rebuild_is_byte_identical(tmp_path):
    assert run(tmp_path, "build", "--n0", P3) == 0
    first = (tmp_path / "classset.json").read_bytes()
    assert run(tmp_path, "build", "--n0", P3) == 0
    assert (tmp_path / "classset.json").read_bytes() == first


def test_round_trips(tmp_path):
    assert run(tmp_path, "build", "--n0", P3) == 0
    assert run(tmp_path, "brandt", "--n0", P3, "--max-degree", "3") == 0
    text = (tmp_path / "classset.json").read_text()
    C = classset_from_json(json.loads(text))
    assert dumps(classset_to_json(C)) == text
    cache = BrandtCache(tmp_path / "cache", C)
    B = cache.load_matrices(3)
    before = read_tree(tmp_path / "cache")
    cache.store_matrices(B, range(4))
    assert read_tree(tmp_path / "cache") == before


def test_cache_hit_skips_work(tmp_path, capsys):
    assert run(tmp_path, "build", "--n0", P3) == 0
    assert run(tmp_path, "brandt", "--n0", P3, "--max-degree", "5") == 0
    t0 = time.perf_counter()
    assert run(tmp_path, "brandt", "--n0", P3, "--max-degree", "5") == 0
    assert "cache hit" in capsys.readouterr().out
    assert time.perf_counter() - t0 < 5


def test_fault_injection(tmp_path):
    assert run(tmp_path, "build", "--n0", P3) == 0
    assert run(tmp_path, "brandt", "--n0", P3, "--max-degree", "4") == 0
    path = next((tmp_path / "cache").rglob("brandt_deg2.json"))
    data = json.loads(path.read_text())
    M = np.array(data["entries"][3]["matrix"])
    M[1, 1] += 1
    M[1, 2] -= 1  # keeps the row sum so only the identity checks can notice
    if M.min() < 0:
        M[1, 2] += 2
        M[1, 1] -= 2
    data["entries"][3]["matrix"] = M.tolist()
    path.write_text(json.dumps(data))
    assert run(tmp_path, "check", "--n0", P3, "--max-degree", "4") == 1
    # a row-sum violation is caught already on load
    M[0, 0] += 5
    data["entries"][3]["matrix"] = M.tolist()
    path.write_text(json.dumps(data))
    assert run(tmp_path, "check", "--n0", P3, "--max-degree", "4") == 1


@pytest.mark.parametrize(
    "args",
    [
        ["build", "--n0", "t^2"],
        ["build", "--n0", "t", "--p", "9"],
        ["build", "--n0", "t", "--max-degree", "1"],
        ["check", "--n0", "t + 1"],
    ],
)
def test_configuration_errors(tmp_path, args):
    assert run(tmp_path, *args) == 2


def test_config_file(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"p": 3, "n0": "t + 1", "max_brandt_degree": 3}))
    assert main(["build", "--config", str(cfg), "--out", str(tmp_path)]) == 0
    cfg.write_text(json.dumps({"p": 3, "bogus": 1}))
    assert main(["build", "--config", str(cfg), "--out", str(tmp_path)]) == 2
