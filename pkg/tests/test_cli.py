import csv
import json
import subprocess
import sys

import pytest

from grovearctic import cli
from grovearctic.algebra import PolyQ


def run(*args):
    return cli.main([str(a) for a in args])


def test_verify_uniform(tmp_path, capsys):
    out = tmp_path / "report.json"
    assert run("verify", "--config", "uniform_t11", "--out", out) == 0
    report = json.loads(out.read_text())["uniform_t11"]
    assert report["passed"]
    assert "all identity checks passed" in capsys.readouterr().err


def test_genfun_matches_printed_matrix(tmp_path):
    out = tmp_path / "system.json"
    assert run("genfun", "--config", "t12_n1", "--out", out) == 0
    data = json.loads(out.read_text())
    assert PolyQ.parse(data["matrix"][0][1]) == PolyQ.parse("x*y*z - 3*x*z/4 - 3*y*z/16 - z/16")
    assert data["rhs"]["p"] == ["13/16", "1/4"]


def test_bad_rational_exit_one(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"m": 1, "n": 1, "N": 1, "edges": {"a": "1/0", "b": "1", "c": "1"}}))
    assert run("genfun", "--config", cfg) == 1
    assert "edges.a" in capsys.readouterr().err


def test_missing_config_exit_one():
    assert run("genfun", "--config", "no_such_thing") == 1
    assert run("sample", "--config", "uniform_t11") == 1  # --order is required


def test_unknown_command_exit_64(capsys):
    assert run("frobnicate") == 64
    assert "usage" in capsys.readouterr().err


def test_unknown_command_via_module():
    proc = subprocess.run([sys.executable, "-m", "grovearctic.cli", "bogus"], capture_output=True, text=True)
    assert proc.returncode == 64


def test_consistency_failure_exit_two(monkeypatch):
    import grovearctic.shuffle as shuffle

    monkeypatch.setattr(shuffle, "partition_function", lambda field, n: (1, 2))
    assert run("enumerate", "--config", "uniform_t11", "--order", 2, "--out", "-") == 2


def test_series_csv(tmp_path):
    out = tmp_path / "coeffs.csv"
    assert run("series", "--config", "uniform_t11", "--depth", 2, "--out", out) == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["class", "i", "j", "k", "kind", "value"]
    assert ["0 0 0", "1", "0", "0", "p", "2/3"] in rows


def test_enumerate_and_laplacian(tmp_path):
    out = tmp_path / "e.json"
    assert run("enumerate", "--config", "uniform_t11", "--order", 3, "--out", out) == 0
    data = json.loads(out.read_text())
    assert data["count"] == 9 and data["partition_function"]["product"] == data["partition_function"]["weight_sum"]
    out = tmp_path / "P.json"
    assert run("laplacian", "--config", "t12_n1", "--out", out) == 0
    poly = json.loads(out.read_text())["newton_polygon"]
    assert sorted(map(tuple, poly["vertices"])) == sorted([(2, 0), (-2, 0), (0, 1), (0, -1), (2, 1), (-2, -1)])


def test_sample_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert run("sample", "--config", "t12_n1", "--order", 8, "--seed", 42, "--samples", 3, "--out", p) == 0
    assert a.read_bytes() == b.read_bytes()
    assert len(json.loads(a.read_text())["groves"]) == 3
    svg = tmp_path / "g.svg"
    assert run("sample", "--config", "t12_n1", "--order", 8, "--seed", 42, "--out", svg) == 0
    assert "<svg" in svg.read_text()


def test_arctic_and_render(tmp_path):
    curve, poly = tmp_path / "c.svg", tmp_path / "d.json"
    assert run("arctic", "--config", "uniform_t11", "--out", curve, "--emit-poly", poly, "--resolution", 200) == 0
    dual = PolyQ.from_json(json.loads(poly.read_text())["dual"])
    assert dual.degree() == 2
    out = tmp_path / "r.svg"
    assert run("render", "--config", "uniform_t11", "--order", 10, "--seed", 1, "--resolution", 150, "--out", out) == 0
    assert "<svg" in out.read_text()


@pytest.mark.parametrize("seed", ["-1", str(1 << 64)])
def test_seed_validation(seed):
    assert run("sample", "--config", "uniform_t11", "--order", 3, "--seed", seed) == 1
