import json
import subprocess
import sys
from pathlib import Path

import pytest

from vasgeo.cli import run
from vasgeo.jsonio import SCHEMA, periodic_from_json, semilinear_from_json
from vasgeo.periodic import GeneratorPeriodic, fill
from vasgeo.smooth import rep_from_json

FIX = Path(__file__).parent / "fixtures"


def call(capsys, *argv):
    code = run([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, json.loads(out or err)


def f(name):
    return FIX / name


def test_fill_three_generators(capsys):
    code, doc = call(capsys, "fill", f("fig1_middle.json"))
    assert code == 0 and doc["schema"] == SCHEMA and doc["verb"] == "fill"
    q = periodic_from_json(doc["result"])
    assert set(q.cone.geq) == {(0, 1), (3, -1)}
    assert q.same_set(fill(GeneratorPeriodic.make(2, [(1, 0), (1, 2), (1, 3)])))


def test_reducible_parabola_log(capsys):
    code, doc = call(capsys, "reducible", f("fig3_middle_rep.json"), "--budget", 100000)
    assert code == 0 and doc["result"]["verdict"] == "reducible"
    rep = rep_from_json(json.loads(f("fig3_middle_rep.json").read_text()))
    x = tuple(doc["result"]["witness"])
    assert all(rep.member((x[0] + a, x[1] + b)) for a in range(16) for b in range(16))


def test_semilinear_diagonal(capsys):
    code, doc = call(capsys, "semilinear", f("diagonal.json"))
    assert code == 0 and doc["result"]["verdict"] == "semilinear"
    s = semilinear_from_json(doc["result"]["representation"])
    assert all(s.member((a, b)) == (a == b) for a in range(20) for b in range(20))
    code, doc = call(capsys, "semilinear", "--model", f("diagonal_vas.json"), "--box", 12)
    assert code == 0 and doc["result"]["verdict"] == "semilinear"


def test_semilinear_product_exp(capsys):
    code, doc = call(capsys, "semilinear", f("appendix_g.json"))
    assert code == 0 and doc["result"]["verdict"] == "not_semilinear"


def test_line_in_complement(capsys):
    code, doc = call(capsys, "line-in-complement", f("parabola.json"))
    assert code == 0 and doc["result"]["verdict"] == "line"
    line = doc["result"]["line"]
    for k in range(100):
        x, y = (b + k * d for b, d in zip(line["base"], line["direction"]))
        assert y > x * x


def test_member_and_enumerate(capsys):
    code, doc = call(capsys, "member", f("parabola.json"), "--point", "3,9")
    assert code == 0 and doc["result"] == {"member": True}
    code, doc = call(capsys, "member", f("diagonal_vas.json"), "--point", "1,2", "--box", 5)
    assert doc["result"]["member"] is False
    code, doc = call(capsys, "enumerate", f("shifted_quadrant.json"), "--box", 3)
    assert doc["result"]["count"] == 9


def test_complement_and_intersect_round_trip(capsys):
    code, doc = call(capsys, "complement", f("shifted_quadrant.json"))
    assert code == 0
    s = semilinear_from_json(doc["result"])
    assert all(s.member((a, b)) == (min(a, b) == 0) for a in range(15) for b in range(15))
    assert semilinear_from_json(json.loads(json.dumps(s.to_json()))) == s
    code, doc = call(capsys, "intersect", f("shifted_quadrant.json"), f("shifted_quadrant.json"))
    assert code == 0
    s = semilinear_from_json(doc["result"])
    assert all(s.member((a, b)) == (min(a, b) >= 1) for a in range(15) for b in range(15))


def test_partition_common_and_vas_reach(capsys):
    code, doc = call(capsys, "partition", f("parabola.json"))
    assert code == 0 and doc["result"]["cells"]
    code, doc = call(capsys, "refine", f("parabola.json"))
    assert code == 0
    code, doc = call(capsys, "common-partition", "--model", f("parabola.json"), "--model2", f("diagonal.json"))
    assert code == 0 and all("second" in c for c in doc["result"]["cells"])
    code, doc = call(capsys, "vas-reach", "--vas", f("diagonal_vas.json"), "--box", 4)
    assert code == 0 and doc["result"]["points"] == [[k, k] for k in range(5)]


def test_input_errors(capsys, tmp_path):
    code, doc = call(capsys, "reducible", f("bad_rep.json"))
    assert code == 1 and doc["error"]["path"] == "$.parts[0].model.axis_y"
    bad = tmp_path / "broken.json"
    bad.write_text("{not json")
    code, doc = call(capsys, "fill", bad)
    assert code == 1 and "invalid JSON" in doc["error"]["message"]
    code, doc = call(capsys, "fill", tmp_path / "missing.json")
    assert code == 1
    code, doc = call(capsys, "member", f("parabola.json"))
    assert code == 1 and "--point" in doc["error"]["message"]
    extra = tmp_path / "extra.json"
    extra.write_text(json.dumps({"type": "gen_periodic", "dim": 1, "generators": [[1]], "colour": 1}))
    code, doc = call(capsys, "fill", extra)
    assert code == 1


def test_budget_exhaustion_is_unknown(capsys):
    code, doc = call(capsys, "semilinear", f("appendix_g.json"), "--budget", 1)
    assert code == 2 and doc["result"]["verdict"] == "unknown"


def test_out_file(capsys, tmp_path):
    out = tmp_path / "cells.json"
    assert run(["partition", str(f("parabola.json")), "--out", str(out)]) == 0
    assert json.loads(out.read_text())["verb"] == "partition"


@pytest.mark.parametrize("argv", [
    ["semilinear", "fig3_middle_rep.json"],
    ["reducible", "fig3_middle_rep.json"],
    ["common-partition", "parabola.json", "--model2", "fig3_middle_rep.json"],
])
def test_byte_identical_runs(argv):
    cmd = [sys.executable, "-m", "vasgeo"] + [str(f(a)) if a.endswith(".json") else a for a in argv]
    cmd += ["--seed", "7", "--budget", "50000"]
    outs = [subprocess.run(cmd, capture_output=True, check=False).stdout for _ in range(2)]
    assert outs[0] == outs[1] and outs[0]
