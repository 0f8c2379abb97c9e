import csv
import hashlib
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest
from numpy.testing import assert_allclose

from chiralwalk import __version__, graphs
from chiralwalk.cli import main
from chiralwalk.linalg import from_json_dict, to_json_dict

T_CHIRAL = math.pi / (3 * math.sqrt(3))


def run(argv, capsys, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def write_matrix(path, A):
    path.write_text(json.dumps(to_json_dict(A)))
    return str(path)


@pytest.fixture
def k4chiral(tmp_path):
    return write_matrix(tmp_path / "k4chiral.json", graphs.k4_chiral_signing())


@pytest.fixture
def c5oriented(tmp_path):
    return write_matrix(tmp_path / "c5oriented.json", graphs.oriented_cycle(5))


def test_build_complete(capsys):
    code, out, _ = run(["build", "--kind", "complete", "--n", "4"], capsys)
    assert code == 0
    report = json.loads(out)
    assert_allclose(from_json_dict(report), graphs.complete(4))
    assert report["version"] == __version__
    assert len(report["input_digest"]) == 64


def test_build_from_spec_stdin(capsys, monkeypatch):
    spec = '{"kind": "complete", "n": 5, "signing": "odd_pm_i"}'
    code, out, _ = run(["build"], capsys, stdin=spec, monkeypatch=monkeypatch)
    assert code == 0
    report = json.loads(out)
    assert_allclose(from_json_dict(report), graphs.odd_clique_signing(5))
    assert report["input_digest"] == hashlib.sha256(spec.encode()).hexdigest()


def test_build_output_feeds_other_commands(tmp_path, capsys):
    target = tmp_path / "k4.json"
    assert main(["build", "--kind", "complete", "--n", "4", "--signing", "k4_chiral",
                 "--out", str(target)]) == 0
    code, out, _ = run(["uniform", "--in", str(target), "--time", repr(T_CHIRAL)], capsys)
    assert code == 0 and json.loads(out)["uniform"] is True


def test_uniform_chiral(k4chiral, capsys):
    code, out, _ = run(["uniform", "--in", k4chiral, "--time", repr(T_CHIRAL)], capsys)
    report = json.loads(out)
    assert code == 0
    assert report["uniform"] is True
    assert report["max_deviation"] <= 1e-9
    assert report["time"] == T_CHIRAL


def test_uniform_eps_flag(k4chiral, capsys):
    code, out, _ = run(["uniform", "--in", k4chiral, "--time", "0.5", "--eps", "0.5"], capsys)
    assert json.loads(out)["uniform"] is True


def test_mix_reports_matrix(k4chiral, capsys):
    code, out, _ = run(["mix", "--in", k4chiral, "--time", "0.3"], capsys)
    M = np.array(json.loads(out)["mixing_matrix"])
    assert_allclose(M.sum(axis=0), 1, atol=1e-12)


def test_local_uniform(tmp_path, capsys):
    path = write_matrix(tmp_path / "claw.json", graphs.claw(3))
    code, out, _ = run(["local-uniform", "--in", path, "--time", repr(T_CHIRAL), "--vertex", "0"], capsys)
    assert json.loads(out)["uniform"] is True
    code, out, _ = run(["local-uniform", "--in", path, "--time", repr(T_CHIRAL), "--vertex", "1"], capsys)
    assert json.loads(out)["uniform"] is False


def test_avg_mix_c5(c5oriented, capsys):
    code, out, _ = run(["avg-mix", "--in", c5oriented], capsys)
    report = json.loads(out)
    assert code == 0 and report["uniform"] is True
    assert_allclose(report["average_mixing_matrix"], 0.2, atol=1e-9)


def test_avg_mix_cesaro(c5oriented, capsys):
    code, out, _ = run(["avg-mix", "--in", c5oriented, "--cesaro", "--horizon", "200",
                        "--steps", "20000", "--eps", "1e-2"], capsys)
    report = json.loads(out)
    assert report["method"] == "cesaro" and report["uniform"] is True


def test_search(k4chiral, capsys):
    code, out, _ = run(["search", "--in", k4chiral, "--tmax", "1"], capsys)
    report = json.loads(out)
    assert report["uniform"] is True
    assert abs(report["time"] - T_CHIRAL) <= 1e-9


def test_search_none(tmp_path, capsys):
    path = write_matrix(tmp_path / "k5.json", graphs.complete(5))
    code, out, _ = run(["search", "--in", path, "--tmax", "5", "--json"], capsys)
    report = json.loads(out)
    assert code == 0 and report["uniform"] is False and report["time"] is None


def test_quotient(tmp_path, capsys):
    path = write_matrix(tmp_path / "claw.json", graphs.claw(3))
    code, out, _ = run(["quotient", "--in", path, "--cells", "0|1,2,3", "--time", "0.7"], capsys)
    report = json.loads(out)
    s3 = math.sqrt(3)
    assert_allclose(np.array(report["B"])[..., 0], [[0, s3], [s3, 0]], atol=1e-12)
    assert report["r"][0][1] == [3.0, 0.0]
    assert report["c"][0][1] == [1.0, 0.0]
    assert report["quotient_walk_residual"] <= 1e-8


def test_quotient_not_equitable(tmp_path, capsys):
    path = write_matrix(tmp_path / "p3.json", graphs.path(3))
    code, _, err = run(["quotient", "--in", path, "--cells", "0,1|2"], capsys)
    assert code == 2
    assert json.loads(err)["error"] == "NotEquitable"


def test_switch_check(tmp_path, capsys):
    a = write_matrix(tmp_path / "a.json", graphs.k4_chiral_signing())
    b = write_matrix(tmp_path / "b.json", graphs.k1_plus_oriented_triangle())
    code, out, _ = run(["switch-check", "--a", a, "--b", b], capsys)
    report = json.loads(out)
    assert report["equivalent"] is True
    d = np.array([complex(*z) for z in report["D"]])
    assert_allclose(d / d[1], [-1j, 1, 1, 1], atol=1e-12)


def test_stopping_rule_with_trace(tmp_path, capsys):
    spec = tmp_path / "base.json"
    spec.write_text(json.dumps({"kind": "empty", "n": 3}))
    trace = tmp_path / "trace.csv"
    code, out, _ = run(["stopping-rule", "--spec", str(spec), "--trials", "500", "--seed", "4",
                        "--trace", str(trace)], capsys)
    report = json.loads(out)
    assert code == 0
    assert report["hit_rate"] == 1.0
    assert 2.0 < report["mean_rounds"] < 4.0
    rows = list(csv.DictReader(trace.open()))
    assert set(rows[0]) == {"trial", "round", "outcome", "p_hit"}
    assert sum(int(r["outcome"]) for r in rows) == 500


def test_stopping_rule_deterministic(tmp_path, capsys):
    spec = tmp_path / "base.json"
    spec.write_text(json.dumps({"kind": "complete", "n": 5, "signing": "odd_pm_i"}))
    argv = ["stopping-rule", "--spec", str(spec), "--trials", "200", "--seed", "9", "--json"]
    _, first, _ = run(argv, capsys)
    _, second, _ = run(argv, capsys)
    assert first == second


def test_stopping_rule_scaled_and_from_cone(tmp_path, capsys):
    spec = tmp_path / "base.json"
    spec.write_text(json.dumps({"kind": "complete", "n": 5, "signing": "odd_pm_i"}))
    code, out, _ = run(["stopping-rule", "--spec", str(spec), "--trials", "5", "--scaled",
                        "--from-cone", "--start", "0"], capsys)
    report = json.loads(out)
    assert report["mean_rounds"] == 0
    assert report["max_final_deviation"] <= 1e-9
    assert report["settle_time"] == pytest.approx(5 * math.acos(1 / math.sqrt(6)) / math.sqrt(5))


def test_stopping_rule_nan_becomes_null(tmp_path, capsys):
    spec = tmp_path / "base.json"
    spec.write_text(json.dumps({"kind": "empty", "n": 3}))
    code, out, _ = run(["stopping-rule", "--spec", str(spec), "--trials", "3",
                        "--strategy", "continue", "--max-rounds", "0"], capsys)
    report = json.loads(out)
    assert report["hit_rate"] == 0.0
    assert report["mean_final_deviation"] is None


def test_catalog_command(capsys):
    code, out, _ = run(["catalog", "--json"], capsys)
    report = json.loads(out)
    assert code == 0 and report["failed"] == 0
    names = [e["name"] for e in report["entries"]]
    assert names == sorted(names)
    _, again, _ = run(["catalog", "--json"], capsys)
    assert again == out


def test_verify_subset(capsys):
    code, out, _ = run(["verify", "--only", "1,11"], capsys)
    lines = [json.loads(line) for line in out.splitlines()]
    assert code == 0
    assert [d["criterion"] for d in lines] == [1, 11]
    for d in lines:
        assert {"measured", "expected", "tolerance", "passed"} <= set(d)


def test_verify_unknown_criterion(capsys):
    code, _, err = run(["verify", "--only", "99"], capsys)
    assert code == 2


@pytest.mark.parametrize("payload, fragment", [
    ("{bad", "line 1, column 2"),
    ('{"n": 2, "entries": [[0, 0]]}', "expected 4"),
    ('{"n": 2, "entries": [[0,0],[0,1],[0,1],[0,0]]}', "NotHermitian"),
])
def test_input_errors(capsys, monkeypatch, payload, fragment):
    code, _, err = run(["uniform", "--time", "1"], capsys, stdin=payload, monkeypatch=monkeypatch)
    assert code == 2
    assert fragment in err


def test_missing_file(capsys, tmp_path):
    code, _, err = run(["avg-mix", "--in", str(tmp_path / "nope.json")], capsys)
    assert code == 2 and "cannot read" in err


def test_unknown_flag_rejected(capsys):
    with pytest.raises(SystemExit) as info:
        main(["uniform", "--time", "1", "--bogus"])
    assert info.value.code == 2


def test_bad_graphspec(capsys):
    code, _, err = run(["build", "--kind", "complete"], capsys)
    assert code == 2


def test_module_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "chiralwalk", "build", "--kind", "complete",
                          "--n", "2", "--json"], capture_output=True, text=True, check=True)
    assert json.loads(out.stdout)["n"] == 2
