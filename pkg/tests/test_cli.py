import json
import math
import shutil
import subprocess

import pytest

from extremal_sites import _parallel
from extremal_sites.cli import main
from extremal_sites.geometry import PointSet

SUP_2_4 = 4 + 2 * math.sqrt(2 - math.sqrt(3))


def write(path, data):
    path.write_text(json.dumps(data))
    return str(path)


def test_eval_extremal_quad(tmp_path):
    quad = tmp_path / "quad.json"
    assert main(["construct", "extremal-quad", "-o", str(quad)]) == 0
    out = tmp_path / "summary.json"
    assert main(["eval", str(quad), "-o", str(out)]) == 0
    summary = json.loads(out.read_text())
    assert set(summary) == {"sigma", "dmax", "dmin", "omega", "mu"}
    assert summary["omega"] == pytest.approx(5.03527618, abs=1e-8)


def test_eval_two_points(tmp_path, capsys):
    src = write(tmp_path / "two.json", {"dim": 2, "points": [[0, 0], [0, 2]]})
    assert main(["eval", src]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["omega"] == 1.0 and summary["mu"] == 1.0


def test_eval_rejects_single_point(tmp_path):
    src = write(tmp_path / "one.json", {"dim": 2, "points": [[0, 0]]})
    assert main(["eval", src]) == 2


def test_eval_names_offending_field(tmp_path, capsys):
    src = write(tmp_path / "bad.json", {"dim": 2, "points": [[0, 0], [1]]})
    assert main(["eval", src]) == 2
    assert "points[1]" in capsys.readouterr().err
    (tmp_path / "junk.json").write_text("{not json")
    assert main(["eval", str(tmp_path / "junk.json")]) == 2


def test_eval_coincident_points_mu_null(tmp_path, capsys):
    src = write(tmp_path / "c.json", {"dim": 1, "points": [[0], [0], [1]]})
    assert main(["eval", src]) == 0
    assert json.loads(capsys.readouterr().out)["mu"] is None


def test_construct_thm33(tmp_path, capsys):
    out = tmp_path / "t.json"
    assert main(["construct", "thm33", "--n", "3", "-o", str(out)]) == 0
    shown = float(capsys.readouterr().out.split("=")[1])
    assert shown == pytest.approx(8.81743268, abs=1e-8)
    assert len(PointSet.from_json(out.read_text())) == 5
    assert main(["construct", "thm33", "--n", "1"]) == 2
    assert main(["construct", "regular-simplex"]) == 2


def test_construct_regular_simplex_then_eval(tmp_path, capsys):
    out = tmp_path / "s.json"
    assert main(["construct", "regular-simplex", "--n", "4", "-o", str(out)]) == 0
    capsys.readouterr()
    assert main(["eval", str(out)]) == 0
    assert json.loads(capsys.readouterr().out)["omega"] == pytest.approx(10.0, abs=1e-12)


def test_verify_lemma(tmp_path):
    out = tmp_path / "lemma.json"
    code = main(["verify", "lemma", "--dim", "4", "--simplices", "200", "--points", "50", "--seed", "42", "-o", str(out)])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["passed"] is True
    inner = report["details"]["report"]
    assert set(inner) == {"dim", "count", "min_slack", "witness"}
    assert inner["min_slack"] >= 0


def test_verify_landscape_coarse(tmp_path):
    out, csv = tmp_path / "land.json", tmp_path / "scan.csv"
    code = main(
        ["verify", "landscape", "--resolution", "0.01", "--fd-points", "200", "--arcs", "10", "-o", str(out), "--csv", str(csv)]
    )
    assert code == 0
    report = json.loads(out.read_text())
    assert report["details"]["boundary_max"]["value"] == pytest.approx(1.03527618, abs=1e-8)
    assert csv.read_text().startswith("x,y,f,fx,fy,r,s,t,rt_minus_s2")


def test_verify_failure_exit_code(tmp_path, capsys):
    # without the chord band the grid touches the chord and the gradient check fails
    code = main(["verify", "landscape", "--resolution", "0.001", "--band", "0", "--fd-points", "10", "--arcs", "2"])
    assert code == 1
    assert "FAIL min_gradient_norm" in capsys.readouterr().err


def test_verify_thm33(tmp_path):
    out = tmp_path / "t.json"
    assert main(["verify", "thm33", "--nmax", "12", "-o", str(out)]) == 0
    checks = {c["name"]: c for c in json.loads(out.read_text())["checks"]}
    assert checks["apex_distance_residual"]["value"] < 1e-10


def test_usage_errors():
    assert main([]) == 2
    assert main(["verify", "nonsense"]) == 2
    assert main(["oracle", "--resolution", "0.001"]) == 2


def test_optimize_and_warm_start(tmp_path, capsys):
    warm = tmp_path / "w.json"
    assert main(["construct", "extremal-quad", "-o", str(warm)]) == 0
    capsys.readouterr()
    out = tmp_path / "opt.json"
    code = main(["optimize", "--m", "2", "--n", "4", "--starts", "3", "--seed", "1", "--warm-start", str(warm), "-o", str(out)])
    assert code == 0
    assert float(capsys.readouterr().out) == pytest.approx(SUP_2_4, abs=1e-6)
    result = json.loads(out.read_text())
    assert set(result) == {"best", "best_omega", "per_start_bests", "config"}
    assert result["config"]["warm_start"]["dim"] == 2


def test_oracle(tmp_path, capsys):
    out = tmp_path / "o.json"
    assert main(["oracle", "--resolution", "0.02", "-o", str(out)]) == 0
    value = float(capsys.readouterr().out)
    assert 5.00 <= value <= SUP_2_4 + 1e-9


def test_conjecture_g41(tmp_path, capsys):
    out = tmp_path / "g41.json"
    assert main(["conjecture", "g41", "--m", "2", "--n", "4", "--starts", "20", "--seed", "42", "-o", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["verdict"] == "consistent"
    assert rep["gap"] == pytest.approx(1.6968, abs=1e-4)
    assert rep["caveat"].startswith("numeric evidence only")


def test_conjecture_g42_n2(tmp_path):
    out = tmp_path / "g42.json"
    assert main(["conjecture", "g42", "--n", "2", "--starts", "5", "-o", str(out)]) == 0
    assert json.loads(out.read_text())["gap"] <= 1e-6


def test_commands_are_idempotent(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["optimize", "--m", "2", "--n", "5", "--starts", "4", "--seed", "3"]
    assert main(["--threads", "1"] + args + ["-o", str(a)]) == 0
    assert main(["--threads", "4"] + args + ["-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_run_record_written(tmp_path):
    rec, out = tmp_path / "rec.json", tmp_path / "q.json"
    assert main(["--record", str(rec), "construct", "extremal-quad", "-o", str(out)]) == 0
    record = json.loads(rec.read_text())
    assert record["command"] == "construct"
    assert record["outputs"] == [str(out)]
    assert record["started_at"] <= record["finished_at"]
    assert "error" not in record


def test_run_record_on_error(tmp_path):
    rec = tmp_path / "rec.json"
    assert main(["--record", str(rec), "eval", str(tmp_path / "missing.json")]) == 2
    record = json.loads(rec.read_text())
    assert "error" in record and record["outputs"] == []


def test_threads_env_override(monkeypatch):
    monkeypatch.setenv("EXTREMAL_SITES_THREADS", "3")
    assert _parallel.resolve_threads(8) == 3
    monkeypatch.delenv("EXTREMAL_SITES_THREADS")
    assert _parallel.resolve_threads(8) == 8
    assert _parallel.resolve_threads(None) >= 1


@pytest.mark.skipif(shutil.which("extremal-sites") is None, reason="console script not installed")
def test_console_script(tmp_path):
    out = tmp_path / "q.json"
    proc = subprocess.run(["extremal-sites", "construct", "extremal-quad", "-o", str(out)], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "5.035276180410" in proc.stdout
