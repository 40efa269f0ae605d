import json
import math
import subprocess
import sys

import pytest

import betageo as bg
from betageo.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_metric_json(capsys):
    code, out, _ = run_cli(capsys, "metric", "--point", "2,3")
    assert code == 0
    payload = json.loads(out)
    g = bg.metric_tensor(bg.BetaPoint(2, 3))
    assert payload == {"g_aa": g.g_aa, "g_ab": g.g_ab, "g_bb": g.g_bb}


def test_det_commands_agree(capsys):
    code, out, _ = run_cli(capsys, "det", "--point", "2,3")
    det = json.loads(out)["det"]
    assert det == bg.det_metric(bg.BetaPoint(2, 3))
    code, out, _ = run_cli(capsys, "det-quad", "--point", "2,3", "--tol", "1e-8")
    quad = json.loads(out)["det"]
    assert quad == pytest.approx(det, rel=1e-7)
    code, out, _ = run_cli(capsys, "det-bound", "--point", "2,3")
    assert json.loads(out)["bound"] < det


def test_christoffel_and_curvature(capsys):
    code, out, _ = run_cli(capsys, "christoffel", "--point", "1.5,0.7")
    c = bg.christoffel(bg.BetaPoint(1.5, 0.7))
    payload = json.loads(out)
    assert payload["a_ab"] == c.a_ab and payload["d"] == c.d
    code, out, _ = run_cli(capsys, "curvature", "--point", "1.5,0.7")
    assert json.loads(out)["curvature"] == bg.sectional_curvature(bg.BetaPoint(1.5, 0.7))


def test_curvature_grid_csv(capsys):
    args = ("curvature-grid", "--alpha-min", "0.1", "--alpha-max", "10",
            "--beta-min", "0.1", "--beta-max", "10",
            "--resolution", "4", "--spacing", "log")
    code, out, _ = run_cli(capsys, *args)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "alpha,beta,curvature"
    assert len(lines) == 1 + 16
    for ln in lines[1:]:
        a, b, k = map(float, ln.split(","))
        assert k < 0.0
    # determinism
    code, out2, _ = run_cli(capsys, *args)
    assert out2 == out


def test_geodesic_csv(capsys):
    code, out, _ = run_cli(capsys, "geodesic", "--from", "1,1",
                           "--velocity", "0.5,-0.2", "--steps", "5")
    lines = out.splitlines()
    assert lines[0] == "t,alpha,beta,d_alpha,d_beta"
    assert len(lines) == 7
    first = [float(x) for x in lines[1].split(",")]
    assert first == [0.0, 1.0, 1.0, 0.5, -0.2]
    last = [float(x) for x in lines[-1].split(",")]
    assert last[0] == 1.0


def test_log_and_distance(capsys):
    code, out, _ = run_cli(capsys, "log", "--from", "1,1", "--to", "2,3")
    v = json.loads(out)
    w = bg.log_map(bg.BetaPoint(1, 1), bg.BetaPoint(2, 3))
    assert v["d_alpha"] == pytest.approx(w.d_alpha, rel=1e-12)
    code, out, _ = run_cli(capsys, "distance", "--from", "1,1", "--to", "2,3")
    d = json.loads(out)["distance"]
    assert d == pytest.approx(bg.distance(bg.BetaPoint(1, 1), bg.BetaPoint(2, 3)),
                              rel=1e-12)


def test_ball_csv_radius_and_threads(capsys):
    args = ("ball", "--center", "2,2", "--radius", "0.4", "--directions", "16")
    code, out, _ = run_cli(capsys, *args)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "theta,alpha,beta"
    assert len(lines) == 17
    center = bg.BetaPoint(2, 2)
    for ln in lines[1::4]:
        _, a, b = map(float, ln.split(","))
        assert bg.distance(center, bg.BetaPoint(a, b)) == pytest.approx(0.4, abs=1e-6)
    code, out2, _ = run_cli(capsys, *args, "--threads", "2")
    assert out2 == out


def test_mean_inline_and_file(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "mean", "--points", "1,1;2,2;3,1")
    m = json.loads(out)
    want = bg.frechet_mean([bg.BetaPoint(1, 1), bg.BetaPoint(2, 2), bg.BetaPoint(3, 1)])
    assert m["alpha"] == pytest.approx(want.alpha, abs=1e-9)
    f = tmp_path / "pts.txt"
    f.write_text("1,1\n2,2\n3,1\n")
    code, out2, _ = run_cli(capsys, "mean", "--file", str(f))
    assert json.loads(out2) == m


def test_weighted_mean(capsys):
    code, out, _ = run_cli(capsys, "mean", "--points", "1,1;3,3",
                           "--weights", "0.9,0.1")
    m = json.loads(out)
    assert 1.0 < m["alpha"] < 2.0


def test_canonical_moments_round_trip(capsys):
    code, out, _ = run_cli(capsys, "canonical", "--moments", "0.5,0.3333333333333333")
    p = json.loads(out)["p"]
    code, out, _ = run_cli(capsys, "moments", "--canonical",
                           ",".join(repr(x) for x in p))
    c = json.loads(out)["c"]
    assert c[0] == pytest.approx(0.5, abs=1e-12)
    assert c[1] == pytest.approx(1.0 / 3.0, abs=1e-12)


def test_rho_and_centroid(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "rho", "--moments-a", "0.5,0.3333333333333333",
                           "--moments-b", "0.4,0.3")
    r = json.loads(out)["rho"]
    assert r > 0.0
    f = tmp_path / "seqs.txt"
    f.write_text("0.5,0.3333333333333333\n0.4,0.3\n")
    code, out, _ = run_cli(capsys, "centroid", "--file", str(f))
    c = json.loads(out)["c"]
    assert len(c) == 2 and 0.4 < c[0] < 0.5


def test_clt_check(capsys):
    code, out, _ = run_cli(capsys, "clt-check", "--alpha", "1", "--alpha-prime", "2",
                           "--scales", "10,100")
    payload = json.loads(out)
    assert payload["limit"] == pytest.approx(math.log(2.0) / math.sqrt(2.0), rel=1e-14)
    assert payload["errors"][1] < payload["errors"][0]


def test_exit_code_domain_error(capsys):
    code, _, err = run_cli(capsys, "det", "--point=0,1")
    assert code == 1 and "error:" in err
    code, _, err = run_cli(capsys, "det", "--point", "1,2,3")
    assert code == 1
    code, _, err = run_cli(capsys, "canonical", "--moments", "0.9,0.9")
    assert code == 1


def test_exit_code_usage_error(capsys):
    assert run_cli(capsys, "unknown-subcommand")[0] == 64
    assert run_cli(capsys, "det")[0] == 64
    assert run_cli(capsys)[0] == 64


def test_exit_code_boundary_escape(capsys):
    code, _, err = run_cli(capsys, "geodesic", "--from", "0.3,0.3",
                           "--velocity=-1000,0")
    assert code == 2 and "error:" in err


def test_console_entry_point_subprocess():
    proc = subprocess.run([sys.executable, "-m", "betageo", "det", "--point", "2,3"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["det"] == pytest.approx(
        bg.det_metric(bg.BetaPoint(2, 3)), rel=1e-15)
