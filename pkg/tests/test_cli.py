import json
import math
import subprocess
import sys

import pytest

from toricap.cli import main


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj) if not isinstance(obj, str) else obj, encoding="utf-8")
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_capacity_polydisk(tmp_path, capsys):
    f = write(tmp_path, "k.json", {"polydisk": [math.exp(-1), math.exp(-2)]})
    code, out, _ = run(capsys, "capacity", f)
    assert code == 0
    res = json.loads(out)
    assert res["n"] == 2 and res["capacity"]["value"] == pytest.approx(0.5, abs=1e-12)
    assert res["capacity"]["method"] == "exact"


def test_capacity_mc(tmp_path, capsys):
    f = write(tmp_path, "k.json", {"generators": [[-1, -2], [-2, -1]]})
    code, out, _ = run(capsys, "capacity", f, "--method", "mc", "--samples", "100000", "--seed", "3")
    res = json.loads(out)["capacity"]
    assert code == 0 and res["samples"] == 100000
    assert abs(res["value"] - 2 / 3) <= 4 * res["std_err"]


def test_covolume_from_normals_and_sets(tmp_path, capsys):
    code, out, _ = run(capsys, "covolume", write(tmp_path, "p.json", {"normals": [[-1, -2], [-2, -1]]}))
    assert code == 0 and json.loads(out)["covolume"]["value"] == pytest.approx(1 / 3, abs=1e-12)
    code, out, _ = run(capsys, "covolume", write(tmp_path, "k.json", {"generators": [[-1, -1]]}))
    assert json.loads(out)["covolume"]["value"] == pytest.approx(0.5, abs=1e-14)


def test_volume(tmp_path, capsys):
    code, out, _ = run(capsys, "volume", write(tmp_path, "k.json", {"polydisk": [0.5, 0.5]}))
    assert code == 0 and json.loads(out)["volume"]["value"] == pytest.approx(math.pi**2 / 16, rel=1e-14)


CONFIG = {
    "n": 2,
    "set0": {"generators": [[-1, -2], [-2, -1]]},
    "set1": {"polydisk": [0.5, 0.3]},
    "weights": [1.0, 1.5],
    "t_count": 5,
    "samples": 5000,
}


def test_curve_csv(tmp_path, capsys):
    cfg = write(tmp_path, "c.json", CONFIG)
    code, out, _ = run(capsys, "curve", cfg)
    assert code == 0 and out.startswith("t,c_t,cap,covol,V,rho,bm_slack,logconv_slack,std_err\n")
    assert len(out.splitlines()) == 6
    csv_path = tmp_path / "out.csv"
    code, out2, _ = run(capsys, "curve", cfg, "--csv", str(csv_path))
    assert code == 0 and out2 == "" and csv_path.read_text() == out


def test_check_passes(tmp_path, capsys):
    code, out, _ = run(capsys, "check", write(tmp_path, "c.json", CONFIG))
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 5 and all(line.startswith("PASS") for line in lines)


def test_check_violation_exit_code(tmp_path, capsys, monkeypatch):
    import toricap.cli as cli
    from toricap.harness import CheckOutcome

    monkeypatch.setattr(cli, "run_all_checks", lambda cfg: [CheckOutcome("weighted_bm", False, -1.0, "forced")])
    code, out, err = run(capsys, "check", write(tmp_path, "c.json", CONFIG))
    assert code == 1 and out.startswith("FAIL")
    assert json.loads(err)["config"]["n"] == 2


def test_tol_flag_is_applied(tmp_path, capsys, monkeypatch):
    import toricap.cli as cli

    seen = {}
    monkeypatch.setattr(cli, "run_all_checks", lambda cfg: seen.setdefault("tol", cfg.tolerances.ineq_slack) and [])
    run(capsys, "check", write(tmp_path, "c.json", CONFIG), "--tol", "1e-6")
    assert seen["tol"] == 1e-6


@pytest.mark.parametrize("content", [
    "not json",
    "[1, 2]",
    {"polydisk": [1.5]},
    {"radii": [0.5]},
    {"generators": [[0.5, -1]]},
])
def test_invalid_set_exit_code(tmp_path, capsys, content):
    code, _, err = run(capsys, "capacity", write(tmp_path, "bad.json", content))
    assert code == 2 and "invalid input" in err


def test_missing_file_and_bad_config(tmp_path, capsys):
    assert run(capsys, "capacity", str(tmp_path / "missing.json"))[0] == 2
    assert run(capsys, "curve", write(tmp_path, "c.json", {**CONFIG, "weights": [1, 0]}))[0] == 2
    assert run(capsys, "capacity", write(tmp_path, "k.json", {"polydisk": [0.5]}), "--samples", "10", "--method", "mc")[0] == 2
    assert run(capsys, "covolume", write(tmp_path, "k5.json", {"normals": [[-1] * 5]}))[0] == 2


def test_numeric_failure_exit_code(tmp_path, capsys, monkeypatch):
    import toricap.harness as h
    from toricap.simplex import NumericalError

    from toricap.orthant import GeneratorSet

    ends = [GeneratorSet(CONFIG["set0"]["generators"]), GeneratorSet([[-1.5, -1], [-1, -1.5]])]

    def boom(Q, *a, **k):
        if not any(Q == e for e in ends):
            raise NumericalError("synthetic")
        return real(Q, *a, **k)

    real = h.capacity
    monkeypatch.setattr(h, "capacity", boom)
    code, _, err = run(capsys, "curve", write(tmp_path, "c.json", {**CONFIG, "set1": {"generators": [[-1.5, -1], [-1, -1.5]]}}))
    assert code == 3 and "synthetic" in err

    import toricap.cli as cli

    def fail(*a, **k):
        raise NumericalError("lp failed")

    monkeypatch.setattr(cli, "capacity", fail)
    assert run(capsys, "capacity", write(tmp_path, "k.json", {"polydisk": [0.5]}))[0] == 3


def test_selftest_command(capsys):
    code, out, _ = run(capsys, "selftest", "--count", "3", "--seed", "2", "--samples", "5000")
    assert code == 0 and out.strip() == "3 instances, 0 failed checks"


def test_module_entry_point(tmp_path):
    f = write(tmp_path, "k.json", {"polydisk": [math.exp(-1)]})
    proc = subprocess.run([sys.executable, "-m", "toricap", "capacity", f], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["capacity"]["value"] == 1.0
    proc = subprocess.run([sys.executable, "-m", "toricap", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip()
