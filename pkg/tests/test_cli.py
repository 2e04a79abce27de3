import json
import math
import subprocess
import sys

import numpy as np
import pytest

from abloop.cli import main, parse_angle


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def kv(text):
    return dict(line.split("=", 1) for line in text.splitlines())


def test_parse_angle():
    assert parse_angle("pi/2") == math.pi / 2
    assert parse_angle("-3*pi/4") == -3 * math.pi / 4
    assert parse_angle("0.5") == 0.5
    with pytest.raises(ValueError):
        parse_angle("__import__('os')")


def test_gate_zero_field(capsys):
    code, out, _ = run(capsys, "gate", "--B", "0", "--UoverJ", "1e4")
    rec = kv(out)
    assert code == 0
    assert abs(float(rec["ab_phase_output"])) < 2e-3
    assert float(rec["entangling_phase"]) == pytest.approx(-math.pi / 2, abs=2e-3)


def test_gate_phi_half_pi(capsys):
    _, base, _ = run(capsys, "gate", "--B", "0", "--UoverJ", "1e4")
    code, out, _ = run(capsys, "gate", "--phi", "pi/2", "--UoverJ", "1e4")
    diff = float(kv(out)["entangling_phase"]) - float(kv(base)["entangling_phase"])
    assert code == 0 and diff == pytest.approx(math.pi / 2, abs=2e-3)


def test_gate_strict_regime(capsys):
    assert run(capsys, "gate", "--UoverJ", "5", "--strict")[0] == 3
    code, out, _ = run(capsys, "gate", "--UoverJ", "5")
    assert code == 0 and "blockade regime invalid" in kv(out)["warnings"]


def test_gate_json_and_common(capsys):
    code, out, _ = run(capsys, "gate", "--protocol", "common", "--B", "0.5", "--format", "json")
    rec = json.loads(out)
    assert code == 0 and rec["protocol"] == "common"
    assert 1 - rec["fidelity"] == pytest.approx(0.006205172515248214, rel=1e-6)
    assert len(rec["leakage"]) == 4


@pytest.mark.parametrize("argv", [
    ["gate", "--J", "-1"],
    ["gate", "--protocol", "common", "--t-joint", "-2"],
    ["gate", "--phi", "pi/"],
    ["gate", "--config", "/nonexistent/file.ini"],
    ["sweep", "--d-num", "0"],
    ["sweep", "--V0-min", "-1"],
    ["timing", "--max-m", "0"],
    ["timing", "--J", "0"],
    ["blockade", "--J", "1", "--U", "0.0"],
    ["blockade", "--J", "1"],
])
def test_invalid_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "error" in err


def test_internal_error_exit_1(capsys, monkeypatch):
    import abloop.cli as cli

    def boom(*a, **k):
        raise RuntimeError("boom")

    monkeypatch.setitem(cli.COMMANDS, "blockade", boom)
    assert run(capsys, "blockade", "--J", "1", "--U", "2")[0] == 1


def test_blockade_example(capsys):
    code, out, _ = run(capsys, "blockade", "--J", "0.1", "--U", "5")
    rec = kv(out)
    assert code == 0
    assert float(rec["I"]) == pytest.approx(0.002, rel=1e-9)
    assert float(rec["max_leakage"]) == pytest.approx(4 * 0.01 / (25 + 4 * 0.01), rel=1e-8)
    assert float(rec["E_minus"]) == pytest.approx((5 - math.sqrt(25.04)) / 2, rel=1e-8)


def test_timing_tables(capsys):
    code, out, _ = run(capsys, "timing", "--max-m", "10", "--no-simulate")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "m,n,mismatch,gate_error,convention"
    assert lines[5].startswith("5,3,0.0101525")
    code, out, _ = run(capsys, "timing", "--max-m", "1", "--no-simulate")
    assert out.splitlines()[1].startswith("1,0,0.414213")


def test_timing_simulated(capsys):
    code, out, _ = run(capsys, "timing", "--max-m", "5", "--B", "0.5")
    row = out.splitlines()[5].split(",")
    assert code == 0 and float(row[3]) == pytest.approx(0.006205172515248214, rel=1e-6)


def test_sweep_single_point_matches_blockade_rows(capsys):
    code, out, _ = run(capsys, "sweep", "--d", "60", "--V0", "5")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 2
    from abloop.trap import gaas_device, gate_time
    assert float(lines[1].split(",")[6]) == pytest.approx(gate_time(gaas_device(5.0, 60.0)).T, rel=1e-8)


def test_default_sweep_monotone(capsys, tmp_path):
    path = tmp_path / "s.csv"
    assert run(capsys, "sweep", "-o", str(path))[0] == 0
    data = np.genfromtxt(path, delimiter=",", names=True, dtype=None, encoding=None)
    assert len(data) == 2500
    T = data["T_ps"].reshape(50, 50)
    t34 = data["t34_meV"].reshape(50, 50)
    assert np.all(np.diff(T, axis=0) > 0) and np.all(np.diff(T, axis=1) > 0)
    assert np.all(np.diff(t34, axis=0) < 0) and np.all(np.diff(t34, axis=1) < 0)


def test_config_file_and_override(capsys, tmp_path):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[blockade]\nJ = 0.1\nU = 5\n")
    _, a, _ = run(capsys, "blockade", "--config", str(cfg))
    assert kv(a)["I"] == "0.002"
    _, b, _ = run(capsys, "blockade", "--config", str(cfg), "--U", "10")
    assert kv(b)["I"] == "0.001"
    cfg.write_text("[blockade]\nJ = zero\nU = 5\n")
    code, _, err = run(capsys, "blockade", "--config", str(cfg))
    assert code == 2 and "'J'" in err


@pytest.mark.parametrize("argv", [
    ["gate", "--phi", "pi/3"],
    ["sweep", "--d-num", "7", "--V0-num", "5"],
    ["timing", "--max-m", "6"],
    ["blockade", "--J", "0.3", "--U", "40", "--format", "json"],
])
def test_byte_identical_reruns(argv):
    cmd = [sys.executable, "-m", "abloop", *argv]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True,
                       env={**__import__("os").environ, "ABLOOP_THREADS": "4"}).stdout
    assert a == b and a


def test_inline_comments_in_config(capsys, tmp_path):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[gate]\nphi = pi/2   ; angle\nUoverJ = 1e4\n")
    code, out, _ = run(capsys, "gate", "--config", str(cfg))
    assert code == 0 and float(kv(out)["phi_ab"]) == pytest.approx(math.pi / 2, rel=1e-8)
