import csv
import json
import math
import subprocess
import sys

import pytest

from oracles import KNOWN_MINIMA
from logsphere.asymptotics import LEADING
from logsphere.cli import RunConfig, main, read_energies


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def parse_kv(text):
    out = {}
    for line in text.splitlines():
        if " = " in line:
            k, v = line.split(" = ", 1)
            out[k] = v
    return out


def strip_metadata(path):
    data = json.loads(path.read_text())
    data.pop("metadata")
    return data


def test_minimize_writes_outputs(tmp_path, capsys):
    code, out, _ = run(["minimize", "-n", "4", "--restarts", "20", "--seed", "7", "--outdir", str(tmp_path)], capsys)
    assert code == 0
    cfg = json.loads((tmp_path / "config_4.json").read_text())
    assert cfg["energy"] == pytest.approx(-6 * math.log(8 / 3), abs=1e-8)
    assert len(cfg["points"]) == 4 and cfg["seed"] == 7 and "created" in cfg["metadata"]
    (row,) = read_energies(tmp_path / "energies.csv")
    assert row["n"] == 4 and row["seed"] == 7 and row["energy"] == cfg["energy"]
    with open(tmp_path / "energies.csv") as fh:
        assert next(csv.reader(fh)) == ["n", "seed", "energy", "min_separation", "converged"]


def test_minimize_two_points(tmp_path, capsys):
    code, out, _ = run(["minimize", "-n", "2", "--restarts", "3", "--outdir", str(tmp_path)], capsys)
    assert code == 0
    assert json.loads((tmp_path / "config_2.json").read_text())["energy"] == pytest.approx(-2 * math.log(2), abs=1e-8)


def test_rerun_is_byte_identical_apart_from_metadata(tmp_path, capsys):
    argv = ["minimize", "-n", "5", "8", "--restarts", "4", "--seed", "2"]
    assert run(argv + ["--outdir", str(tmp_path / "a")], capsys)[0] == 0
    assert run(argv + ["--outdir", str(tmp_path / "b"), "--workers", "2"], capsys)[0] == 0
    for n in (5, 8):
        assert strip_metadata(tmp_path / "a" / f"config_{n}.json") == strip_metadata(tmp_path / "b" / f"config_{n}.json")
    assert (tmp_path / "a" / "energies.csv").read_bytes() == (tmp_path / "b" / "energies.csv").read_bytes()


def test_duplicate_rows_rejected(tmp_path, capsys):
    argv = ["minimize", "-n", "3", "--restarts", "2", "--outdir", str(tmp_path)]
    assert run(argv, capsys)[0] == 0
    code, _, err = run(argv, capsys)
    assert code == 1 and "already has rows" in err
    assert len(read_energies(tmp_path / "energies.csv")) == 1
    # a new seed appends
    assert run(argv + ["--seed", "9"], capsys)[0] == 0
    assert len(read_energies(tmp_path / "energies.csv")) == 2


def test_from_config_reproduces(tmp_path, capsys):
    assert run(["minimize", "-n", "6", "--restarts", "3", "--seed", "4", "--outdir", str(tmp_path / "a")], capsys)[0] == 0
    src = tmp_path / "a" / "config_6.json"
    assert run(["minimize", "--from-config", str(src), "--outdir", str(tmp_path / "b")], capsys)[0] == 0
    assert strip_metadata(src) == strip_metadata(tmp_path / "b" / "config_6.json")


def test_run_config_round_trip():
    cfg = RunConfig(n=[10, 20], restarts=7, grad_tol=1e-8, seed=3, step0=0.01, lbfgs_memory=4, outdir="x")
    text = cfg.to_json()
    assert RunConfig.from_json(text) == cfg
    assert RunConfig.from_json(text).to_json() == text


def test_usage_errors(tmp_path, capsys):
    assert run(["minimize"], capsys)[0] == 1
    assert run(["minimize", "-n", "1"], capsys)[0] == 1
    assert run(["minimize", "-n", "4", "--restarts", "0", "--outdir", str(tmp_path)], capsys)[0] == 1
    assert run(["bogus"], capsys)[0] == 1
    assert run([], capsys)[0] == 1


def test_lattice_commands(capsys):
    code, out, _ = run(["lattice", "--constants"], capsys)
    vals = parse_kv(out)
    assert code == 0
    assert float(vals["c_bhs"]) == pytest.approx(-0.0556053, abs=5e-7)
    assert float(vals["rsz_minw_lower"]) == pytest.approx(-4.6842707, abs=5e-7)

    code, out, _ = run(["lattice", "--triangular", "--density", "1"], capsys)
    tri = float(parse_kv(out)["W[m=1.0]"])
    assert code == 0 and tri == pytest.approx(-4.1504128, abs=5e-7)

    code, out, _ = run(["lattice", "--basis", "1", "0", "0", "1", "--density", "1"], capsys)
    vals = parse_kv(out)
    assert code == 0 and vals["tau"] == "0.0 + 1.0i"
    assert float(vals["W[m=1.0]"]) > tri

    code, out, _ = run(["lattice", "--tau", "-0.5", "0.8660254037844386"], capsys)
    assert float(parse_kv(out)["W[m=1]"]) == pytest.approx(tri, abs=1e-12)

    assert run(["lattice", "--basis", "1", "2", "2", "4"], capsys)[0] == 1
    assert run(["lattice", "--tau", "0", "-1"], capsys)[0] == 1
    assert run(["lattice", "--square", "--density", "-2"], capsys)[0] == 1


def write_csv(path, table):
    lines = ["n,seed,energy,min_separation,converged"]
    lines += [f"{n},0,{e!r},1.0,true" for n, e in table]
    path.write_text("\n".join(lines) + "\n")


def test_fit_recovers_planted_constant(tmp_path, capsys):
    planted = -0.0556
    ns = [16, 32, 64, 128, 256, 512, 1024, 2048, 4096]
    table = [(n, (planted + 0.3 / math.sqrt(n)) * n + LEADING * n * n - 0.5 * n * math.log(n)) for n in ns]
    path = tmp_path / "energies.csv"
    write_csv(path, table)
    code, out, _ = run(["fit", str(path), "--model", "power"], capsys)
    assert code == 0 and out.startswith("C_hat=")
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["c_hat"] == pytest.approx(planted, abs=1e-3)
    assert report["within_bounds"] is True


def test_fit_exact_minima(tmp_path, capsys):
    path = tmp_path / "energies.csv"
    write_csv(path, sorted(KNOWN_MINIMA.items()))
    out_path = tmp_path / "r.json"
    code, _, _ = run(["fit", str(path), "--model", "mean", "--out", str(out_path)], capsys)
    assert code == 0
    rows = {r["n"]: r["r_n"] for r in json.loads(out_path.read_text())["residuals"]}
    for n, e in KNOWN_MINIMA.items():
        assert rows[n] == pytest.approx((e - LEADING * n * n + 0.5 * n * math.log(n)) / n, abs=1e-14)
    assert rows[2] == pytest.approx((3 * math.log(2) - 2) / 2, abs=1e-15)


def test_fit_uses_best_energy_per_n(tmp_path, capsys):
    path = tmp_path / "energies.csv"
    table = sorted(KNOWN_MINIMA.items())
    write_csv(path, table)
    with open(path, "a") as fh:
        fh.write(f"12,5,{KNOWN_MINIMA[12] + 1.0!r},1.0,true\n")
    assert run(["fit", str(path), "--model", "mean"], capsys)[0] == 0
    rows = {r["n"]: r["e_min"] for r in json.loads((tmp_path / "report.json").read_text())["residuals"]}
    assert rows[12] == KNOWN_MINIMA[12]


def test_fit_errors(tmp_path, capsys):
    code, _, err = run(["fit", str(tmp_path / "missing.csv")], capsys)
    assert code == 1 and "no such file" in err
    path = tmp_path / "few.csv"
    write_csv(path, [(2, -1.0), (3, -3.0)])
    assert run(["fit", str(path)], capsys)[0] == 1


def test_selftest(capsys):
    code, out, _ = run(["selftest"], capsys)
    assert code == 0
    assert out.count("PASS") == 6 and "FAIL" not in out


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "logsphere", "lattice", "--constants"], capture_output=True, text=True
    )
    assert proc.returncode == 0 and "c_bhs" in proc.stdout
