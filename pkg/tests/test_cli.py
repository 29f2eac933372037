import json
import math
import subprocess
import sys

import numpy as np
import pytest

import spin2mp.oracle
from spin2mp.cli import COLUMNS, main
from spin2mp.errors import NoPlateau

SQ2 = math.sqrt(2.0)
SQ6 = math.sqrt(6.0)
HEADER = ("a,S,dS_da,d2S_da2,F_R,RFS_fd,RFS_d2,fps,xi_long,xi_trans,"
          "string_order,fluct_zz,lambda1,limit_flag")


def parse_point_text(out):
    vals = {}
    for line in out.strip().splitlines():
        key, _, rest = line.partition(":")
        vals[key.strip()] = rest.strip()
    return vals


def csv_rows(text):
    lines = [l for l in text.splitlines() if l and not l.startswith("#")]
    header = lines[0].split(",")
    return [dict(zip(header, l.split(","))) for l in lines[1:]]


def test_point_text_vbs_landmarks(capsys):
    rc = main(["point", "--preset", "acritical", "--a", repr(SQ6)])
    assert rc == 0
    vals = parse_point_text(capsys.readouterr().out)
    assert float(vals["S"]) == pytest.approx(math.log2(5), abs=1e-9)
    assert float(vals["lambda1"]) == pytest.approx(10.0, rel=1e-12)
    assert float(vals["xi_long"]) == pytest.approx(1 / math.log(2), rel=1e-9)
    assert float(vals["fluct_zz"]) == pytest.approx(2.0, abs=1e-9)
    assert vals["limit_flag"] == "false"
    # aligned key: value layout, one field per line
    assert set(vals) == set(COLUMNS)


def test_point_text_critical_landmark(capsys):
    rc = main(["point", "--preset", "critical", "--a", repr(SQ2)])
    assert rc == 0
    vals = parse_point_text(capsys.readouterr().out)
    assert float(vals["S"]) == pytest.approx(math.log2(3), abs=1e-9)


def test_point_limit_row_at_qcp(capsys):
    rc = main(["point", "--preset", "critical", "--a", "0"])
    assert rc == 0
    vals = parse_point_text(capsys.readouterr().out)
    assert vals["limit_flag"] == "true"
    assert float(vals["a"]) == 0.0
    assert float(vals["S"]) <= 1e-6
    assert vals["xi_long"] == "inf" and vals["xi_trans"] == "inf"


def test_point_json(capsys):
    rc = main(["point", "--preset", "critical", "--a", "1", "--format",
               "json"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["params"]["x"] == 0.0 and doc["params"]["gamma"] == 1.0
    row = doc["rows"][0]
    assert row["fluct_zz"] == pytest.approx(2.0, abs=1e-12)
    assert row["string_order"] == pytest.approx(-1.0, abs=1e-9)


def test_point_csv_and_out_file(tmp_path, capsys):
    out = tmp_path / "point.csv"
    rc = main(["point", "--preset", "acritical", "--a", "1", "--format",
               "csv", "--out", str(out)])
    assert rc == 0
    text = out.read_text()
    rows = csv_rows(text)
    assert len(rows) == 1
    assert text.splitlines()[0].startswith("#")
    assert HEADER in text


def test_point_requires_a(capsys):
    assert main(["point", "--preset", "critical"]) == 2


def test_sweep_contract_and_threads(tmp_path, capsys):
    d1, d2 = tmp_path / "s1", tmp_path / "s2"
    args = ["sweep", "--preset", "critical", "--a-min", "0", "--a-max", "2",
            "--a-steps", "21"]
    assert main(args + ["--out-dir", str(d1)]) == 0
    assert main(args + ["--out-dir", str(d2), "--threads", "4"]) == 0
    capsys.readouterr()
    t1 = (d1 / "sweep.csv").read_text()
    t2 = (d2 / "sweep.csv").read_text()
    assert t1 == t2
    lines = t1.splitlines()
    assert lines[0].startswith("# spin2mp")
    assert HEADER in lines
    rows = csv_rows(t1)
    assert len(rows) == 21
    a_vals = [float(r["a"]) for r in rows]
    assert a_vals == sorted(a_vals)
    # limit convention at the degenerate endpoint
    assert rows[0]["limit_flag"] == "true"
    assert rows[1]["limit_flag"] == "false"


def test_sweep_svg(tmp_path, capsys):
    d = tmp_path / "sw"
    rc = main(["sweep", "--preset", "critical", "--a-min", "0.1", "--a-max",
               "2", "--a-steps", "11", "--measures", "entropy,rfs", "--svg",
               "--out-dir", str(d)])
    assert rc == 0
    svg = (d / "sweep.svg").read_text()
    assert svg.count("<polyline") == 2  # main curve plus inset curve
    assert svg.startswith("<svg ")


def test_sweep_usage_errors(tmp_path, capsys):
    base = ["sweep", "--preset", "critical", "--out-dir", str(tmp_path)]
    assert main(base + ["--a-steps", "1"]) == 2
    assert main(base + ["--a-min", "2", "--a-max", "1"]) == 2
    assert main(base + ["--measures", "entropy,bogus"]) == 2
    assert main(base + ["--format", "text"]) == 2
    assert main(["sweep", "--a-min", "0", "--a-max", "1",
                 "--out-dir", str(tmp_path)]) == 2  # x, gamma unset


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("preset = critical\na = 1.0\nformat = json\n"
                   "# comment line\nmeasures = entropy,fluct\n")
    rc = main(["point", "--config", str(cfg)])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    row = doc["rows"][0]
    assert row["S"] == pytest.approx(1.5, abs=1e-9)
    assert row["F_R"] is None and row["xi_long"] is None
    # explicit flag beats the file value
    rc = main(["point", "--config", str(cfg), "--a", repr(SQ2)])
    doc = json.loads(capsys.readouterr().out)
    assert doc["rows"][0]["S"] == pytest.approx(math.log2(3), abs=1e-9)
    assert rc == 0


def test_config_file_rejects_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("bogus = 1\n")
    assert main(["point", "--config", str(cfg), "--a", "1"]) == 2


def test_figures_files_and_landmark(tmp_path, capsys):
    d = tmp_path / "figs"
    rc = main(["figures", "--out-dir", str(d), "--threads", "4"])
    assert rc == 0
    names = sorted(p.name for p in d.iterdir())
    assert names == ["fig%d.%s" % (i, ext)
                     for i in (1, 2, 3, 4) for ext in ("csv", "svg")]
    rows = csv_rows((d / "fig1.csv").read_text())
    best = max(rows, key=lambda r: float(r["S"]))
    assert abs(float(best["a"]) - SQ6) <= 0.011
    svg = (d / "fig1.svg").read_text()
    assert svg.count("<polyline") == 2


def test_oracle_check_passes(capsys):
    rc = main(["oracle-check"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "FAIL" not in out
    assert out.count("PASS") == 24
    assert "24 checks, 24 passed" in out


def test_oracle_check_l_max_guards(capsys):
    assert main(["oracle-check", "--l-max", "10"]) == 2
    assert main(["oracle-check", "--l-max", "13", "--allow-big"]) == 2


def test_oracle_check_detects_injected_fault(monkeypatch, capsys):
    true_fn = spin2mp.oracle.tm_finite_correlator

    def skewed(G, O1, O2, r, L):
        return true_fn(G, O1, O2, r, L) + 1e-6

    monkeypatch.setattr(spin2mp.oracle, "tm_finite_correlator", skewed)
    rc = main(["oracle-check"])
    out = capsys.readouterr().out
    assert rc == 1
    assert "FAIL" in out


def test_exit_code_three_on_numerical_failure(monkeypatch, capsys):
    def boom(*args, **kwargs):
        raise NoPlateau("synthetic")

    monkeypatch.setattr("spin2mp.cli.evaluate_point", boom)
    rc = main(["point", "--preset", "critical", "--a", "1"])
    assert rc == 3
    assert "numerical failure" in capsys.readouterr().err


def test_version_flag(capsys):
    assert main(["--version"]) == 0
    assert capsys.readouterr().out.startswith("spin2mp ")


def test_console_entry_point_smoke():
    proc = subprocess.run([sys.executable, "-m", "spin2mp.cli", "--version"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("spin2mp ")
