import csv
import json
import subprocess
import sys

import pytest

from heckepairs import __version__, cli


def run_cli(capsys, *argv):
    status = cli.main(list(argv))
    out, err = capsys.readouterr()
    return status, out, err


def test_trace_output(capsys):
    status, out, _ = run_cli(capsys, "trace", "--k", "12", "--n", "1")
    assert status == 0
    doc = json.loads(out)
    assert {"k": 12, "n": 1, "trace": "1"}.items() <= doc.items()
    assert doc["version"] == __version__
    assert doc["config"]["subcommand"] == "trace" and doc["config"]["k"] == 12


def test_big_trace_is_a_string(capsys):
    _, out, _ = run_cli(capsys, "trace", "--k", "60", "--n", "97")
    assert isinstance(json.loads(out)["trace"], str)


def test_bound_weight_24(capsys):
    status, out, _ = run_cli(capsys, "bound", "--k", "24", "--N", "1", "--p", "2")
    assert status == 0
    doc = json.loads(out)
    assert doc["pair_count_exact"] == 2
    assert doc["key_rhs"] >= 2 and doc["rhs"] >= 2
    assert doc["m_star"] == 3 and doc["delta"] == "1/3"


def test_maeda_lines(capsys):
    status, out, _ = run_cli(capsys, "maeda", "--k-range", "12:30", "--p", "2")
    assert status == 0
    header, *rows = [json.loads(line) for line in out.splitlines()]
    assert header["rows"] == len(rows) == 10
    assert [r["k"] for r in rows] == list(range(12, 31, 2))
    for r in rows:
        assert r["squarefree"] and r["pair_count"] == r["dim"]
        assert r["irreducible"] == ("yes" if r["dim"] else "no")


def test_selberg_check(capsys):
    status, out, _ = run_cli(capsys, "selberg", "--a=-1/10", "--b", "1/10", "--M", "9", "--check")
    assert status == 0
    doc = json.loads(out)
    assert doc["check"]["majorization_ok"] and doc["check"]["mean_ok"]
    zero = next(c for c in doc["coeffs"] if c["n"] == 0)
    assert zero["re"] == pytest.approx(0.3)


def test_angles_and_basis_and_hecke(capsys):
    _, out, _ = run_cli(capsys, "angles", "--k", "24", "--p", "2", "--tolerance-bits", "30")
    assert json.loads(out)["dim"] == 2
    _, out, _ = run_cli(capsys, "basis", "--k", "24", "--prec", "4")
    assert json.loads(out)["dim"] == 2
    _, out, _ = run_cli(capsys, "hecke", "--k", "24", "--n", "2")
    doc = json.loads(out)
    assert doc["charpoly"]["coeffs"] == ["-20468736", "-1080", "1"] and doc["trace"] == "1080"


def test_moments_csv(capsys):
    status, out, _ = run_cli(capsys, "moments", "--k", "36", "--p", "3", "--m-max", "4", "--format", "csv")
    assert status == 0
    rows = list(csv.DictReader(out.splitlines()))
    assert [int(r["m"]) for r in rows] == [0, 1, 2, 3, 4]
    for r in rows[1:]:
        assert float(r["deviation"]) <= float(r["lemma1"])


def test_mc_with_raw_csv(capsys, tmp_path):
    raw = tmp_path / "raw.csv"
    argv = ["mc", "--p", "2", "--dims", "10,40", "--trials", "100", "--m", "1", "--seed", "3", "--csv", str(raw)]
    status, out, _ = run_cli(capsys, *argv)
    assert status == 0
    doc = json.loads(out)
    assert [d["dim"] for d in doc["per_dim"]] == [10, 40]
    rows = list(csv.DictReader(raw.read_text().splitlines()))
    assert len(rows) == 200


def test_output_file(capsys, tmp_path):
    dest = tmp_path / "t.json"
    status, out, _ = run_cli(capsys, "trace", "--k", "12", "--n", "2", "--output", str(dest))
    assert status == 0 and out == ""
    doc = json.loads(dest.read_text())
    assert doc["trace"] == "-24" and "output" not in doc["config"]


@pytest.mark.parametrize(
    "argv",
    [
        ["trace", "--k", "13", "--n", "1"],
        ["trace", "--k", "12", "--n", "0"],
        ["angles", "--k", "12", "--p", "4"],
        ["selberg", "--a", "1/4", "--b", "1/8", "--M", "3"],
        ["selberg", "--a", "x", "--b", "1/8", "--M", "3"],
        ["bound", "--k", "12", "--N", "4", "--p", "2"],
        ["bound", "--k", "12", "--p", "2", "--delta", "3/4"],
        ["mc", "--p", "2", "--dims", "100,10", "--trials", "200"],
        ["mc", "--p", "2", "--trials", "50"],
        ["maeda", "--k-range", "20:12"],
        ["trace", "--k", "12", "--n", "1", "--format", "csv"],
    ],
)
def test_validation_errors_exit_1(capsys, argv):
    status, out, err = run_cli(capsys, *argv)
    assert status == 1 and out == "" and "error" in err


def test_usage_errors_exit_1(capsys):
    for argv in (["nonsense"], ["trace", "--k", "12"], ["trace", "--k", "12", "--n", "1", "--bogus"]):
        with pytest.raises(SystemExit) as exc:
            cli.main(argv)
        assert exc.value.code == 1
    assert "usage" in capsys.readouterr().err


def test_consistency_failure_exit_2(capsys, monkeypatch):
    monkeypatch.setattr(cli.hecke, "cayley_hamilton_residual", lambda M, cp: [[1]])
    status, out, err = run_cli(capsys, "hecke", "--k", "12", "--n", "2")
    assert status == 2 and "consistency" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["trace", "--k", "40", "--n", "17"],
        ["bound", "--k", "36", "--p", "3"],
        ["mc", "--p", "3", "--dims", "10,30", "--trials", "100", "--seed", "11"],
        ["selberg", "--a=-1/3", "--b", "1/5", "--M", "12", "--check"],
        ["moments", "--k", "28", "--p", "5", "--m-max", "6"],
    ],
)
def test_byte_identical_reruns(capsys, argv):
    first = run_cli(capsys, *argv)
    second = run_cli(capsys, *argv)
    assert first == second and first[0] == 0


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "heckepairs", "trace", "--k", "12", "--n", "2"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert json.loads(proc.stdout)["trace"] == "-24"
