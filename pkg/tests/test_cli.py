import csv
import io
import json
import subprocess
import sys

import pytest

from diamcensus.cli import main
from diamcensus.graph import LabeledGraph, diameter


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def rows_of(out):
    return json.loads(out)["results"]


def test_census_json(capsys):
    code, out = run(capsys, "census", "--n", "4")
    assert code == 0
    doc = json.loads(out)
    assert doc["status"] == "ok"
    assert doc["config"]["n"] == 4 and doc["config"]["seed"] == 0
    diam = {r["d"]: r["value"] for r in doc["results"] if r["quantity"] == "diameter_count"}
    assert diam["1"] == "1" and diam["2"] == "25" and diam["3"] == "12"


def test_census_over_cap_is_domain_exit(capsys):
    code, _ = run(capsys, "census", "--n", "12")
    assert code == 2


def test_census_cap_override(capsys):
    code, _ = run(capsys, "census", "--n", "6", "--oracle-cap", "5")
    assert code == 2


def test_bound_csv_columns(capsys):
    code, out = run(capsys, "bound", "--n", "9", "--d", "7", "--scheme", "thm2", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == ["n", "d", "quantity", "value", "scheme", "case_label"]
    got = {(r["quantity"], r["case_label"]): r["value"] for r in rows}
    assert got[("case_sum", "H2-shaped")] == "2177280"
    assert got[("2h2", "")] == "7620480"
    assert got[("parts_sum_to_total", "")] == "true"
    assert got[("total_over_2h2_decimal", "")] == "0.904761904762"


def test_bound_thm1_c43(capsys):
    code, out = run(capsys, "bound", "--n", "12", "--d", "8")
    assert code == 0
    got = {(r["quantity"], r["case_label"]): r["value"] for r in rows_of(out)}
    assert got[("case_sum", "C43")] == "1402516684800"
    assert got[("2h1", "")] == "5959546306560"
    assert got[("C43_le_2h1", "C43")] == "true"


def test_bound_domain_errors(capsys):
    assert run(capsys, "bound", "--n", "8", "--d", "8")[0] == 2
    # outside the snake window the split is still reported, without h2
    code, out = run(capsys, "bound", "--n", "9", "--d", "5", "--scheme", "thm2")
    doc = json.loads(out)
    assert code == 0 and "h2" not in {r["quantity"] for r in doc["results"]}
    assert any("h2 not reported" in m for m in doc["messages"])


def test_digits_option(capsys):
    _, out = run(capsys, "bound", "--n", "9", "--d", "7", "--scheme", "thm2", "--digits", "4")
    got = {r["quantity"]: r["value"] for r in rows_of(out)}
    assert got["total_over_2h2_decimal"] == "0.9048"


def test_text_format(capsys):
    code, out = run(capsys, "census", "--n", "3", "--format", "text")
    assert code == 0 and "diameter_count" in out


def test_output_file(capsys, tmp_path):
    target = tmp_path / "r.json"
    assert run(capsys, "census", "--n", "3", "--output", str(target))[0] == 0
    assert json.loads(target.read_text())["config"]["command"] == "census"


@pytest.mark.parametrize(
    "family, args, d",
    [("h1", ["--n", "12", "--d", "6"], 6), ("h2", ["--n", "14", "--d", "11"], 11), ("block", ["--s", "4"], None)],
)
def test_sample_writes_valid_graphs(capsys, tmp_path, family, args, d):
    out = tmp_path / "s"
    code, report = run(capsys, "sample", family, *args, "--count", "4", "--seed", "9", "--out", str(out))
    assert code == 0
    files = sorted(out.iterdir())
    assert [f.name for f in files] == [f"{family}_{k:05d}.txt" for k in range(4)]
    for f in files:
        G = LabeledGraph.from_text(f.read_text())
        if d is not None:
            assert diameter(G) == d
    got = {r["quantity"]: r["value"] for r in rows_of(report)}
    assert got["samples_valid"] == "4"


def test_sample_determinism(capsys, tmp_path):
    for name in ("a", "b"):
        run(capsys, "sample", "h1", "--n", "10", "--d", "5", "--count", "3", "--seed", "4", "--out", str(tmp_path / name))
    for k in range(3):
        f = f"h1_{k:05d}.txt"
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_sample_domain_errors(capsys, tmp_path):
    assert run(capsys, "sample", "h2", "--n", "7", "--d", "5", "--out", str(tmp_path))[0] == 2
    assert run(capsys, "sample", "h1", "--n", "7", "--out", str(tmp_path))[0] == 2
    assert run(capsys, "sample", "block", "--s", "1", "--out", str(tmp_path))[0] == 2


def test_sample_retry_exhaustion(capsys, tmp_path):
    code = main(["sample", "block", "--s", "12", "--retry-cap", "1", "--seed", "1", "--out", str(tmp_path)])
    assert code == 3
    assert "retry cap" in capsys.readouterr().err


@pytest.mark.parametrize("suite", ["lemma1", "gf", "oracle-dp", "eq11"])
def test_verify_suites(capsys, suite):
    code, out = run(capsys, "verify", suite, "--trials", "2000", "--max-n", "8", "--oracle-max-n", "5")
    assert code == 0
    assert json.loads(out)["status"] == "ok"


def test_report_matches_golden(capsys, golden_dir):
    code, out = run(capsys, "report", "--format", "csv")
    assert code == 0
    assert out == (golden_dir / "trend_report.csv").read_text()


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "diamcensus", "census", "--n", "2", "--format", "csv"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "n,d,quantity,value,scheme,case_label"
