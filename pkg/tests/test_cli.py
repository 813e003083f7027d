import csv
import io
import json

import pytest

from miscube import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_count_q1(capsys):
    code, out, _ = run(capsys, "count", "--n", "1")
    doc = json.loads(out)
    assert code == 0 and doc["count"] == "2"
    assert doc["ratio"].startswith("0.70710678118654752")
    assert set(doc["meta"]) == {"elapsed_ms", "workers"}


def test_count_across_workers(capsys):
    docs = []
    for w in ("1", "4"):
        code, out, _ = run(capsys, "count", "--n", "4", "--workers", w)
        assert code == 0
        doc = json.loads(out)
        doc.pop("meta")
        docs.append(doc)
    assert docs[0] == docs[1] and docs[0]["count"] == "42"


def test_count_csv(capsys):
    code, out, _ = run(capsys, "count", "--n", "3", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and rows[0]["count"] == "6"


def test_count_budget(capsys):
    code, out, _ = run(capsys, "count", "--n", "5", "--budget-ms", "0")
    assert code == 3 and json.loads(out)["partial"] is True


def test_count_over_cap_is_usage_error(capsys):
    code, _, err = run(capsys, "count", "--n", "9")
    assert code == 2 and "cap" in err


def test_workers_env_default(monkeypatch, capsys):
    monkeypatch.setenv("MISCUBE_WORKERS", "3")
    code, out, _ = run(capsys, "count", "--n", "2")
    assert json.loads(out)["meta"]["workers"] == 3


def test_bad_workers(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["count", "--n", "3", "--workers", "0"])
    assert info.value.code == 2


def test_unknown_suite(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["verify", "--suite", "everything"])
    assert info.value.code == 2


def test_verify_single_suite(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "labeling")
    doc = json.loads(out)
    assert code == 0 and doc["payload"]["ok"]
    assert all(c["violations"] == 0 for c in doc["payload"]["suites"][0]["claims"])


def test_verify_fault_injection(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "isoperimetry", "--fault", "expansion")
    doc = json.loads(out)
    claims = {c["name"]: c for c in doc["payload"]["suites"][0]["claims"]}
    assert code == 1
    assert claims["even_sets_expand"]["violations"] > 0 and claims["even_sets_expand"]["witness"]


def test_verify_csv_and_out(tmp_path, capsys):
    target = tmp_path / "r.csv"
    code, out, _ = run(capsys, "verify", "--suite", "projection", "--format", "csv", "--out", str(target))
    assert code == 0 and out == ""
    rows = list(csv.DictReader(target.open()))
    assert rows and all(r["violations"] == "0" for r in rows)


def test_peel_even_empty_rule(capsys):
    code, out, _ = run(capsys, "peel", "--n", "3", "--I", "even", "--rule", "empty")
    doc = json.loads(out)
    assert code == 0 and all(doc["checks"].values())
    assert doc["X"] == "00" and doc["removed"] == "69"


def test_peel_canonical_support_rule(capsys):
    code, out, _ = run(capsys, "peel", "--n", "4", "--I", "canonical:1:0:0xF", "--rule", "support:4")
    doc = json.loads(out)
    assert code == 0 and doc["support"] == 4
    assert doc["trace"]["xi"].endswith("1")
    assert doc["alpha"]["final"] is True
    code, out2, _ = run(capsys, "peel", "--n", "4", "--I", "canonical:1:0:0xF")
    assert json.loads(out2)["trace"] == doc["trace"]


def test_peel_empty_W(capsys):
    code, out, _ = run(capsys, "peel", "--n", "3", "--I", "odd", "--W", "empty", "--rule", "empty")
    doc = json.loads(out)
    assert code == 0 and doc["trace"]["xi"] == "" and "alpha" not in doc


def test_peel_hex_input(capsys):
    code, out, _ = run(capsys, "peel", "--n", "3", "--I", "96", "--rule", "maxdeg:1")
    assert code == 0 and json.loads(out)["trace"]["rule"] == "maxdeg:1"


@pytest.mark.parametrize("spec", ["zz", "canonical:9:0:0", "canonical:1:0:0xFF", "canonical:1:0", "01"])
def test_peel_bad_specs(capsys, spec):
    code, _, err = run(capsys, "peel", "--n", "3", "--I", spec)
    assert code == 2 and err


def test_bench(capsys):
    code, out, _ = run(capsys, "bench", "--n", "4", "--workers", "1,4", "--reps", "2")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and [r["workers"] for r in rows] == ["1", "4"]
    assert {r["count"] for r in rows} == {"42"}


def test_bench_n5(capsys):
    code, out, _ = run(capsys, "bench", "--n", "5", "--workers", "4", "--reps", "1")
    assert code == 0 and "1670" in out


def test_bench_zero_reps(capsys):
    code, out, _ = run(capsys, "bench", "--n", "4", "--reps", "0")
    assert code == 0 and out == "n,workers,reps,count,median_ms,min_ms\n"
