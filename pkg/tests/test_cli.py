import csv
import io
import json
from fractions import Fraction

import pytest

from dhl_omega import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def as_json(text):
    return json.loads(text)


def test_eval_standard(capsys):
    code, out, _ = run(capsys, "eval", "--regime", "standard", "--k", "2", "--theta", "1/2", "--poly", "1@x", "--format", "json")
    assert code == 0
    doc = as_json(out)
    assert {"command", "params", "results", "provenance", "version"} <= set(doc)
    omega = [r for r in doc["results"] if r["name"] == "Omega"][0]
    assert omega["exact"] == "14/3"
    for r in doc["results"]:
        assert {"value", "error_bound", "method"} <= set(r)


def test_eval_extended_exact_I(capsys):
    code, out, _ = run(capsys, "eval", "--regime", "extended", "--k", "4", "--theta", "1/2", "--poly", "12,63,100@1-x", "--format", "json")
    assert code == 0
    I = [r for r in as_json(out)["results"] if r["name"] == "I"][0]
    assert I["exact"] == "2977019/51030"


def test_eval_constraint_violation(capsys):
    code, _, err = run(capsys, "eval", "--regime", "epsilon", "--k", "3", "--theta", "1/2", "--eps", "1/5", "--ell", "2", "--poly", "1")
    assert code == cli.EXIT_CONSTRAINT
    assert err


def test_float_flag_rejected(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["eval", "--regime", "standard", "--k", "2", "--theta", "0.5", "--poly", "1"])
    assert exc.value.code == cli.EXIT_CONSTRAINT


def test_zero_poly_is_numeric_failure(capsys):
    code, _, _ = run(capsys, "eval", "--regime", "standard", "--k", "2", "--theta", "1/2", "--poly", "0@x")
    assert code == cli.EXIT_NUMERIC


def test_optimize(capsys):
    code, out, _ = run(capsys, "optimize", "--regime", "standard", "--k", "2", "--theta", "1/2", "--degree", "0", "--format", "json")
    assert code == 0
    row = as_json(out)["results"][0]
    assert row["value"] == pytest.approx(14 / 3, abs=1e-12)
    assert "eigen_residual" in row and "witness" in row


def test_optimize_table_g_row(capsys):
    code, out, _ = run(capsys, "optimize", "--regime", "epsilon", "--k", "8", "--theta", "1/4", "--eps", "1/10", "--degree", "2", "--format", "json")
    assert code == 0
    assert as_json(out)["results"][0]["value"] <= 25.9038


def test_byte_identical_except_timestamp(capsys):
    argv = ("optimize", "--regime", "epsilon", "--k", "4", "--theta", "1/4", "--eps", "1/5", "--degree", "2", "--format", "json")
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    strip = lambda s: "\n".join(l for l in s.splitlines() if '"timestamp"' not in l)
    assert strip(a) == strip(b)


def test_csv_parses(capsys):
    code, out, _ = run(capsys, "table", "C", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 18
    first = [r for r in rows if r["k"] == "3" and r["column"] == "theta=1/4"][0]
    assert abs(float(first["value"]) - 8.15176) < 1e-3
    assert "\r\n" in out


def test_table_text(capsys):
    code, out, _ = run(capsys, "table", "B")
    assert code == 0
    assert "GEH" in out and "FAIL" not in out


def test_config_round_trip(tmp_path, capsys):
    args = cli.parse_args(["optimize", "--regime", "epsilon", "--k", "5", "--theta", "1/4", "--eps", "1/6", "--degree", "2", "--tol", "1e-11"])
    path = tmp_path / "run.cfg"
    path.write_text("# saved run\n" + cli.dump_config(args))
    again = cli.parse_args(["optimize", "--config", str(path)])
    for key in ("regime", "k", "theta", "eps", "degree", "tol", "format"):
        assert getattr(again, key) == getattr(args, key)
    override = cli.parse_args(["optimize", "--config", str(path), "--k", "6"])
    assert override.k == 6 and override.eps == Fraction(1, 6)


def test_config_unknown_key(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("colour=blue\n")
    with pytest.raises(SystemExit):
        cli.parse_args(["eval", "--config", str(path)])


def test_verify_identities(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "identities", "--format", "json")
    assert code == 0
    assert all(r["pass"] for r in as_json(out)["results"])


def test_verify_collapse_small(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "collapse", "--k", "4", "--samples", "1e6", "--seed", "42", "--format", "json")
    assert code == 0
    assert all(r["value"] <= 4 for r in as_json(out)["results"])


def test_verify_failure_exit(monkeypatch, capsys):
    monkeypatch.setattr(cli, "_suite_identities", lambda args: [{"check": "x", "value": 1.0, "limit": 0.0, "pass": False}])
    code, _, _ = run(capsys, "verify", "--suite", "identities")
    assert code == cli.EXIT_VERIFY
