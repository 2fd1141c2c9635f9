"""End-to-end tests of the command line front end, driven through main()."""

import csv
import io
import json

import pytest

import gossez_lab.cli as cli
from gossez_lab import verification
from gossez_lab.cli import RunConfig, SCAN_COLUMNS, fmt12, main
from gossez_lab.operators import t_apply
from gossez_lab.sequences import EvConstSeq

HEADER = "lambda,lower_bound,estimate,dim,method,patterns_explored,runtime_ms"


def parse_csv(text: str) -> list[dict]:
    return list(csv.DictReader(io.StringIO(text)))


# ---------------------------------------------------------------------------
# bound


def test_bound_prints_frozen_value(capsys):
    assert main(["bound", "--lambda", "1"]) == 0
    out = capsys.readouterr().out
    assert "d(lambda)     = 0.464101615138" in out
    assert "quarter_bound = 0.25" in out


def test_bound_rejects_out_of_range(capsys):
    assert main(["bound", "--lambda", "0"]) == 2
    assert main(["bound", "--lambda", "5"]) == 2
    err = capsys.readouterr().err
    assert "error:" in err


# ---------------------------------------------------------------------------
# verify


def test_verify_passes(capsys):
    assert main(["verify", "--cases", "30", "--seed", "5"]) == 0
    out = capsys.readouterr().out
    assert "all 11 suites passed" in out
    assert out.count("PASS") == 11
    assert "FAIL" not in out


def test_verify_reports_failure(monkeypatch, capsys):
    real = verification.run_verification

    def corrupted(seed=42, cases=500):
        return real(seed=seed, cases=cases, g_apply=t_apply)

    monkeypatch.setattr(verification, "run_verification", corrupted)
    assert main(["verify", "--cases", "30"]) == 1
    out = capsys.readouterr().out
    assert "FAIL" in out
    assert "counterexample:" in out
    # the counterexample is machine readable
    blob = out.split("counterexample: ", 1)[1].splitlines()[0]
    assert isinstance(json.loads(blob), dict)


def test_verify_rejects_bad_cases(capsys):
    assert main(["verify", "--cases", "0"]) == 2


# ---------------------------------------------------------------------------
# probe


def test_probe_text_output(capsys):
    assert main(["probe", "--lambda", "1", "--dim", "2"]) == 0
    out = capsys.readouterr().out
    assert "estimate              = 1" in out
    assert "method                = exact" in out
    assert "lower_bound           = 0.464101615138" in out
    assert "patterns_explored     = 9" in out
    assert "certificate_x" in out


def test_probe_json_output(capsys):
    assert main(["probe", "--lambda", "1", "--dim", "2", "--format", "json"]) == 0
    blob = json.loads(capsys.readouterr().out)
    assert blob["lambda"] == 1.0
    assert blob["estimate"] == 1.0
    assert blob["dim"] == 2
    assert blob["method"] == "exact"
    assert blob["target"] == {"prefix": [], "tail": "-1"}


def test_probe_csv_output(capsys):
    assert main(["probe", "--lambda", "1", "--dim", "1", "--format", "csv"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == HEADER
    (row,) = parse_csv(out)
    assert float(row["estimate"]) == 1.0
    assert row["method"] == "exact"
    assert row["patterns_explored"] == "3"


def test_probe_output_file(tmp_path, capsys):
    path = tmp_path / "report.txt"
    rc = main(["probe", "--lambda", "2", "--dim", "2", "--output", str(path)])
    assert rc == 0
    assert capsys.readouterr().out == ""
    assert "estimate" in path.read_text()


def test_probe_heuristic_method(capsys):
    rc = main([
        "probe", "--lambda", "1", "--dim", "9",
        "--budget", "30", "--seed", "1",
    ])
    assert rc == 0
    out = capsys.readouterr().out
    # auto resolves to heuristic above dimension 8
    assert "method                = heuristic" in out
    assert "patterns_explored     = 30" in out


def test_probe_custom_target(tmp_path, capsys):
    path = tmp_path / "target.json"
    path.write_text(json.dumps(EvConstSeq((1,), 0).to_json_dict()))
    assert main(["probe", "--lambda", "1", "--dim", "2", "--target", str(path)]) == 0
    out = capsys.readouterr().out
    # no theorem bound away from -e*: the trivial lower bound applies
    assert "lower_bound           = 0" in out
    assert "estimate              = 0" in out


def test_probe_usage_errors(capsys):
    assert main(["probe", "--lambda", "0", "--dim", "2"]) == 2
    assert main(["probe", "--lambda", "1", "--dim", "0"]) == 2
    assert main(["probe", "--lambda", "1", "--dim", "2", "--budget", "0"]) == 2
    assert main(["probe", "--lambda", "1", "--dim", "13", "--method", "exact"]) == 2
    assert main(["probe", "--lambda", "1", "--dim", "2", "--target", "/no/such"]) == 2
    assert capsys.readouterr().err.count("error:") == 5


def test_probe_consistency_failure_exit_code(monkeypatch, capsys):
    monkeypatch.setattr(cli, "theorem_consistency_check", lambda result: False)
    assert main(["probe", "--lambda", "1", "--dim", "1"]) == 1
    out, err = capsys.readouterr()
    assert "consistency failure" in err
    # the report is still emitted so the offending run can be inspected
    assert "estimate" in out


def test_probe_threads_env(monkeypatch, capsys):
    main(["probe", "--lambda", "2", "--dim", "3"])
    serial = capsys.readouterr().out

    monkeypatch.setenv("GOSSEZ_LAB_THREADS", "4")
    assert main(["probe", "--lambda", "2", "--dim", "3"]) == 0
    threaded, err = capsys.readouterr()
    assert err == ""
    drop = lambda text: [l for l in text.splitlines() if "runtime_ms" not in l]
    assert drop(threaded) == drop(serial)

    monkeypatch.setenv("GOSSEZ_LAB_THREADS", "lots")
    assert main(["probe", "--lambda", "2", "--dim", "3"]) == 0
    assert "warning" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# scan


SCAN_ARGS = [
    "scan", "--lambda-min", "0.5", "--lambda-max", "4.0",
    "--steps", "8", "--dim", "2",
]


def test_scan_csv_contents(tmp_path):
    path = tmp_path / "scan.csv"
    assert main(SCAN_ARGS + ["--output", str(path)]) == 0
    text = path.read_text()
    assert text.splitlines()[0] == HEADER
    rows = parse_csv(text)
    assert len(rows) == 8
    grid = [0.5 + i * 0.5 for i in range(8)]
    assert [float(r["lambda"]) for r in rows] == grid
    for r in rows:
        assert float(r["estimate"]) >= float(r["lower_bound"]) - 1e-9
        assert r["dim"] == "2" and r["method"] == "exact"
    # d(1/2) = sqrt(4) - 3/2 and d(4) = sqrt(144) - 12, both exact in floats
    assert float(rows[0]["lower_bound"]) == 0.5
    assert float(rows[-1]["lower_bound"]) == 0.0


def test_scan_deterministic_modulo_runtime(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(SCAN_ARGS + ["--output", str(a)]) == 0
    assert main(SCAN_ARGS + ["--output", str(b)]) == 0

    def stripped(path):
        rows = parse_csv(path.read_text())
        for r in rows:
            r.pop("runtime_ms")
        return rows

    assert stripped(a) == stripped(b)


def test_scan_stdout(capsys):
    rc = main([
        "scan", "--lambda-min", "1", "--lambda-max", "2",
        "--steps", "2", "--dim", "1",
    ])
    assert rc == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == HEADER
    assert len(out.splitlines()) == 3


def test_scan_plot(tmp_path):
    path = tmp_path / "scan.csv"
    rc = main([
        "scan", "--lambda-min", "1", "--lambda-max", "2", "--steps", "2",
        "--dim", "1", "--output", str(path), "--plot",
    ])
    assert rc == 0
    png = tmp_path / "scan.png"
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_scan_plot_explicit_path(tmp_path, capsys):
    png = tmp_path / "figure.png"
    rc = main([
        "scan", "--lambda-min", "1", "--lambda-max", "2", "--steps", "2",
        "--dim", "1", "--plot", str(png),
    ])
    assert rc == 0
    capsys.readouterr()  # CSV went to stdout
    assert png.exists()


def test_scan_plot_needs_output_for_default_path(capsys):
    rc = main([
        "scan", "--lambda-min", "1", "--lambda-max", "2", "--steps", "2",
        "--dim", "1", "--plot",
    ])
    assert rc == 2
    assert "plot" in capsys.readouterr().err


def test_scan_usage_errors(capsys):
    base = ["scan", "--steps", "4", "--dim", "1"]
    assert main(base + ["--lambda-min", "0", "--lambda-max", "2"]) == 2
    assert main(base + ["--lambda-min", "2", "--lambda-max", "1"]) == 2
    assert main(base + ["--lambda-min", "1", "--lambda-max", "4.5"]) == 2
    assert main([
        "scan", "--lambda-min", "1", "--lambda-max", "2",
        "--steps", "1", "--dim", "1",
    ]) == 2
    assert main([
        "scan", "--lambda-min", "1", "--lambda-max", "2",
        "--steps", "2", "--dim", "13", "--method", "exact",
    ]) == 2


def test_scan_consistency_failure_aborts(monkeypatch, tmp_path):
    monkeypatch.setattr(cli, "theorem_consistency_check", lambda result: False)
    path = tmp_path / "scan.csv"
    rc = main([
        "scan", "--lambda-min", "1", "--lambda-max", "2", "--steps", "2",
        "--dim", "1", "--output", str(path),
    ])
    assert rc == 1
    assert not path.exists()


# ---------------------------------------------------------------------------
# apply


def test_apply_g(tmp_path, capsys):
    path = tmp_path / "x.json"
    path.write_text(json.dumps({"entries": {"1": "1"}}))
    assert main(["apply", "--operator", "G", "--input", str(path)]) == 0
    out = capsys.readouterr().out
    assert "prefix = [0]" in out
    assert "tail   = -1" in out


def test_apply_t_json(tmp_path, capsys):
    path = tmp_path / "x.json"
    path.write_text(json.dumps({"entries": {"1": "1", "3": "1/2"}}))
    rc = main(["apply", "--operator", "T", "--input", str(path), "--format", "json"])
    assert rc == 0
    blob = json.loads(capsys.readouterr().out)
    assert blob == {"prefix": ["2", "1", "1/2"], "tail": "0"}


def test_apply_gstar(tmp_path, capsys):
    path = tmp_path / "xss.json"
    path.write_text(json.dumps(
        {"w": {"entries": {"1": "1", "2": "-1"}}, "alpha": "-3/7"}
    ))
    assert main(["apply", "--operator", "Gstar", "--input", str(path)]) == 0
    out = capsys.readouterr().out
    assert "prefix = [10/7, 10/7]" in out
    assert "tail   = 3/7" in out


def test_apply_input_errors(tmp_path, capsys):
    bidual = tmp_path / "xss.json"
    bidual.write_text(json.dumps({"w": {"entries": {}}, "alpha": "0"}))
    assert main(["apply", "--operator", "G", "--input", str(bidual)]) == 2
    assert main(["apply", "--operator", "G", "--input", "/no/such.json"]) == 2
    garbled = tmp_path / "bad.json"
    garbled.write_text("{not json")
    assert main(["apply", "--operator", "T", "--input", str(garbled)]) == 2
    assert capsys.readouterr().err.count("error:") == 3


# ---------------------------------------------------------------------------
# plumbing


def test_no_subcommand_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_run_config_method_resolution():
    assert RunConfig(dim=8).resolve_method() == "exact"
    assert RunConfig(dim=9).resolve_method() == "heuristic"
    assert RunConfig(dim=12, method="exact").resolve_method() == "exact"
    assert RunConfig(dim=2, method="heuristic").resolve_method() == "heuristic"


def test_fmt12():
    assert fmt12(0.4641016151377544) == "0.464101615138"
    assert fmt12(1.0) == "1"
    assert fmt12(0.0) == "0"


def test_run_raises_system_exit(monkeypatch):
    monkeypatch.setattr("sys.argv", ["gossez-lab", "bound", "--lambda", "1"])
    with pytest.raises(SystemExit) as exc:
        cli.run()
    assert exc.value.code == 0


def test_scan_columns_are_the_documented_contract():
    assert SCAN_COLUMNS == (
        "lambda", "lower_bound", "estimate", "dim", "method",
        "patterns_explored", "runtime_ms",
    )
