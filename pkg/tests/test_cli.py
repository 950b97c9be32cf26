from __future__ import annotations

import json
import subprocess
import sys
from importlib import resources
from pathlib import Path

import pytest

from conftest import P2_FIXTURE
from entropia.cli import EXIT_ERROR, EXIT_GATE, EXIT_OK, main
from entropia.ingest import load_interchange, parse_paths
from entropia.metrics import compute_metrics

P2 = str(P2_FIXTURE)


@pytest.fixture
def corpus_dir():
    return str(resources.files("entropia.corpus"))


@pytest.fixture(autouse=True)
def no_env_config(monkeypatch):
    monkeypatch.delenv("ENTROPIA_CONFIG", raising=False)


def test_gate_below_score_passes(capsys):
    assert main(["analyze", P2, "--gate-score", "40"]) == EXIT_OK
    assert "37.152829" in capsys.readouterr().out


def test_gate_breach_exits_2(capsys):
    assert main(["analyze", P2, "--gate-score", "30"]) == EXIT_GATE
    assert "gate breached" in capsys.readouterr().err


def test_entropy_gate(capsys):
    assert main(["analyze", P2, "--gate-entropy", "0.9"]) == EXIT_OK
    assert main(["analyze", P2, "--gate-entropy", "0.5"]) == EXIT_GATE


def test_negative_gate_rejected(capsys):
    with pytest.raises(SystemExit) as info:
        main(["analyze", P2, "--gate-score", "-1"])
    assert info.value.code == 2  # argparse usage error


def test_syntax_error_exits_1(tmp_path: Path, capsys):
    bad = tmp_path / "bad.moo"
    bad.write_text("class C {\n    void p( }\n}\n")
    assert main(["analyze", str(bad)]) == EXIT_ERROR
    err = capsys.readouterr().err
    assert "syntax error" in err and f"{bad}:2:13" in err


def test_missing_input_exits_1(capsys):
    assert main(["analyze", "/no/such/dir"]) == EXIT_ERROR
    assert "no such file" in capsys.readouterr().err


def test_json_output_full_precision(capsys):
    assert main(["analyze", P2, "--format", "json"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["entropy"] == 0.8076702057269436
    assert data["score"] == data["entropy"] * 46


def test_out_file(tmp_path: Path, capsys):
    out = tmp_path / "r.csv"
    assert main(["analyze", P2, "--format", "csv", "--out", str(out)]) == EXIT_OK
    assert capsys.readouterr().out == ""
    assert out.read_text().splitlines()[-1] == "#degradation_score,37.152829"


def test_entropy_command(capsys):
    assert main(["entropy", "105", "12", "3"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "0.633805" in out and "76.056655" in out


def test_entropy_count_sum_warning(capsys):
    assert main(["entropy", "132", "11", "4", "--total", "148"]) == EXIT_OK
    captured = capsys.readouterr()
    assert "counts sum 147 != N 148" in captured.err
    assert "82.438063" in captured.out  # still computed from the counts


def test_entropy_decisive_and_json(capsys):
    assert main(["entropy", "10", "0", "0", "--format", "json"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["entropy"] == 0.0 and data["score"] == 0.0


def test_entropy_rejects_bad_counts(capsys):
    assert main(["entropy", "0", "0"]) == EXIT_ERROR
    assert main(["entropy", "3", "-1"]) == EXIT_ERROR


def test_config_file_and_precedence(tmp_path: Path, monkeypatch, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"gate_score": 30, "format": "json"}))
    assert main(["analyze", P2, "--config", str(cfg)]) == EXIT_GATE
    assert json.loads(capsys.readouterr().out)["classes_total"] == 46
    # flags win over the file
    assert main(["analyze", P2, "--config", str(cfg), "--gate-score", "40"]) == EXIT_OK
    capsys.readouterr()
    monkeypatch.setenv("ENTROPIA_CONFIG", str(cfg))
    assert main(["analyze", P2]) == EXIT_GATE


def test_config_unknown_key(tmp_path: Path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"colour": "red"}))
    assert main(["analyze", P2, "--config", str(cfg)]) == EXIT_ERROR
    assert "unknown config keys" in capsys.readouterr().err


def test_cyclomatic_and_strict(corpus_dir, capsys):
    assert main(["analyze", corpus_dir, "--wmc-weight", "cyclomatic", "--format", "json"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["weighting"] == "cyclomatic"
    assert main(["analyze", corpus_dir, "--strict"]) == EXIT_ERROR
    assert "below the table minimum" in capsys.readouterr().err


def test_custom_thresholds(tmp_path: Path, capsys):
    table = tmp_path / "t.json"
    table.write_text(json.dumps([
        {"label": "small", "min": 0, "max": 10, "risk": "ok"},
        {"label": "big", "min": 10, "max": None, "risk": "split"},
    ]))
    assert main(["analyze", P2, "--thresholds", str(table), "--format", "json"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["distribution"]["labels"] == ["small", "big"]
    assert main(["analyze", P2, "--thresholds", str(tmp_path / "missing.json")]) == EXIT_ERROR


def test_dump_and_interchange_input(tmp_path: Path, capsys):
    out = tmp_path / "model.json"
    assert main(["dump", P2, "--out", str(out)]) == EXIT_OK
    assert compute_metrics(load_interchange(out)) == compute_metrics(parse_paths([P2]))
    assert main(["analyze", str(out), "--input-kind", "interchange", "--gate-score", "40"]) == EXIT_OK
    out.write_text('{"classes": [{"fields": []}]}')
    assert main(["analyze", str(out), "--input-kind", "interchange"]) == EXIT_ERROR


def test_weyuker_command(capsys):
    assert main(["weyuker", "--seed", "1", "--budget", "50", "--format", "json"]) == EXIT_OK
    verdicts = json.loads(capsys.readouterr().out)
    assert len(verdicts) == 36
    assert all(v["seed"] in (None, 1) for v in verdicts)
    assert main(["weyuker", "--seed", "0", "--budget", "200"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert any("UNIVERSAL_HOLDS" in line for line in lines)
    # property 5 shows mu(P), mu(Q) and both combinations with R
    (wmc5,) = [line for line in lines if line.split()[:2] == ["5", "wmc"]]
    assert wmc5.endswith("C4=1, C5=1; C4+C2=7, C5+C2=6")


def test_weyuker_is_reproducible(capsys):
    main(["weyuker", "--seed", "3", "--budget", "40", "--format", "csv"])
    first = capsys.readouterr().out
    main(["weyuker", "--seed", "3", "--budget", "40", "--format", "csv"])
    assert capsys.readouterr().out == first


def test_trend_command(tmp_path: Path, capsys):
    v1 = tmp_path / "v1.moo"
    v1.write_text("class A { void a() { } }\nclass B { void b() { } }\n")
    assert main(["trend", str(v1), P2, "--step", "0.5", "--gate-score", "30"]) == EXIT_GATE
    out = capsys.readouterr().out
    assert "entropy step exceeded" in out
    assert main(["trend", str(v1), str(v1), "--format", "json"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["deltas"][0]["entropy"] == 0.0


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "entropia.cli", "entropy", "38", "6", "2"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert "37.152829" in proc.stdout
