"""End-to-end checks for the command line interface.

Everything drives `cli.main(argv)` in-process; exit codes and stdout are
the contract under test.  One subprocess test confirms the installed
console script resolves.
"""

import json
import shutil
import subprocess
import sys

import pytest

from simdetect.cli import main
from simdetect.session import load


@pytest.fixture(scope="module")
def corpus_root(tmp_path_factory):
    root = tmp_path_factory.mktemp("clicorpus")
    code = main(["synth", "--orig", "5", "--mut", "1", "--rec", "1",
                 "--out", str(root)])
    assert code == 0
    return root


@pytest.fixture(scope="module")
def report_path(corpus_root, tmp_path_factory):
    out = tmp_path_factory.mktemp("clireport") / "report.json"
    code = main(["analyze", "--root", str(corpus_root), "--out", str(out)])
    assert code == 0
    return out


def test_synth_writes_ground_truth(corpus_root):
    assert (corpus_root / "ground_truth.json").is_file()
    assert (corpus_root / "MP5" / "main.c").is_file()


def test_synth_rejects_bad_shape(tmp_path, capsys):
    assert main(["synth", "--orig", "1", "--rec", "1",
                 "--out", str(tmp_path / "x")]) == 2
    assert "error:" in capsys.readouterr().err


def test_scan_lists_submissions(corpus_root, capsys):
    assert main(["scan", "--root", str(corpus_root)]) == 0
    out = capsys.readouterr().out
    lines = [l for l in out.splitlines() if l and not l.startswith("warning")]
    ids = [l.split()[0] for l in lines]
    assert ids == sorted(ids)
    assert "P1" in ids and "MP5" in ids


def test_scan_json_mode(corpus_root, capsys):
    assert main(["scan", "--root", str(corpus_root), "--json"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert {s["id"] for s in obj["submissions"]} == {
        "P1", "P2", "P3", "P4", "P5", "MP5", "P2RGP1"
    }


def test_scan_explain_marks_excluded_files(corpus_root, tmp_path, capsys):
    cfg = tmp_path / "analysis.json"
    cfg.write_text(json.dumps({
        "content_filter": {
            "op": "nor", "children": [{"atom": "path", "regex": "\\.txt$"}]
        }
    }))
    extra = corpus_root / "P1" / "notes.txt"
    extra.write_text("scratch\n")
    try:
        assert main(["scan", "--root", str(corpus_root),
                     "--config", str(cfg), "--explain"]) == 0
        out = capsys.readouterr().out
        assert "- notes.txt" in out
        assert "+ main.c" in out
    finally:
        extra.unlink()


def test_scan_missing_root_is_usage_error(tmp_path, capsys):
    assert main(["scan", "--root", str(tmp_path / "absent")]) == 2
    assert "scan:" in capsys.readouterr().err


def test_scan_empty_root_is_usage_error(tmp_path, capsys):
    assert main(["scan", "--root", str(tmp_path)]) == 2
    assert "no submissions" in capsys.readouterr().err


def test_bad_config_json_is_usage_error(corpus_root, tmp_path, capsys):
    cfg = tmp_path / "broken.json"
    cfg.write_text("{nope")
    assert main(["scan", "--root", str(corpus_root), "--config", str(cfg)]) == 2
    assert "config:" in capsys.readouterr().err


def test_analyze_report_loads(report_path, capsys):
    rep = load(report_path)
    assert len(rep.ids) == 7
    assert set(rep.results) == {
        "ncd_raw", "ncd_tokens", "token_count", "token_count_variance"
    }


def test_analyze_prints_thresholds(corpus_root, tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["analyze", "--root", str(corpus_root), "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "report written" in text
    assert "ncd_tokens: scenario A alpha=0.05 threshold=" in text


def test_analyze_json_summary(corpus_root, tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["analyze", "--root", str(corpus_root), "--out", str(out),
                 "--json"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["out"] == str(out)
    assert set(obj["results"]["ncd_tokens"]["flags"]) == {
        "A@0.01", "A@0.05", "B@0.01", "B@0.05"
    }


def test_analyze_rerun_is_byte_identical(corpus_root, report_path, tmp_path):
    out = tmp_path / "again.json"
    assert main(["analyze", "--root", str(corpus_root), "--out", str(out)]) == 0
    assert out.read_bytes() == report_path.read_bytes()


def test_analyze_single_submission_is_runtime_error(tmp_path, capsys):
    sub = tmp_path / "only" / "main.c"
    sub.parent.mkdir()
    sub.write_text("int main(void) { return 0; }\n")
    assert main(["analyze", "--root", str(tmp_path),
                 "--out", str(tmp_path / "r.json")]) == 1
    assert "need >=2" in capsys.readouterr().err


def test_pair_mutant_coverage_beats_unrelated(corpus_root, capsys):
    assert main(["pair", "P5", "MP5", "--root", str(corpus_root),
                 "--json"]) == 0
    related = json.loads(capsys.readouterr().out)
    assert main(["pair", "P2", "P4", "--root", str(corpus_root),
                 "--json"]) == 0
    unrelated = json.loads(capsys.readouterr().out)
    assert related["coverage"] > unrelated["coverage"]
    assert related["test"] == "ncd_tokens"
    for tile in related["tiles"]:
        assert tile["length"] >= 8


def test_pair_raw_test_uses_wider_minimum(corpus_root, capsys):
    assert main(["pair", "P5", "MP5", "--root", str(corpus_root),
                 "--test", "ncd_raw"]) == 0
    assert "min_match=16" in capsys.readouterr().out


def test_pair_unknown_id(corpus_root, capsys):
    assert main(["pair", "P5", "NOPE", "--root", str(corpus_root)]) == 2
    assert "unknown submission id 'NOPE'" in capsys.readouterr().err


def test_pair_checks_ids_against_report(corpus_root, report_path, capsys):
    assert main(["pair", "GHOST", "P1", "--root", str(corpus_root),
                 "--report", str(report_path)]) == 2
    assert "GHOST" in capsys.readouterr().err


def test_calibrate_stdout(capsys):
    assert main(["calibrate", "--n-list", "5", "--alpha-list", "0.05",
                 "--replicates", "10000"]) == 0
    table = json.loads(capsys.readouterr().out)
    assert list(table) == ["5,0.05,10000,987654321"]
    assert table["5,0.05,10000,987654321"] > 0


def test_calibrate_to_file(tmp_path, capsys):
    out = tmp_path / "table.json"
    assert main(["calibrate", "--n-list", "5,6", "--alpha-list", "0.05",
                 "--replicates", "10000", "--out", str(out)]) == 0
    assert len(json.loads(out.read_text())) == 2


def test_calibrate_rejects_garbage(capsys):
    assert main(["calibrate", "--n-list", "five"]) == 2
    assert "calibrate:" in capsys.readouterr().err


def test_version_flag():
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0


def test_unknown_subcommand_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_console_script_installed():
    exe = shutil.which("simdetect")
    if exe is None:
        pytest.skip("console script not on PATH")
    proc = subprocess.run([exe, "--version"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "simdetect" in proc.stdout
