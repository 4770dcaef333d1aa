"""CLI commands end to end (in-process via main())."""

from __future__ import annotations

import json
import shutil
from pathlib import Path

from orgmem.cli import main

DEMO = Path(__file__).resolve().parent.parent / "demo"
GOLDEN = Path(__file__).resolve().parent / "golden" / "demo_stats.json"


def demo_copy(tmp_path) -> Path:
    shutil.copytree(DEMO / "docs", tmp_path / "docs")
    shutil.copy(DEMO / "config.json", tmp_path / "config.json")
    return tmp_path


def test_init_scaffolds_workspace(tmp_path, capsys):
    target = tmp_path / "fresh"
    assert main(["init", str(target)]) == 0
    assert (target / "config.json").exists()
    assert (target / "docs" / "welcome.md").exists()
    assert (target / "docs" / ".om-journal").exists()


def test_init_refuses_nonempty_root(tmp_path, capsys):
    target = tmp_path / "taken"
    target.mkdir()
    (target / "junk.txt").write_text("x")
    assert main(["init", str(target)]) == 1
    assert "not empty" in capsys.readouterr().err


def test_ask_answers_from_repo(tmp_path, capsys):
    workdir = demo_copy(tmp_path)
    code = main([
        "ask", "--config", str(workdir / "config.json"),
        "How do I request reimbursement for conference travel?",
        "--user", "alice",
    ])
    out = capsys.readouterr().out
    assert code == 0
    assert "Based on the documentation:" in out
    assert "handbook.md#conference-travel" in out


def test_ask_empty_repo_abstains_exit_zero(tmp_path, capsys):
    workdir = tmp_path
    (workdir / "docs").mkdir()
    config = {
        "root": "docs",
        "qa_channel": "qna",
        "roster": [{"id": "m", "name": "Manager", "role": "manager"}],
    }
    (workdir / "config.json").write_text(json.dumps(config))
    code = main(["ask", "--config", str(workdir / "config.json"), "Where is the key?"])
    out = capsys.readouterr().out
    assert code == 0
    assert "could not find" in out


def test_reindex_reports_chunk_count(tmp_path, capsys):
    workdir = demo_copy(tmp_path)
    assert main(["reindex", "--config", str(workdir / "config.json")]) == 0
    assert "indexed" in capsys.readouterr().out


def test_replay_then_stats_matches_golden(tmp_path, capsys):
    workdir = demo_copy(tmp_path)
    config_path = str(workdir / "config.json")
    assert main(["replay", "--config", config_path, str(DEMO / "transcript.jsonl")]) == 0
    out_path = workdir / "report.json"
    assert main([
        "stats", "--config", config_path, "--format", "json", "--output", str(out_path),
    ]) == 0
    assert out_path.read_text(encoding="utf-8") == GOLDEN.read_text(encoding="utf-8")


def test_stats_table_format(tmp_path, capsys):
    workdir = demo_copy(tmp_path)
    config_path = str(workdir / "config.json")
    main(["replay", "--config", config_path, str(DEMO / "transcript.jsonl")])
    capsys.readouterr()
    assert main(["stats", "--config", config_path, "--format", "table"]) == 0
    out = capsys.readouterr().out
    assert "questions" in out and "updates" in out


def test_theta_override_changes_verdict(tmp_path, capsys):
    workdir = demo_copy(tmp_path)
    args = [
        "ask", "--config", str(workdir / "config.json"),
        "How do I request reimbursement for conference travel?",
        "--user", "alice",
    ]
    assert main(args + ["--theta", "0.99"]) == 0
    out = capsys.readouterr().out
    assert "could not find" in out


def test_malformed_transcript_reports_line(tmp_path, capsys):
    workdir = demo_copy(tmp_path)
    bad = workdir / "bad.jsonl"
    bad.write_text('{"event_id": "e1", "kind": "dm_message", "conversation": "c", "author": "a"}\n{nope\n')
    code = main(["replay", "--config", str(workdir / "config.json"), str(bad)])
    assert code == 1
    assert "line 2" in capsys.readouterr().err


def test_missing_config_fails_cleanly(tmp_path, capsys):
    assert main(["reindex", "--config", str(tmp_path / "nope.json")]) == 1
    assert "error" in capsys.readouterr().err
