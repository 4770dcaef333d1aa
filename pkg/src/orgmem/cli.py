"""Operator command line: init, serve, reindex, ask, replay, stats."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .audit import read_audit
from .config import ConfigError, load_config, validate_config
from .docstore import DocStoreError, now_rfc3339
from .events import ChatEvent, dm_conversation
from .gateway import Gateway
from .sim import TranscriptError, replay_transcript
from .stats import compute_stats, format_table
from .workspace import Workspace

SAMPLE_CONFIG = {
    "root": "docs",
    "qa_channel": "qna",
    "theta": 0.25,
    "k": 3,
    "roster": [
        {"id": "manager", "name": "The Manager", "role": "manager"},
        {"id": "member", "name": "A Member", "role": "member"},
    ],
    "provider": {"kind": "mock"},
    "audit_path": "audit.jsonl",
}

SAMPLE_DOC = """# Welcome

This directory is the group's organizational memory. Every Markdown file
here is indexed for question answering; manager-approved updates are
committed through the journal.
"""


def _load(args) -> Workspace:
    config = load_config(args.config)
    if getattr(args, "k", None):
        config.k = args.k
    if getattr(args, "theta", None):
        config.theta = args.theta
    if getattr(args, "audit", None):
        config.audit_path = Path(args.audit)
    validate_config(config)
    return Workspace(config)


def cmd_init(args) -> int:
    base = Path(args.root)
    if base.exists() and any(base.iterdir()):
        print(f"error: {base} already exists and is not empty", file=sys.stderr)
        return 1
    docs = base / "docs"
    docs.mkdir(parents=True, exist_ok=True)
    (docs / "welcome.md").write_text(SAMPLE_DOC, encoding="utf-8")
    (docs / ".om-journal").write_text("", encoding="utf-8")
    (base / "config.json").write_text(
        json.dumps(SAMPLE_CONFIG, indent=2) + "\n", encoding="utf-8"
    )
    print(f"initialized workspace at {base} (config: {base / 'config.json'})")
    return 0


def cmd_serve(args) -> int:
    from .server import serve

    workspace = _load(args)
    print(f"serving on {args.host}:{args.port} (repo: {workspace.config.root})")
    serve(Gateway(workspace), host=args.host, port=args.port)
    return 0


def cmd_reindex(args) -> int:
    workspace = _load(args)
    index = workspace.retriever.build(workspace.store.snapshot)
    print(
        f"indexed {len(index.entries)} chunks from "
        f"{len(workspace.store.snapshot.files)} files at revision {index.indexed_revision}"
    )
    return 0


def cmd_ask(args) -> int:
    workspace = _load(args)
    gateway = Gateway(workspace)
    author = args.user or next(iter(workspace.roster.entries))
    event = ChatEvent(
        event_id="cli-ask",
        kind="dm_message",
        conversation=dm_conversation(author),
        author=author,
        text=args.question,
        ts=now_rfc3339(),
    )
    actions = gateway.ingest(event)
    for action in actions:
        payload = action.payload
        if payload.get("kind") == "answer":
            print(payload["text"])
        elif payload.get("kind") == "evidence":
            for i, ref in enumerate(payload["references"], start=1):
                print(f"  [{i}] {ref['anchor']} (score {ref['score']:.3f})")
    return 0


def cmd_replay(args) -> int:
    workspace = _load(args)
    adapter = replay_transcript(args.transcript, Gateway(workspace))
    audit_path = workspace.audit.path
    print(
        f"replayed {len(workspace.state.seen_events)} events, "
        f"{len(adapter.delivered)} actions"
        + (f"; audit log at {audit_path}" if audit_path else "")
    )
    return 0


def cmd_stats(args) -> int:
    if args.audit:
        records = read_audit(args.audit)
    else:
        config = load_config(args.config)
        if not config.audit_path or not Path(config.audit_path).exists():
            print("error: no audit log found; run replay first or pass --audit", file=sys.stderr)
            return 1
        records = read_audit(config.audit_path)
    report = compute_stats(records)
    rendered = report.dumps() if args.format == "json" else format_table(report)
    if args.output:
        Path(args.output).write_text(rendered, encoding="utf-8")
        print(f"wrote {args.output}")
    else:
        sys.stdout.write(rendered)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="orgmem", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("init", help="scaffold a workspace directory")
    p.add_argument("root", help="directory to create")
    p.set_defaults(fn=cmd_init)

    def common(p):
        p.add_argument("--config", required=True, help="workspace config file")
        p.add_argument("--k", type=int, help="override reference count")
        p.add_argument("--theta", type=float, help="override answerability threshold")

    p = sub.add_parser("serve", help="run the socket/HTTP gateway")
    common(p)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8777)
    p.set_defaults(fn=cmd_serve)

    p = sub.add_parser("reindex", help="rebuild the embedding index")
    common(p)
    p.set_defaults(fn=cmd_reindex)

    p = sub.add_parser("ask", help="ask one question and print the answer")
    common(p)
    p.add_argument("question")
    p.add_argument("--user", help="ask as this roster user id")
    p.set_defaults(fn=cmd_ask)

    p = sub.add_parser("replay", help="feed a transcript through the simulated adapter")
    common(p)
    p.add_argument("transcript", help="one ChatEvent JSON per line")
    p.add_argument("--audit", help="write the audit log here instead of the configured path")
    p.set_defaults(fn=cmd_replay)

    p = sub.add_parser("stats", help="report usage statistics from the audit log")
    p.add_argument("--config", help="workspace config file")
    p.add_argument("--audit", help="audit log to read (defaults to the configured path)")
    p.add_argument("--format", choices=("json", "table"), default="table")
    p.add_argument("--output", help="write the report here instead of stdout")
    p.set_defaults(fn=cmd_stats)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "stats" and not (args.config or args.audit):
        print("error: stats needs --config or --audit", file=sys.stderr)
        return 2
    try:
        return args.fn(args)
    except (ConfigError, DocStoreError, TranscriptError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
