"""Shared fixtures: a small repository and a wired workspace."""

from __future__ import annotations

import pytest

from orgmem.config import WorkspaceConfig
from orgmem.events import ChatEvent
from orgmem.gateway import Gateway
from orgmem.privacy import Roster, RosterEntry
from orgmem.workspace import Workspace

HANDBOOK = """# Lab Handbook

General practices for the group live here.

## Conference Travel

To request reimbursement for conference travel, submit the travel form with
receipts within 30 days of the trip. Conference travel funding covers
registration, airfare, and lodging up to the posted caps.

## Equipment

Reserve shared equipment through the booking sheet. Book the eye tracker
the same way. Return items within two days and report damage immediately.
"""

ONBOARDING = """# Onboarding

Start here during your first week.

## CITI Training

All group members must complete CITI training before joining a study. The
required CITI modules can be completed through the university portal; save
the completion certificates to the shared drive.
"""


def make_roster() -> Roster:
    return Roster(
        [
            RosterEntry("dana", "Dana Kim", "manager"),
            RosterEntry("alice", "Alice Park", "member"),
            RosterEntry("bob", "Bob Liu", "member"),
            RosterEntry("erin", "Erin Cho", "member"),
        ]
    )


def make_workspace(tmp_path, docs: dict[str, str] | None = None, **overrides) -> Workspace:
    root = tmp_path / "docs"
    root.mkdir(parents=True, exist_ok=True)
    if docs is None:
        docs = {"handbook.md": HANDBOOK, "onboarding.md": ONBOARDING}
    for name, body in docs.items():
        (root / name).write_text(body, encoding="utf-8")
    config = WorkspaceConfig(root=root, roster=make_roster(), qa_channel="qna", **overrides)
    return Workspace(config)


def event(event_id: str, kind: str, conversation: str, author: str, text: str = "", payload=None, ts: str = "") -> ChatEvent:
    return ChatEvent(
        event_id=event_id,
        kind=kind,
        conversation=conversation,
        author=author,
        text=text,
        payload=payload or {},
        ts=ts or f"2026-08-01T00:00:{hash(event_id) % 60:02d}+00:00",
    )


@pytest.fixture
def workspace(tmp_path) -> Workspace:
    return make_workspace(tmp_path)


@pytest.fixture
def gateway(workspace) -> Gateway:
    return Gateway(workspace)


def pytest_runtest_logreport(report):
    """One visible pass/fail line per acceptance criterion."""
    if report.when == "call" and "test_acceptance" in report.nodeid:
        outcome = "PASS" if report.passed else "FAIL"
        name = report.nodeid.split("::")[-1]
        print(f"\n[ACCEPTANCE {outcome}] {name}", flush=True)
