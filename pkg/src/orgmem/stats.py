"""Usage statistics computed purely from the audit log."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


def _zero_counts() -> dict:
    return {"channel": {"member": 0, "manager": 0}, "dm": {"member": 0, "manager": 0}}


def _zero_shares() -> dict:
    return {
        "to_channel": {"anonymous": 0, "named": 0},
        "to_private": {"anonymous": 0, "named": 0},
    }


def _zero_updates() -> dict:
    return {
        "assisted": {"commits": 0, "files": 0, "words_added": 0, "words_deleted": 0},
        "direct": {"commits": 0, "files": 0, "words_added": 0, "words_deleted": 0},
    }


@dataclass
class StatsReport:
    questions: dict = field(default_factory=_zero_counts)
    answered: int = 0
    abstained: int = 0
    answered_rate: float = 0.0
    shares: dict = field(default_factory=_zero_shares)
    relays: int = 0
    updates: dict = field(default_factory=_zero_updates)

    def to_json(self) -> dict:
        return {
            "questions": self.questions,
            "answered": self.answered,
            "abstained": self.abstained,
            "answered_rate": self.answered_rate,
            "shares": self.shares,
            "relays": self.relays,
            "updates": self.updates,
        }

    def dumps(self) -> str:
        """Canonical serialization used for golden comparisons."""
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"


def compute_stats(records: list[dict]) -> StatsReport:
    """Fold audit records into a report; a pure function of the log."""
    report = StatsReport()
    files_by_method: dict[str, set] = {"assisted": set(), "direct": set()}
    for record in records:
        kind = record.get("kind")
        if kind == "qa":
            origin = record["origin"]
            role = record["role"]
            report.questions[origin][role] += 1
            if record["answered"]:
                report.answered += 1
            else:
                report.abstained += 1
        elif kind == "share":
            mode = record["mode"]
            key = "anonymous" if record["anonymous"] else "named"
            report.shares[mode][key] += 1
        elif kind == "relay":
            report.relays += 1
        elif kind == "commit":
            method = record.get("method", "direct")
            bucket = report.updates[method]
            bucket["commits"] += 1
            bucket["words_added"] += record["words_added"]
            bucket["words_deleted"] += record["words_deleted"]
            files_by_method[method].update(record.get("paths", []))
    for method, paths in files_by_method.items():
        report.updates[method]["files"] = len(paths)
    total = report.answered + report.abstained
    report.answered_rate = report.answered / total if total else 0.0
    return report


def format_table(report: StatsReport) -> str:
    """Plain-text rendering for the CLI."""
    q = report.questions
    lines = [
        "questions (origin x role)",
        f"  channel: member {q['channel']['member']:>3}  manager {q['channel']['manager']:>3}",
        f"  dm:      member {q['dm']['member']:>3}  manager {q['dm']['manager']:>3}",
        f"answered {report.answered} / {report.answered + report.abstained}"
        f" (rate {report.answered_rate:.2f})",
        "shares",
        f"  to_channel: anonymous {report.shares['to_channel']['anonymous']}"
        f"  named {report.shares['to_channel']['named']}",
        f"  to_private: anonymous {report.shares['to_private']['anonymous']}"
        f"  named {report.shares['to_private']['named']}",
        f"relays {report.relays}",
        "updates (method: commits / files / words added / words deleted)",
    ]
    for method in ("assisted", "direct"):
        u = report.updates[method]
        lines.append(
            f"  {method}: {u['commits']} / {u['files']} / {u['words_added']} / {u['words_deleted']}"
        )
    return "\n".join(lines) + "\n"
