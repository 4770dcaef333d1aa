"""Reversible pseudonymization of roster identities.

Every provider-bound payload passes through :func:`pseudonymize_texts`
first, so no roster display name (or platform mention token) ever leaves
the workspace. Maps are scoped to a single provider call: the same speaker
keeps one pseudonym within a call, and nothing links pseudonyms across
calls.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field


class RosterError(Exception):
    pass


@dataclass(frozen=True)
class RosterEntry:
    user_id: str
    display_name: str
    role: str  # manager | member
    active: bool = True


class Roster:
    """Workspace members keyed by user id; display names are unique."""

    def __init__(self, entries: list[RosterEntry]):
        self.entries: dict[str, RosterEntry] = {}
        names_seen: set[str] = set()
        for entry in entries:
            if entry.role not in ("manager", "member"):
                raise RosterError(f"unknown role {entry.role!r} for {entry.user_id}")
            if entry.user_id in self.entries:
                raise RosterError(f"duplicate user id {entry.user_id!r}")
            key = entry.display_name.casefold()
            if key in names_seen:
                raise RosterError(f"duplicate display name {entry.display_name!r}")
            names_seen.add(key)
            self.entries[entry.user_id] = entry
        if not any(e.role == "manager" for e in self.entries.values()):
            raise RosterError("workspace needs at least one manager")

    def __contains__(self, user_id: str) -> bool:
        return user_id in self.entries

    def display_name(self, user_id: str) -> str:
        return self.entries[user_id].display_name

    def role(self, user_id: str) -> str:
        return self.entries[user_id].role

    def is_manager(self, user_id: str) -> bool:
        entry = self.entries.get(user_id)
        return entry is not None and entry.role == "manager"

    def managers(self) -> list[str]:
        return [uid for uid, e in self.entries.items() if e.role == "manager"]

    def display_names(self) -> list[str]:
        return [e.display_name for e in self.entries.values()]


@dataclass
class PseudonymMap:
    """Bijection between display names and Member-NN tokens for one call."""

    forward: dict[str, str] = field(default_factory=dict)
    reverse: dict[str, str] = field(default_factory=dict)

    def assign(self, display_name: str) -> str:
        if display_name in self.forward:
            return self.forward[display_name]
        pseudonym = f"Member-{len(self.forward) + 1:02d}"
        self.forward[display_name] = pseudonym
        self.reverse[pseudonym] = display_name
        return pseudonym


def _roster_pattern(roster: Roster) -> tuple[re.Pattern | None, dict[str, str]]:
    """One alternation matching mention tokens and names, longest name first.

    Returns the pattern plus a lookup from the casefolded matched text to
    the display name it stands for.
    """
    lookup: dict[str, str] = {}
    alternatives: list[str] = []
    for entry in roster.entries.values():
        token = f"<@{entry.user_id}>"
        alternatives.append(re.escape(token))
        lookup[token.casefold()] = entry.display_name
    for entry in sorted(roster.entries.values(), key=lambda e: -len(e.display_name)):
        alternatives.append(rf"(?<!\w){re.escape(entry.display_name)}(?!\w)")
        lookup[entry.display_name.casefold()] = entry.display_name
    if not alternatives:
        return None, lookup
    return re.compile("|".join(alternatives), re.IGNORECASE), lookup


def pseudonymize_texts(texts: list[str], roster: Roster) -> tuple[list[str], PseudonymMap]:
    """Replace roster identities across several texts with one shared map.

    Pseudonyms are assigned in order of first appearance across the texts,
    starting at Member-01. Matching is whole-word and case-insensitive;
    where one display name is a prefix of another, the longer wins.
    """
    pattern, lookup = _roster_pattern(roster)
    pmap = PseudonymMap()
    if pattern is None:
        return list(texts), pmap

    def replace(match: re.Match) -> str:
        return pmap.assign(lookup[match.group(0).casefold()])

    return [pattern.sub(replace, text) for text in texts], pmap


def pseudonymize(text: str, roster: Roster) -> tuple[str, PseudonymMap]:
    """Single-text form of :func:`pseudonymize_texts`."""
    out, pmap = pseudonymize_texts([text], roster)
    return out[0], pmap


_PSEUDONYM_RE = re.compile(r"\bMember-\d{2,}\b")


def deanonymize(text: str, pmap: PseudonymMap) -> str:
    """Restore display names for every known pseudonym occurrence."""
    if not pmap.reverse:
        return text
    return _PSEUDONYM_RE.sub(lambda m: pmap.reverse.get(m.group(0), m.group(0)), text)
