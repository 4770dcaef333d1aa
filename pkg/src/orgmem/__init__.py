"""Organizational memory service: grounded Q&A, sharing, extraction, and
approval-gated document updates over a versioned Markdown repository."""

__version__ = "0.1.0"
