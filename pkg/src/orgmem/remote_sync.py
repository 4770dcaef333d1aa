"""Optional outbound sync of commit records to a remote endpoint.

The default is a no-op logger; deployments that mirror commits to a hosted
service can swap in the HTTP client. Sync failures never affect the local
commit, which has already been journaled.
"""

from __future__ import annotations

import logging

from .docstore import CommitRecord

logger = logging.getLogger(__name__)


class NullRemoteSync:
    """Default: log the commit id and do nothing else."""

    def push(self, commit: CommitRecord) -> None:
        logger.info("commit %d not pushed (remote sync disabled)", commit.commit_id)


class HttpRemoteSync:
    """POST each commit record as JSON to a configured endpoint."""

    def __init__(self, endpoint: str, timeout: float = 10.0):
        self.endpoint = endpoint
        self.timeout = timeout

    def push(self, commit: CommitRecord) -> None:
        import requests

        try:
            requests.post(self.endpoint, json=commit.to_json(), timeout=self.timeout)
        except requests.RequestException as exc:
            logger.warning("remote sync of commit %d failed: %s", commit.commit_id, exc)
