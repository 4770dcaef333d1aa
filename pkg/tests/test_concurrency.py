"""Single-writer store under contention and atomic index swaps."""

from __future__ import annotations

import threading

from orgmem.docstore import AppendSection, ChangeSet, RepoStore, StaleChangesetError, load_snapshot


def test_concurrent_commits_serialize_without_corruption(tmp_path):
    root = tmp_path / "repo"
    root.mkdir()
    (root / "a.md").write_text("seed\n", encoding="utf-8")
    store = RepoStore(root)
    committed: list[int] = []
    lock = threading.Lock()

    def writer(worker: int):
        for i in range(10):
            # Retry on staleness like a real caller racing other writers.
            while True:
                changeset = ChangeSet(
                    store.snapshot.revision,
                    (AppendSection("a.md", f"W{worker}", f"entry {worker}-{i}"),),
                )
                try:
                    record = store.apply_changeset(changeset, "dana", "m")
                except StaleChangesetError:
                    continue
                with lock:
                    committed.append(record.commit_id)
                break

    threads = [threading.Thread(target=writer, args=(w,)) for w in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()

    assert sorted(committed) == list(range(1, 41))
    assert store.snapshot.revision == 40
    # The journal replays to exactly the in-memory state.
    replayed = load_snapshot(root)
    assert replayed.body("a.md") == store.snapshot.body("a.md")
    assert len(store.history) == 40


def test_readers_see_complete_index_during_refresh(tmp_path):
    from conftest import make_workspace

    ws = make_workspace(tmp_path)
    stop = threading.Event()
    failures: list[str] = []

    def reader():
        while not stop.is_set():
            index = ws.retriever.index
            # An index reference is always internally consistent: every entry
            # belongs to a file of one snapshot revision set.
            revisions = {e.chunk.revision for e in index.entries.values()}
            if any(r > index.indexed_revision for r in revisions):
                failures.append(f"entry revision ahead of index {index.indexed_revision}")

    threads = [threading.Thread(target=reader) for _ in range(3)]
    for t in threads:
        t.start()
    try:
        for i in range(15):
            commit = ws.store.apply_changeset(
                ChangeSet(
                    ws.store.snapshot.revision,
                    (AppendSection("handbook.md", f"S{i}", f"content {i}"),),
                ),
                "dana",
                "m",
            )
            ws.retriever.refresh(commit, ws.store.snapshot)
    finally:
        stop.set()
        for t in threads:
            t.join()
    assert failures == []
    assert ws.retriever.index.indexed_revision == 15
