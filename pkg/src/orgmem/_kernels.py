"""Numeric inner loops shared by the diff and retrieval layers.

The LCS table fill is the one genuinely hot loop in the package (word-level
diffs run on every commit, proposal, and randomized property test). It is
JIT-compiled with numba by default; setting ``ORGMEM_NO_NUMBA=1`` selects a
vectorized pure-numpy path instead. Both paths produce bit-identical tables;
``benchmarks/bench_kernels.py`` compares them.
"""

from __future__ import annotations

import os

import numpy as np

USE_NUMBA = os.environ.get("ORGMEM_NO_NUMBA", "").lower() not in ("1", "true", "yes")
if USE_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        USE_NUMBA = False

if USE_NUMBA:

    @njit(cache=True)
    def _lcs_table_njit(a: np.ndarray, b: np.ndarray) -> np.ndarray:
        n = a.shape[0]
        m = b.shape[0]
        table = np.zeros((n + 1, m + 1), dtype=np.int32)
        for i in range(n - 1, -1, -1):
            for j in range(m - 1, -1, -1):
                if a[i] == b[j]:
                    table[i, j] = table[i + 1, j + 1] + 1
                else:
                    hi = table[i + 1, j]
                    lo = table[i, j + 1]
                    table[i, j] = hi if hi >= lo else lo
        return table


def _lcs_table_numpy(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # Row-wise vectorization: with M[j] = max(t[i+1,j], eq * (t[i+1,j+1] + 1)),
    # the classic recurrence collapses to t[i,j] = suffix-max of M, because
    # adjacent LCS cells never differ by more than one.
    n = a.shape[0]
    m = b.shape[0]
    table = np.zeros((n + 1, m + 1), dtype=np.int32)
    for i in range(n - 1, -1, -1):
        nxt = table[i + 1]
        candidates = np.where(b == a[i], nxt[1:] + 1, 0)
        best = np.maximum(nxt[:m], candidates)
        table[i, :m] = np.maximum.accumulate(best[::-1])[::-1]
    return table


def lcs_table(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Suffix-form LCS length table for two int32 token-id arrays.

    ``table[i, j]`` is the LCS length of ``a[i:]`` and ``b[j:]``; the full
    LCS length is ``table[0, 0]``.
    """
    a = np.ascontiguousarray(a, dtype=np.int32)
    b = np.ascontiguousarray(b, dtype=np.int32)
    if USE_NUMBA:
        return _lcs_table_njit(a, b)
    return _lcs_table_numpy(a, b)


def lcs_backtrack(a: np.ndarray, b: np.ndarray, table: np.ndarray) -> list[tuple[int, int]]:
    """Walk an LCS table into an edit script.

    Returns (op, token_index) pairs where op is 0=keep (index into ``a``),
    1=delete (index into ``a``), 2=insert (index into ``b``). Ties prefer
    keep, then delete, so the alignment is deterministic.
    """
    ops: list[tuple[int, int]] = []
    i = j = 0
    n, m = a.shape[0], b.shape[0]
    while i < n and j < m:
        if a[i] == b[j] and table[i, j] == table[i + 1, j + 1] + 1:
            ops.append((0, i))
            i += 1
            j += 1
        elif table[i + 1, j] >= table[i, j + 1]:
            ops.append((1, i))
            i += 1
        else:
            ops.append((2, j))
            j += 1
    while i < n:
        ops.append((1, i))
        i += 1
    while j < m:
        ops.append((2, j))
        j += 1
    return ops


def cosine_scores(matrix: np.ndarray, query: np.ndarray) -> np.ndarray:
    """Cosine scores of a query against rows of a matrix.

    Rows and query are unit-norm or all-zero, so the plain dot product is
    the cosine; zero vectors score 0 against everything.
    """
    if matrix.size == 0:
        return np.zeros(0, dtype=np.float64)
    return matrix @ query
