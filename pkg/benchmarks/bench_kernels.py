"""Benchmark the LCS kernel: numba njit vs the pure-numpy fallback.

The parent process runs both variants as subprocesses so each one imports
orgmem._kernels fresh with the right ORGMEM_NO_NUMBA setting.

    python3 benchmarks/bench_kernels.py          # compare both paths
    python3 benchmarks/bench_kernels.py --inner  # time the active path only
"""

from __future__ import annotations

import os
import random
import subprocess
import sys
import time

SIZES = [(100, 100), (400, 400), (1200, 1200)]
REPEAT = 5


def time_active_path() -> None:
    import numpy as np

    from orgmem import _kernels
    from orgmem.textdiff import word_diff

    label = "numba" if _kernels.USE_NUMBA else "numpy"
    rng = random.Random(7)

    # Warm-up triggers JIT compilation outside the timed region.
    warm = np.array([1, 2, 3], dtype=np.int32)
    _kernels.lcs_table(warm, warm)

    print(f"path={label}")
    for n, m in SIZES:
        a = np.array([rng.randrange(50) for _ in range(n)], dtype=np.int32)
        b = np.array([rng.randrange(50) for _ in range(m)], dtype=np.int32)
        best = min(
            _timed(lambda: _kernels.lcs_table(a, b)) for _ in range(REPEAT)
        )
        print(f"  lcs_table {n}x{m}: {best * 1000:8.2f} ms")

    vocab = [f"w{i}" for i in range(200)]
    old = " ".join(rng.choices(vocab, k=800))
    new = " ".join(rng.choices(vocab, k=800))
    best = min(_timed(lambda: word_diff(old, new)) for _ in range(REPEAT))
    print(f"  word_diff 800w:  {best * 1000:8.2f} ms")


def _timed(fn) -> float:
    start = time.perf_counter()
    fn()
    return time.perf_counter() - start


def main() -> int:
    if "--inner" in sys.argv:
        time_active_path()
        return 0
    for flag in ("0", "1"):
        env = dict(os.environ, ORGMEM_NO_NUMBA=flag)
        subprocess.run(
            [sys.executable, __file__, "--inner"], env=env, check=True
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
