"""Chunked, order-preserving evaluation over a thread pool.

Chunk boundaries are fixed by ``CHUNK`` and never by the worker count, so the
numbers produced are identical for any ``QCLONE_THREADS`` setting.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

CHUNK = 4096


def thread_count() -> int:
    raw = os.environ.get("QCLONE_THREADS", "").strip()
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise ValueError(f"QCLONE_THREADS must be an integer, got {raw!r}") from None
    return os.cpu_count() or 1


def map_chunks(fn, n: int, chunk: int = CHUNK) -> list:
    """Call ``fn(start, stop)`` over ``range(n)`` in fixed chunks; results in order."""
    bounds = [(i, min(i + chunk, n)) for i in range(0, n, chunk)]
    workers = min(thread_count(), len(bounds)) or 1
    if workers == 1:
        return [fn(a, b) for a, b in bounds]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda ab: fn(*ab), bounds))


def concat_chunks(fn, n: int, chunk: int = CHUNK) -> np.ndarray:
    parts = map_chunks(fn, n, chunk)
    return np.concatenate(parts) if parts else np.empty(0)
