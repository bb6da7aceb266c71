"""Order-preserving thread pool sized by ``SWKERNELS_THREADS``."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

THREADS_ENV = "SWKERNELS_THREADS"


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def thread_map(fn, items):
    """``list(map(fn, items))``; results never depend on the thread count."""
    n = thread_count()
    if n == 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
