from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor


def worker_count() -> int:
    """Parallelism cap from ``RIGLAB_THREADS`` (default 1, i.e. in-process)."""
    raw = os.environ.get("RIGLAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValueError(f"RIGLAB_THREADS must be an integer, got {raw!r}") from None


def ordered_map(fn, items, workers: int | None = None) -> list:
    """``list(map(fn, items))``, fanned out over processes when allowed.

    Results keep input order, so reductions over them stay deterministic.
    """
    items = list(items)
    workers = worker_count() if workers is None else workers
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
