"""Small shared helpers: worker pool and deterministic parallel mapping.

Worker count is controlled by the GRASSPOLY_THREADS environment variable
(default 1).  Results of parallel_map are always returned in input order,
and every reduction in the package consumes them in that order, so output
is byte-identical no matter how many workers run.
"""

import os
from concurrent.futures import ThreadPoolExecutor

_ENV_VAR = "GRASSPOLY_THREADS"


def worker_count() -> int:
    raw = os.environ.get(_ENV_VAR, "1")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


def parallel_map(fn, items):
    """Map fn over items, preserving input order in the result list.

    With GRASSPOLY_THREADS <= 1 this is a plain loop; otherwise a thread
    pool is used.  Exceptions propagate either way.
    """
    items = list(items)
    n = worker_count()
    if n <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(n, len(items))) as pool:
        return list(pool.map(fn, items))
