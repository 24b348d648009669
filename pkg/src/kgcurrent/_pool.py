"""Small thread-pool wrapper for parameter sweeps.

The heavy kernels release the GIL inside the FFT and matrix products,
so threads give a real speedup without the pickling cost of processes.
KGCUR_THREADS caps the worker count; results always come back in input
order, so sweep output never depends on scheduling.
"""

import os
from concurrent.futures import ThreadPoolExecutor


def worker_count(n_tasks: int) -> int:
    cap = os.environ.get("KGCUR_THREADS")
    limit = int(cap) if cap else (os.cpu_count() or 1)
    return max(1, min(limit, n_tasks))


def map_ordered(fn, items):
    """fn over items on the pool; list of results in input order."""
    items = list(items)
    if len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=worker_count(len(items))) as pool:
        return list(pool.map(fn, items))
