"""Order-preserving fan-out for corpus scans."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from itertools import islice
from typing import Callable, Iterable, Iterator, Optional, TypeVar

T = TypeVar("T")
R = TypeVar("R")

ENV_VAR = "CONFLUENCE_LAB_THREADS"
CHUNK = 512


def thread_count() -> int:
    """Worker cap from the environment; 0 (the default) means sequential."""
    raw = os.environ.get(ENV_VAR, "0")
    try:
        return max(0, int(raw))
    except ValueError:
        return 0


def ordered_map(fn: Callable[[T], R], items: Iterable[T], threads: Optional[int] = None) -> Iterator[R]:
    """Yield ``fn(x)`` in input order.

    With workers, items are handed out a chunk at a time, so a consumer that
    stops early wastes at most one chunk and still sees results in
    enumeration order.
    """
    if threads is None:
        threads = thread_count()
    if threads <= 0:
        yield from map(fn, items)
        return
    it = iter(items)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        while chunk := list(islice(it, CHUNK)):
            yield from pool.map(fn, chunk)
