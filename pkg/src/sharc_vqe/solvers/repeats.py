"""Seeded repeat runs, optionally spread over worker processes."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")


def run_repeats(task: Callable[[int], T], seeds: Iterable[int], workers: int = 1) -> list[T]:
    """``[task(seed) for seed in sorted(seeds)]``.

    With ``workers > 1`` the calls run in separate processes (``task`` must be
    picklable); results still come back ordered by seed.
    """
    seeds = sorted(seeds)
    if workers <= 1 or len(seeds) <= 1:
        return [task(s) for s in seeds]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(task, seeds))
