"""
Bounded worker pool that always returns results in task order, so the
degree of parallelism never changes an output.
"""

import logging
from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def map_ordered(
    fn: Callable[[T], R],
    tasks: Iterable[T],
    workers: int = 1,
    *,
    processes: bool = False,
    initializer: Callable | None = None,
    initargs: Sequence = (),
    chunksize: int = 1,
) -> list[R]:
    tasks = list(tasks)
    workers = max(1, min(workers, len(tasks) or 1))

    if workers == 1:
        if initializer is not None:
            initializer(*initargs)
        return [fn(t) for t in tasks]

    logger.debug("Worker pool start | workers=%s tasks=%s processes=%s", workers, len(tasks), processes)

    if processes:
        with ProcessPoolExecutor(max_workers=workers, initializer=initializer, initargs=tuple(initargs)) as pool:
            return list(pool.map(fn, tasks, chunksize=chunksize))

    if initializer is not None:
        initializer(*initargs)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks))
