"""Order-preserving process-pool map used by the enumerators."""

from concurrent.futures import ProcessPoolExecutor


def ordered_map(fn, tasks, workers: int = 1) -> list:
    """Results of fn over tasks, in task order; runs in-process when workers <= 1."""
    return list(ordered_imap(fn, tasks, workers))


def ordered_imap(fn, tasks, workers: int = 1):
    """Like ordered_map but yields each result as soon as it and all earlier ones are done."""
    tasks = list(tasks)
    if workers <= 1 or len(tasks) <= 1:
        for t in tasks:
            yield fn(t)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(fn, tasks)
