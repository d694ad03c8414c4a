"""Process fan-out for independent training runs."""
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def run_jobs(fn: Callable[[T], R], jobs: Sequence[T], workers: int = 1) -> List[R]:
    """Map fn over jobs, in order; one process per job slot when workers > 1."""
    if workers <= 1 or len(jobs) <= 1:
        return [fn(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
        return list(pool.map(fn, jobs))


def process_runner(workers: int) -> Callable[[Callable, List], List]:
    """Runner with the (fn, jobs) signature expected by sweep_beta."""
    def runner(fn: Callable, jobs: List) -> List:
        return run_jobs(fn, list(jobs), workers)
    return runner
