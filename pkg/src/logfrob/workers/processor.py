"""Per-weight compute pool"""
import os
import traceback
from concurrent.futures import ThreadPoolExecutor, as_completed

from ..utils.helpers import null_log


def default_workers():
    """LOGFROB_THREADS, else the cpu count."""
    value = os.environ.get("LOGFROB_THREADS")
    if value:
        try:
            return max(1, int(value))
        except ValueError:
            pass
    return os.cpu_count() or 1


def run_weight_jobs(job, weights, max_workers=None, log_func=null_log):
    """
    Run ``job(m)`` for every weight and return the results in input order.

    Args:
        job: Callable taking one weight tuple
        weights: Sequence of weights (already in lex order)
        max_workers: Pool size (None = LOGFROB_THREADS or cpu count)
        log_func: Function to call for logging messages

    Returns:
        List of results, one per weight, in the order of ``weights``

    Raises:
        The first exception raised by a job, after every job has finished
    """
    weights = list(weights)
    if not weights:
        return []

    if max_workers is None:
        max_workers = default_workers()
    max_workers = max(1, min(max_workers, len(weights)))

    if max_workers == 1:
        log_func(f"🔧 Computing {len(weights)} weight(s) sequentially")
        return [job(m) for m in weights]

    log_func(f"🔧 Computing {len(weights)} weight(s) with {max_workers} worker(s)")

    results = [None] * len(weights)
    errors = []

    def job_wrapper(idx, m):
        return idx, job(m)

    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        futures = {executor.submit(job_wrapper, idx, m): idx for idx, m in enumerate(weights)}

        for future in as_completed(futures):
            idx = futures[future]
            try:
                _, result = future.result()
                results[idx] = result
            except Exception as e:
                log_func(f"💥 Exception in weight job {weights[idx]}: {str(e)}")
                log_func(f"Stack trace:\n{traceback.format_exc()}")
                errors.append((idx, e))

    if errors:
        errors.sort(key=lambda item: item[0])
        raise errors[0][1]
    return results
