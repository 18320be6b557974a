"""The per-weight job pool."""
import threading

import pytest

from logfrob.workers.processor import default_workers, run_weight_jobs


def test_default_workers(monkeypatch):
    monkeypatch.setenv("LOGFROB_THREADS", "3")
    assert default_workers() == 3
    monkeypatch.setenv("LOGFROB_THREADS", "0")
    assert default_workers() == 1
    monkeypatch.setenv("LOGFROB_THREADS", "many")
    assert default_workers() >= 1


@pytest.mark.parametrize("workers", [1, 4])
def test_results_follow_input_order(workers):
    weights = [(x, -x) for x in range(12)]
    assert run_weight_jobs(lambda m: m[0] * 10, weights, workers) == [x * 10 for x in range(12)]


def test_empty_input():
    assert run_weight_jobs(lambda m: 1 / 0, [], 4) == []


def test_jobs_share_the_pool():
    seen = set()
    lock = threading.Lock()

    def job(m):
        with lock:
            seen.add(threading.get_ident())
        return m

    run_weight_jobs(job, [(x,) for x in range(8)], 2)
    assert 1 <= len(seen) <= 2


def test_first_error_is_raised_after_all_jobs():
    finished = []
    messages = []

    def job(m):
        if m[0] in (2, 5):
            raise ValueError(f"bad weight {m[0]}")
        finished.append(m)
        return m

    with pytest.raises(ValueError, match="bad weight 2"):
        run_weight_jobs(job, [(x,) for x in range(7)], 3, messages.append)
    assert len(finished) == 5
    assert any("Exception in weight job" in msg for msg in messages)
