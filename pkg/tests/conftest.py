"""Shared fixtures: prime fields, the small fans of the gallery, isolated run state."""
import os
import sys

import pytest

ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
sys.path.insert(0, os.path.join(ROOT, "src"))
sys.path.insert(0, ROOT)

from logfrob.algebra.exactlin import PrimeField  # noqa: E402
from logfrob.geometry.toricgeom import Fan  # noqa: E402
from logfrob.utils.database import reset_database  # noqa: E402

P1_RAYS = [[1], [-1]]
P1_CONES = [[0], [1]]
P2_RAYS = [[1, 0], [0, 1], [-1, -1]]
P2_CONES = [[0, 1], [1, 2], [0, 2]]
P1XP1_RAYS = [[1, 0], [0, 1], [-1, 0], [0, -1]]
P1XP1_CONES = [[0, 1], [1, 2], [2, 3], [0, 3]]


@pytest.fixture
def f2():
    return PrimeField(2)


@pytest.fixture
def f5():
    return PrimeField(5)


@pytest.fixture
def p1():
    return Fan.from_lists(P1_RAYS, P1_CONES)


@pytest.fixture
def p2():
    return Fan.from_lists(P2_RAYS, P2_CONES)


@pytest.fixture
def p1xp1():
    return Fan.from_lists(P1XP1_RAYS, P1XP1_CONES)


@pytest.fixture
def isolated_env(tmp_path, monkeypatch):
    """Run history and logs under tmp_path, one worker thread."""
    monkeypatch.setenv("LOGFROB_DB", str(tmp_path / "runs.db"))
    monkeypatch.setenv("LOGFROB_LOG_DIR", str(tmp_path / "logs"))
    monkeypatch.setenv("LOGFROB_THREADS", "1")
    reset_database()
    yield tmp_path
    reset_database()
