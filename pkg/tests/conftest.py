import os

os.environ.setdefault("METALIN_ENV", "testing")

import numpy as np  # noqa: E402
import pytest  # noqa: E402

from metalin.core.taskgen import general_distribution, sample_tasks  # noqa: E402


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20231017)


@pytest.fixture
def pool_1d(rng):
    """Small scalar task pool shared by a test's fit and risk evaluation."""
    return sample_tasks(rng, general_distribution(rng, 1), 2000)


@pytest.fixture
def pool_3d(rng):
    return sample_tasks(rng, general_distribution(rng, 3), 300)


@pytest.fixture(autouse=True)
def _no_thread_override(monkeypatch):
    monkeypatch.delenv("METALIN_THREADS", raising=False)
