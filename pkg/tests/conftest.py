import os

import numpy as np
import pytest

# Share the grid-operator disk cache across test processes so the ~60 s
# multiplier build is paid at most once per (grid, params) combination.
os.environ.setdefault("BOLTZLAB_CACHE_DIR", "/root/cache")
os.makedirs(os.environ["BOLTZLAB_CACHE_DIR"], exist_ok=True)


@pytest.fixture
def rng():
    return np.random.default_rng(20260826)
