import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20261019)


def ulp_close(a, b, scale, n_ulps=8):
    """|a - b| within n_ulps units in the last place of ``scale``."""
    return np.all(np.abs(np.asarray(a) - np.asarray(b)) <= n_ulps * np.spacing(np.abs(np.asarray(scale, dtype=float))))
