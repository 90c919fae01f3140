import numpy as np
import pytest

from qdisc.context import QContext


@pytest.fixture(scope="session")
def ctx():
    """Desk-scale context used by the acceptance criteria."""
    return QContext(q=0.5, levels=64, mode_cutoff=16)


@pytest.fixture(scope="session")
def ctx_small():
    """Cheap context for engine-level unit tests."""
    return QContext(q=0.5, levels=24, mode_cutoff=8)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
