import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from plankton_dynamics.analysis.model import BaseParams, ModelParams  # noqa: E402


@pytest.fixture
def holling2_base():
    """Holling II case study: beta=2, r=0.5, c=2."""
    return BaseParams(beta=2.0, r=0.5, c=2.0, h=1)


@pytest.fixture
def holling3_base():
    """Holling III case study: beta=2, r=0.5, c=0.25."""
    return BaseParams(beta=2.0, r=0.5, c=0.25, h=2)


@pytest.fixture
def three_point_params():
    """Holling III parameters with three interior fixed points (E-, E0, E+)."""
    return ModelParams(beta=3.0, r=0.5, theta=4.95, c=1.0, h=2)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
