import numpy as np
import pytest

from qcskew.lattice import build_tiling
from qcskew.metrics import SamplingPlan


@pytest.fixture(scope="session")
def tiling_k3():
    return build_tiling(3)


@pytest.fixture(scope="session")
def tiling_k9():
    return build_tiling(9)


@pytest.fixture(scope="session")
def small_plan():
    return SamplingPlan(seed=3, triangle_count=400, orientation_count=24,
                        scale_ladder=(0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625),
                        circle_samples=1024)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
