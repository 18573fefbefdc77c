import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from csarray import AngleGrid, load_fixture, synthesize  # noqa: E402
from csarray.cs_synthesis import PositionGrid, build_dictionary  # noqa: E402


@pytest.fixture(scope="session")
def example_grid():
    return AngleGrid.uniform(401)


@pytest.fixture(scope="session")
def example_dictionary(example_grid):
    return build_dictionary(PositionGrid(10.0, 0.1), example_grid)


@pytest.fixture(scope="session")
def chebyshev_ref():
    return load_fixture("chebyshev20").array


@pytest.fixture(scope="session")
def taylor_ref():
    return load_fixture("taylor_kaiser29").array


@pytest.fixture(scope="session")
def example1_report(chebyshev_ref):
    return synthesize(chebyshev_ref)


@pytest.fixture(scope="session")
def example2_report(taylor_ref):
    return synthesize(taylor_ref)
