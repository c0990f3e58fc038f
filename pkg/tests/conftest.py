import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fhbvm import build_quadrature


@pytest.fixture(scope="session")
def quad_05_s22():
    return build_quadrature([0.5], 22)


@pytest.fixture(scope="session")
def quad_0204_s22():
    return build_quadrature([0.2, 0.4], 22)
