import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from kreinbem import geometry as G

DISK = G.DomainSpec.disk(1.0, 8)


@pytest.fixture(scope="session")
def disk512():
    return G.build_mesh(G.DomainSpec.disk(1.0, 512))


@pytest.fixture(scope="session")
def disk256():
    return G.build_mesh(G.DomainSpec.disk(1.0, 256))


@pytest.fixture(scope="session")
def grid_fine():
    return G.interior_grid(DISK, h=0.0125, margin=0.02)
