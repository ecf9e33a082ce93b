import pytest

from nbising.embedding import face_trace
from nbising.fixtures import fixture_graph

FIXTURE_NAMES = ["e1", "p3", "c3", "c4", "bow", "grid3", "t22", "t33"]
PLANAR_NAMES = ["e1", "p3", "c3", "c4", "bow", "grid3"]


@pytest.fixture(scope="session")
def graphs():
    return {name: fixture_graph(name) for name in FIXTURE_NAMES}


@pytest.fixture(scope="session")
def duals(graphs):
    return {name: face_trace(g) for name, g in graphs.items()}
