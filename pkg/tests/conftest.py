import os
import tempfile

import networkx as nx
import pytest

from src.zeroforcing.core.config import Config
from src.zeroforcing.core.models.graph import SimpleGraph


def pytest_configure(config):
    base = tempfile.mkdtemp(prefix="zeroforcing-tests-")
    os.environ["ZEROFORCING_CONFIG"] = os.path.join(base, "config.json")
    os.environ["ZEROFORCING_LOG_DIR"] = os.path.join(base, "logs")
    os.environ.pop("ZEROFORCING_THREADS", None)


@pytest.fixture(autouse=True)
def freshConfig():
    Config.reset()
    yield
    Config.reset()


@pytest.fixture
def petersen() -> SimpleGraph:
    return SimpleGraph.fromNetworkx(nx.petersen_graph())


@pytest.fixture
def k4() -> SimpleGraph:
    return SimpleGraph.fromNetworkx(nx.complete_graph(4))


@pytest.fixture
def cycle6() -> SimpleGraph:
    return SimpleGraph.fromNetworkx(nx.cycle_graph(6))


@pytest.fixture
def path4() -> SimpleGraph:
    return SimpleGraph.fromNetworkx(nx.path_graph(4))


@pytest.fixture
def cube() -> SimpleGraph:
    return SimpleGraph.fromNetworkx(nx.hypercube_graph(3))


@pytest.fixture
def namedCubics():
    """Connected 3-regular graphs on at most 12 vertices."""
    graphs = [
        nx.complete_graph(4),
        nx.complete_bipartite_graph(3, 3),
        nx.hypercube_graph(3),
        nx.petersen_graph(),
        nx.circular_ladder_graph(5),
        nx.circular_ladder_graph(6),
        nx.frucht_graph(),
        nx.truncated_tetrahedron_graph(),
    ]
    return [SimpleGraph.fromNetworkx(g) for g in graphs]
