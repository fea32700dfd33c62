import math

import networkx as nx
import numpy as np
import pytest

from src.zeroforcing.core.edge_list import readEdgeList, readGraph, writeEdgeList
from src.zeroforcing.core.errors import GenerationError, PreconditionError
from src.zeroforcing.core.graphs import (MAX_ATTEMPTS_CAP, components, cycleCount2Regular, defaultMaxAttempts,
                                         expectedCycleCount, hamiltonianCycleProbability, isSimple, newPairing,
                                         project, sampleSimple)
from src.zeroforcing.core.models.graph import RegularGraph, SimpleGraph
from src.zeroforcing.core.models.multigraph import MultiGraph
from src.zeroforcing.core.utils import makeRng


def testPairingCoversEveryPointOnce():
    pairing = newPairing(10, 3, seed=7)
    assert pairing.matches.shape == (15, 2)
    assert sorted(pairing.matches.ravel().tolist()) == list(range(30))


def testPairingIsDeterministicPerSeed():
    first = newPairing(50, 4, seed=11).matches
    second = newPairing(50, 4, seed=11).matches
    other = newPairing(50, 4, seed=12).matches
    assert np.array_equal(first, second)
    assert not np.array_equal(first, other)


def testPairingRejectsOddPointCount():
    with pytest.raises(PreconditionError, match="dn odd"):
        newPairing(5, 3, seed=0)


def testPairingIsUniformOnFourPoints():
    # Three perfect matchings of four points, each with probability 1/3
    counts = {}
    rng = makeRng(3)
    for _ in range(3000):
        matches = newPairing(2, 2, seed=int(rng.integers(2 ** 32))).matches
        key = tuple(sorted(tuple(sorted(pair)) for pair in matches.tolist()))
        counts[key] = counts.get(key, 0) + 1
    assert len(counts) == 3
    for count in counts.values():
        assert 0.28 < count / 3000 < 0.39


def testProjectionKeepsDegrees():
    multigraph = project(newPairing(40, 5, seed=1))
    assert multigraph.edges.shape == (100, 2)
    assert np.all(multigraph.degrees() == 5)
    assert np.all(multigraph.edges[:, 0] <= multigraph.edges[:, 1])


def testIsSimpleDetectsLoopsAndParallelEdges():
    assert isSimple(MultiGraph(3, 2, np.array([[0, 1], [1, 2], [0, 2]])))
    assert not isSimple(MultiGraph(2, 2, np.array([[0, 0], [1, 1]])))
    assert not isSimple(MultiGraph(2, 2, np.array([[0, 1], [0, 1]])))


def testSampleSimpleReturnsRegularGraph():
    graph, attempts = sampleSimple(100, 3, seed=5)
    assert isinstance(graph, RegularGraph)
    assert graph.d == 3 and graph.n == 100
    assert attempts >= 1
    assert nx.is_regular(graph.toNetworkx())
    again, _ = sampleSimple(100, 3, seed=5)
    assert again.adjacency == graph.adjacency


def testSampleSimpleRequiresDBelowN():
    with pytest.raises(PreconditionError):
        sampleSimple(4, 4, seed=0)


def testSampleSimpleGivesUpAfterMaxAttempts():
    # A simple 5-regular graph on 6 vertices is K6; pairings almost never give it
    with pytest.raises(GenerationError):
        sampleSimple(6, 5, seed=0, maxAttempts=1)


def testDefaultMaxAttempts():
    assert defaultMaxAttempts(3) == 10 * math.ceil(math.exp(2))
    assert defaultMaxAttempts(40) == MAX_ATTEMPTS_CAP


def testComponentsOrderedBySmallestVertex():
    graph = SimpleGraph.fromEdges(6, [(3, 4), (4, 5), (5, 3), (0, 1), (1, 2), (2, 0)])
    assert components(graph) == [{0, 1, 2}, {3, 4, 5}]


def testCycleCount2Regular():
    graph = RegularGraph.fromEdges(7, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 6), (6, 3)], d=2)
    assert cycleCount2Regular(graph) == 2
    with pytest.raises(PreconditionError):
        cycleCount2Regular(SimpleGraph.fromNetworkx(nx.petersen_graph()))


def testExpectedCycleCountGrowsLikeHalfLogN():
    n = 10 ** 4
    assert expectedCycleCount(n) == pytest.approx(0.5 * math.log(n) + math.log(2) + 0.5772156649 / 2, abs=1e-3)
    assert expectedCycleCount(1) == 1.0


def testHamiltonianCycleProbability():
    assert hamiltonianCycleProbability(100) == pytest.approx(0.5 * math.exp(0.75) * math.sqrt(math.pi) / 10)
    assert hamiltonianCycleProbability(10 ** 4) < hamiltonianCycleProbability(100)


@pytest.mark.slow
def testSimpleFractionMatchesLimit():
    rng = makeRng(2024)
    pairings = 4000
    simple = sum(isSimple(project(newPairing(1000, 3, int(rng.integers(2 ** 32))))) for _ in range(pairings))
    assert 0.12 <= simple / pairings <= 0.15


@pytest.mark.slow
def testTwoRegularCycleCount():
    counts = [cycleCount2Regular(sampleSimple(10 ** 4, 2, seed)[0]) for seed in range(200)]
    assert 3.6 <= np.mean(counts) <= 5.6


def testEdgeListRoundTrip(tmp_path, petersen):
    path = tmp_path / "petersen.el"
    writeEdgeList(str(path), petersen)
    assert path.read_text().splitlines()[0] == "10 15 3"
    assert readGraph(str(path)).adjacency == petersen.adjacency


def testEdgeListKeepsMultigraphs(tmp_path):
    multigraph = MultiGraph(2, 2, np.array([[1, 1], [0, 0]]))
    path = tmp_path / "loops.el"
    writeEdgeList(str(path), multigraph)
    read = readEdgeList(str(path))
    assert read.edges.tolist() == [[0, 0], [1, 1]]
    with pytest.raises(PreconditionError):
        readGraph(str(path))


def testEdgeListValidatesHeader(tmp_path):
    path = tmp_path / "bad.el"
    path.write_text("4 3 2\n0 1\n1 2\n")
    with pytest.raises(PreconditionError, match="declares 3 edges"):
        readEdgeList(str(path))
    path.write_text("4 2 2\n0 1\n1 2\n")
    with pytest.raises(PreconditionError, match="not 2-regular"):
        readGraph(str(path))
