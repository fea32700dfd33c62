import csv
import json

import networkx as nx
import numpy as np
import pytest

from src.zeroforcing.core.errors import PreconditionError
from src.zeroforcing.core.forcing import (bruteForceGrundy, bruteForceZ, isZeroForcingSet, minimumForcingSet,
                                          validateZseq, zseqFromForcingSet)
from src.zeroforcing.core.graphs import sampleSimple
from src.zeroforcing.core.greedy import (degreeGreedy, smartDegreeGreedy, traceToScaledSeries, writeTraceCsv,
                                         writeZSequenceJson)
from src.zeroforcing.core.models.graph import SimpleGraph
from src.zeroforcing.core.utils import makeRng


@pytest.fixture
def twoTriangles() -> SimpleGraph:
    return SimpleGraph.fromEdges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])


@pytest.fixture
def cubic200():
    return sampleSimple(200, 3, seed=42)[0]


def assertValid(graph, result):
    record = result.record
    assert validateZseq(graph, record.sequence, record.witnesses)
    assert record.forcingSet == frozenset(range(graph.n)) - frozenset(record.witnesses)
    assert isZeroForcingSet(graph, record.forcingSet)


@pytest.mark.parametrize("n", [5, 6, 11, 40])
def testCycleNeedsTwo(n):
    graph = SimpleGraph.fromNetworkx(nx.cycle_graph(n))
    result = degreeGreedy(graph, seed=n)
    assert result.status == "complete"
    assert result.forcingSetSize == 2
    assertValid(graph, result)


def testCompleteGraph(k4):
    result = degreeGreedy(k4, seed=0)
    assert result.forcingSetSize == 3
    assert len(result.trace.steps) == 1


def testPlainOnRandomCubic(cubic200):
    result = degreeGreedy(cubic200, seed=7, audit=True)
    assert result.status == "complete"
    assertValid(cubic200, result)


def testPlainIsDeterministic(cubic200):
    first = degreeGreedy(cubic200, seed=3).record
    second = degreeGreedy(cubic200, seed=3).record
    assert first.sequence == second.sequence
    assert first.witnesses == second.witnesses


def testPlainAlwaysTakesMinimumType(cubic200):
    trace = degreeGreedy(cubic200, seed=1).trace
    for previous, step in zip(trace.steps, trace.steps[1:]):
        positive = [r for r in range(1, 3) if previous.typeCounts[r]]
        assert step.stepType == positive[0]


def testStallOnDisconnectedGraph(twoTriangles):
    result = degreeGreedy(twoTriangles, seed=0)
    assert result.status == "component_stalled"


def testRestartCoversEveryComponent(twoTriangles):
    result = degreeGreedy(twoTriangles, seed=0, onStall="restart")
    assert result.status == "multi_component"
    assert result.forcingSetSize == 4
    assertValid(twoTriangles, result)


def testRejectsUnknownOptions(k4):
    with pytest.raises(PreconditionError):
        degreeGreedy(k4, seed=0, onStall="skip")
    with pytest.raises(PreconditionError):
        smartDegreeGreedy(k4, seed=0, policy="largest")


def testRejectsIsolatedVertices():
    graph = SimpleGraph.fromEdges(3, [(0, 1)])
    with pytest.raises(PreconditionError):
        degreeGreedy(graph, seed=0)


@pytest.mark.parametrize("policy", ["uniform", "t1_first", "t2_first"])
def testSmartOnRandomCubic(cubic200, policy):
    result = smartDegreeGreedy(cubic200, seed=11, policy=policy, audit=True)
    assert result.status == "complete"
    assertValid(cubic200, result)


def testSmartForcingSetIsFinalFirstSet(cubic200):
    result = smartDegreeGreedy(cubic200, seed=5)
    last = result.trace.steps[-1]
    assert last.undominated == 0
    assert sum(last.firstSetCounts) == result.forcingSetSize
    assert sum(last.typeCounts) == cubic200.n


def testSmartWitnessMinimizesScore(cubic200):
    trace = smartDegreeGreedy(cubic200, seed=9).trace
    assert all(step.witnessScore == step.bestWitnessScore for step in trace.steps)


def testSmartInsertionsComeFromFirstSet(cubic200):
    trace = smartDegreeGreedy(cubic200, seed=13).trace
    inserted = [step for step in trace.steps if step.inserted is not None]
    assert all(step.source == "T1" and step.stepType >= 2 for step in inserted)


def testSmartRestart(twoTriangles):
    result = smartDegreeGreedy(twoTriangles, seed=2, onStall="restart")
    assert result.status == "multi_component"
    assertValid(twoTriangles, result)


def testScaledSeries(cubic200):
    trace = degreeGreedy(cubic200, seed=0).trace
    series = traceToScaledSeries(trace)
    assert series.shape == (len(trace.steps), 5)
    assert series[0, 0] == 0.0
    assert np.all(np.diff(series[:, -1]) <= 0)
    assert series[-1, -1] == 0.0


def testWriters(tmp_path, cubic200):
    result = degreeGreedy(cubic200, seed=0, recordSeed=0)
    writeTraceCsv(str(tmp_path / "trace.csv"), result.trace)
    writeZSequenceJson(str(tmp_path / "zseq.json"), result.record)

    with open(tmp_path / "trace.csv", newline='') as file:
        rows = list(csv.reader(file))
    assert rows[0] == ["t", "type", "source", "T0", "T1", "T2", "U"]
    assert len(rows) == len(result.trace.steps) + 1

    payload = json.loads((tmp_path / "zseq.json").read_text())
    assert payload["seed"] == 0
    assert len(payload["forcing_set"]) == result.forcingSetSize


@pytest.mark.slow
@pytest.mark.parametrize("algorithm, expected", [(degreeGreedy, 0.17072), (smartDegreeGreedy, 0.17057)])
def testCubicFractionNearFluidLimit(algorithm, expected):
    fractions = []
    for seed in range(8):
        graph, _ = sampleSimple(2000, 3, seed)
        fractions.append(algorithm(graph, seed=seed + 100).forcingSetSize / graph.n)
    assert np.mean(fractions) == pytest.approx(expected, abs=0.01)


def testSmartOnCycle():
    graph = SimpleGraph.fromNetworkx(nx.cycle_graph(9))
    result = smartDegreeGreedy(graph, seed=4)
    assert result.forcingSetSize == 2
    assert all(step.inserted is None for step in result.trace.steps)


def testTraceBookkeeping(cubic200):
    steps = degreeGreedy(cubic200, seed=6).trace.steps
    assert steps[0].undominated == cubic200.n - 1 - steps[0].stepType
    for previous, step in zip(steps, steps[1:]):
        assert previous.undominated - step.undominated == step.stepType
    for step in steps:
        assert sum(step.typeCounts) + step.undominated == cubic200.n


def testGreedyNeverBeatsExactZ(namedCubics):
    for graph in namedCubics:
        z = bruteForceZ(graph)
        for seed in range(3):
            assert degreeGreedy(graph, seed).forcingSetSize >= z
            assert smartDegreeGreedy(graph, seed).forcingSetSize >= z


def witnessSweep(runs: int):
    rng = makeRng(77)
    for run in range(runs):
        d = int(rng.integers(3, 5))
        n = int(rng.integers(10, 150)) * 2
        graph, _ = sampleSimple(n, d, run)
        algorithm = degreeGreedy if run % 2 else smartDegreeGreedy
        result = algorithm(graph, seed=run, onStall="restart")
        assertValid(graph, result)


def testWitnessSweep():
    witnessSweep(60)


@pytest.mark.slow
def testWitnessSweepExhaustive():
    witnessSweep(1000)


@pytest.mark.slow
@pytest.mark.parametrize("d, n", [(d, n) for d in (3, 4) for n in (8, 10, 12, 14, 16)])
def testGreedyAgainstExactOracles(d, n):
    for seed in range(20):
        graph, _ = sampleSimple(n, d, seed, maxAttempts=100000)
        z = bruteForceZ(graph)
        grundy = bruteForceGrundy(graph)
        assert z + grundy == n
        assert len(zseqFromForcingSet(graph, minimumForcingSet(graph)).sequence) == grundy

        for algorithm in (degreeGreedy, smartDegreeGreedy):
            result = algorithm(graph, seed=seed, onStall="restart")
            assertValid(graph, result)
            assert result.forcingSetSize >= z
            assert len(result.record.sequence) <= grundy
