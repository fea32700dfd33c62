import json
import math
from itertools import chain, combinations

import numpy as np
import pytest

from src.zeroforcing.core.errors import PreconditionError
from src.zeroforcing.core.forcing import bruteForceZ
from src.zeroforcing.core.graphs import sampleSimple
from src.zeroforcing.core.models.spectral_profile import SpectralProfile
from src.zeroforcing.core.spectral import (closedFormCrossing, deficitRatio, earlierBounds, edgeCount,
                                           edgeGuaranteeThreshold, findBipartiteHole, friedmanLambda, mixingCheck,
                                           operativeLambda, prop7Asymptotic, prop7Bound, prop7Recursion,
                                           removalGuarantee, secondEigenvalue, spectralFraction, spectralProfile,
                                           spectralReport, writeSpectralReport)


def smallSubsets(n: int, size: int):
    return chain.from_iterable(combinations(range(n), k) for k in range(size + 1))


@pytest.mark.parametrize("fixture, expected", [("k4", 1.0), ("cycle6", 2.0), ("petersen", 2.0), ("cube", 3.0)])
def testSecondEigenvalue(request, fixture, expected):
    assert secondEigenvalue(request.getfixturevalue(fixture)) == pytest.approx(expected, abs=1e-9)


def testSparseEigensolverAgreesWithDense(petersen, cube):
    for graph in (petersen, cube):
        dense = secondEigenvalue(graph)
        assert secondEigenvalue(graph, denseLimit=4) == pytest.approx(dense, abs=1e-6)


def testRandomGraphSpectrum():
    for seed in range(3):
        graph, _ = sampleSimple(300, 4, seed)
        lam = secondEigenvalue(graph)
        assert math.sqrt(4) - 4 / math.sqrt(300) <= lam < 4


def testSecondEigenvalueNeedsRegularGraph(path4):
    with pytest.raises(PreconditionError):
        secondEigenvalue(path4)


def testSpectralProfile(petersen):
    profile = spectralProfile(petersen)
    assert (profile.n, profile.d, profile.source) == (10, 3, "computed")
    assert profile.lam == pytest.approx(2.0)
    with pytest.raises(PreconditionError):
        SpectralProfile(10, 3, -1.0)
    with pytest.raises(PreconditionError):
        SpectralProfile(10, 3, 1.0, "guess")


def testEdgeCountCountsInternalEdgesTwice(k4):
    assert edgeCount(k4, {0, 1}, {0, 1}) == 2
    assert edgeCount(k4, {0}, {1, 2}) == 2


def testMixingInequalityOnPetersen(petersen):
    for first in smallSubsets(10, 3):
        rest = [v for v in range(10) if v not in first]
        for second in chain.from_iterable(combinations(rest, k) for k in range(4)):
            assert mixingCheck(petersen, first, second, 2.0) >= -1e-9


def testMixingEqualityCases(petersen):
    everything = range(10)
    assert mixingCheck(petersen, everything, everything, 2.0) == pytest.approx(0.0, abs=1e-12)
    assert mixingCheck(petersen, [], [1, 2], 2.0) == 0.0


def testEdgeGuaranteeOnPetersen(petersen):
    assert edgeGuaranteeThreshold(10, 3, 2.0) == 4.0
    for first in combinations(range(10), 5):
        second = set(range(10)) - set(first)
        assert edgeCount(petersen, first, second) > 0
    assert edgeGuaranteeThreshold(10, 3, 0.0) == 0.0
    assert edgeGuaranteeThreshold(10, 3, 3.0) == 5.0
    with pytest.raises(PreconditionError):
        edgeGuaranteeThreshold(10, 3, -1.0)


def testProp7Bound():
    assert prop7Bound(1000, 3, 3.0) == pytest.approx(1000.0)
    exact, asymptotic = prop7Bound(10 ** 6, 100, 20.0), prop7Asymptotic(10 ** 6, 100, 20.0)
    assert exact == pytest.approx(asymptotic, rel=0.01)
    with pytest.raises(PreconditionError):
        prop7Bound(100, 3, 0.0)
    with pytest.raises(PreconditionError):
        prop7Bound(10, 8, 2.0)


def testProp7BoundGrowsWithLambda():
    values = [prop7Bound(10 ** 4, 20, lam) for lam in np.linspace(0.5, 20, 40)]
    assert all(later >= earlier for earlier, later in zip(values, values[1:]))


@pytest.mark.parametrize("n, d, lam", [(10 ** 4, 10, 6.0), (10 ** 5, 50, 14.0), (5000, 3, 2.9)])
def testRecursionMatchesClosedForm(n, d, lam):
    t = prop7Recursion(n, d, lam)
    assert abs(t - closedFormCrossing(n, d, lam)) <= 1
    # The steps of the recursion dominate at least the first-phase count
    assert t >= math.log(2 * lam / (d + lam)) / math.log1p(-(d + lam) / n)


def testRemovalGuarantee():
    assert removalGuarantee(100, 3, 2.0, 50) == pytest.approx(4.5)


def testFriedmanLambda():
    assert friedmanLambda(10) == 6.0
    assert friedmanLambda(5, 0.1) == pytest.approx(4.1)
    assert operativeLambda(16) == 8.0
    with pytest.raises(PreconditionError):
        friedmanLambda(2)


def testSpectralFractionLimit():
    d, n = 10 ** 4, 10 ** 8
    lam = operativeLambda(d)
    assert prop7Bound(n, d, lam) / n == pytest.approx(spectralFraction(d, lam), abs=1e-6)
    # The deficit approaches ln d/(2d) slowly from below
    assert 0.6 <= deficitRatio(d) <= 0.8
    assert deficitRatio(10 ** 4) < deficitRatio(10 ** 8) < deficitRatio(10 ** 16) < 1.0


def testEarlierBounds():
    lower, upper = earlierBounds(100)
    assert lower == pytest.approx(1 - 40 * math.log(100) / 100)
    assert upper == pytest.approx(1 - math.log(100) / 400)


def testHoleInCycle(cycle6):
    assert findBipartiteHole(cycle6, 2) == (frozenset({0, 1}), frozenset({3, 4}))


def testNoHoleInCompleteGraph(k4):
    assert findBipartiteHole(k4, 1) is None
    assert findBipartiteHole(k4, 0) == (frozenset(), frozenset())


def testHolesAgreeWithZeroForcing(namedCubics):
    for graph in namedCubics:
        z = bruteForceZ(graph)
        for q in range(1, graph.n // 2 + 1):
            hole = findBipartiteHole(graph, q)
            if hole is None:
                assert z >= graph.n - 2 * q
            else:
                first, second = hole
                assert len(first) == len(second) == q and not first & second
                assert edgeCount(graph, first, second) == 0


def testPetersenHasNoLargeHole(petersen):
    assert findBipartiteHole(petersen, 5) is None


def testExhaustiveHoleSearchLimit():
    graph, _ = sampleSimple(30, 3, seed=0)
    with pytest.raises(PreconditionError):
        findBipartiteHole(graph, 3)
    hole = findBipartiteHole(graph, 3, exhaustive=False, seed=1)
    assert hole is not None
    assert edgeCount(graph, *hole) == 0


def testSpectralReport(tmp_path, petersen):
    report = spectralReport(petersen, q=5)
    assert report["lambda"] == pytest.approx(2.0)
    assert report["threshold"] == pytest.approx(4.0)
    assert report["holes_found"] == []
    assert report["prop7_exact"] > 0

    writeSpectralReport(str(tmp_path / "spectral.json"), report)
    saved = json.loads((tmp_path / "spectral.json").read_text())
    assert set(saved) == {"n", "d", "lambda", "prop7_exact", "prop7_asymptotic", "threshold", "holes_found"}
