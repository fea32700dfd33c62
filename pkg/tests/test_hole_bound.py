import math

import numpy as np
import pytest

from src.zeroforcing.core.errors import PreconditionError
from src.zeroforcing.core.hole_bound import (asymptoticCheck, bStar, correctedCoefficient, domainTerms, entropyG,
                                             exponentF, maximizedExponent, thresholdA, thresholdTable,
                                             writeLowerBoundCsv)
from src.zeroforcing.core.utils import makeRng

THRESHOLDS = {3: 0.46504, 4: 0.42746, 5: 0.39432, 6: 0.36609, 7: 0.34210, 8: 0.32156, 9: 0.30378, 10: 0.28825,
              11: 0.27454, 12: 0.26233, 13: 0.25137, 14: 0.24147}


def testEntropyG():
    assert entropyG(1.0) == 0.0
    assert entropyG(0.0) == 0.0
    assert entropyG(math.e) == pytest.approx(math.e)
    with pytest.raises(PreconditionError):
        entropyG(-0.1)


def testDomainViolationNamesTerm():
    with pytest.raises(PreconditionError, match="da-2b"):
        exponentF(0.2, 0.5, 3)
    assert set(domainTerms(0.2, 0.1, 3)) >= {"da", "1-2a", "b", "d-3da+2b"}


def testBStarOutsideRange():
    with pytest.raises(PreconditionError):
        bStar(0.5, 3)


def testExponentSignAroundCubicThreshold():
    # Holes with small sides are expected; past the threshold their count vanishes
    assert exponentF(0.40, bStar(0.40, 3), 3) > 0
    assert exponentF(0.48, bStar(0.48, 3), 3) < 0


def testExponentVanishesAtThreshold():
    a = 0.46504
    assert exponentF(a, bStar(a, 3), 3) == pytest.approx(0.0, abs=5e-5)


def testBStarIsStationary():
    for a, d in ((0.3, 5), (0.46, 3), (0.2, 12)):
        b, h = bStar(a, d), 1e-7
        slope = (exponentF(a, b + h, d) - exponentF(a, b - h, d)) / (2 * h)
        assert slope == pytest.approx(0.0, abs=1e-5)


def testBStarSolvesQuadratic():
    rng = makeRng(17)
    for _ in range(500):
        a, d = rng.uniform(0.01, 0.49), int(rng.integers(3, 15))
        b = bStar(a, d)
        assert d * d * a * a + 4 * d * a * b - 4 * b * b - 2 * d * b == pytest.approx(0.0, abs=1e-10)


def testBStarSmallSideAsymptotic():
    d = 10 ** 6
    a = 2 * math.log(d) / d
    assert 0.99 <= bStar(a, d) / (0.5 * d * a * a) <= 1.01


@pytest.mark.parametrize("a, d", [(0.3, 5), (0.46, 3), (0.2, 12)])
def testBStarMaximizesExponent(a, d):
    best = exponentF(a, bStar(a, d), d)
    low, high = max(0.0, (3 * a - 1) * d / 2), d * a / 2
    grid = np.linspace(low, high, 10 ** 4)
    assert max(exponentF(a, b, d) for b in grid) <= best + 1e-9
    delta = 1e-3 * d * a
    b = bStar(a, d)
    assert exponentF(a, b - delta, d) < best
    assert exponentF(a, b + delta, d) < best
    assert maximizedExponent(a, d) == pytest.approx(best)


@pytest.mark.parametrize("d, expected", sorted(THRESHOLDS.items()))
def testThresholds(d, expected):
    result = thresholdA(d)
    assert result.aThreshold == pytest.approx(expected, abs=2e-5)
    assert result.lowerBound == pytest.approx(1 - 2 * expected, abs=4e-5)
    assert abs(result.fAtThreshold) < 1e-8


def testThresholdLowerBounds():
    assert thresholdA(3).lowerBound == pytest.approx(0.06992, abs=4e-5)
    assert thresholdA(14).lowerBound == pytest.approx(0.51706, abs=4e-5)


def testThresholdsDecreaseWithDegree():
    values = [result.aThreshold for result in thresholdTable(range(3, 15))]
    assert all(later < earlier for earlier, later in zip(values, values[1:]))


def testThresholdConverges():
    assert abs(thresholdA(5, 1e-13).aThreshold - thresholdA(5, 1e-12).aThreshold) < 1e-12


def testThresholdNeedsDegreeThree():
    with pytest.raises(PreconditionError):
        thresholdA(2)


@pytest.mark.parametrize("K", [1.0, 2.0, 3.0])
def testAsymptoticCoefficient(K):
    estimate = asymptoticCheck(K, 10 ** 6)
    assert estimate.leading == K * (2 - K)
    assert estimate.corrected == correctedCoefficient(K, 10 ** 6)
    assert estimate.estimate == pytest.approx(estimate.corrected, abs=0.05)


def testAsymptoticLeadingTerm():
    assert asymptoticCheck(1.0, 10 ** 6).estimate == pytest.approx(1.0, abs=0.3)
    # Above K = 2 the exponent is negative
    assert asymptoticCheck(2.2, 10 ** 6).estimate < 0


def testLowerBoundCsv(tmp_path):
    path = tmp_path / "lower.csv"
    writeLowerBoundCsv(str(path), thresholdTable([3, 14]))
    lines = path.read_text().splitlines()
    assert lines[0] == "d,a,lower_bound"
    rows = [line.split(",") for line in lines[1:]]
    assert [row[0] for row in rows] == ["3", "14"]
    assert all(len(value.split(".")[1]) == 5 for row in rows for value in row[1:])
    assert float(rows[0][1]) == pytest.approx(0.46504, abs=2e-5)
    assert float(rows[1][2]) == pytest.approx(0.51706, abs=4e-5)


def testAsymptoticGapShrinks():
    gaps = [abs(asymptoticCheck(1.0, d).estimate - 1.0) for d in (10 ** 4, 10 ** 6, 10 ** 9)]
    assert gaps[0] > gaps[1] > gaps[2]
