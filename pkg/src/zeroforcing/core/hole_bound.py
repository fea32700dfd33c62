import math
import os
from typing import Dict, Iterable, List

import numpy as np
from scipy.optimize import brentq

from src.zeroforcing.core.errors import NumericalError, PreconditionError
from src.zeroforcing.core.log import Log
from src.zeroforcing.core.models.asymptotic_estimate import AsymptoticEstimate
from src.zeroforcing.core.models.hole_bound_result import HoleBoundResult
from src.zeroforcing.core.utils import writeCsv

BRACKET = (1e-6, 0.5 - 1e-6)
SCAN_POINTS = 200
DOMAIN_TOL = 1e-12
LN2 = math.log(2.0)


def entropyG(x: float) -> float:
    """
    g(x) = x ln x, with g(0) = 0.

    :param x: A nonnegative real.
    :type x: float
    :return: x ln x.
    :rtype: float
    """
    if x < 0:
        raise PreconditionError(f"g is undefined for x={x}")
    if x == 0:
        return 0.0
    return x * math.log(x)


def _shiftedG(s: float) -> float:
    # g(1 + s) without losing digits when s is small
    if 1.0 + s < 0.5:
        return entropyG(max(1.0 + s, 0.0))
    return (1.0 + s) * math.log1p(s)


def domainTerms(a: float, b: float, d: float) -> Dict[str, float]:
    """
    The arguments of g in the hole exponent that are not trivially positive.

    :param a: Side fraction.
    :type a: float
    :param b: Scaled count of edges inside the first side's neighbourhood.
    :type b: float
    :param d: Degree.
    :type d: float
    :return: Term name to value.
    :rtype: Dict[str, float]
    """
    return {
        "da": d * a,
        "d-2da": d - 2 * d * a,
        "d-2da+2b": d - 2 * d * a + 2 * b,
        "a": a,
        "1-2a": 1 - 2 * a,
        "da-2b": d * a - 2 * b,
        "b": b,
        "d-3da+2b": d - 3 * d * a + 2 * b,
    }


def _checkDomain(a: float, b: float, d: float) -> None:
    for name, value in domainTerms(a, b, d).items():
        if value < -DOMAIN_TOL * max(1.0, d):
            raise PreconditionError(f"f(a={a}, b={b}, d={d}) outside its domain: {name}={value:.3e} < 0")


def exponentF(a: float, b: float, d: float) -> float:
    """
    Growth rate of the expected number of (an)-bipartite holes with bn edges from the first
    side into the neighbourhood of the second. All ln d terms cancel, so the exponent is
    evaluated in terms of b / d.

    :param a: Side fraction.
    :type a: float
    :param b: Edge parameter.
    :type b: float
    :param d: Degree.
    :type d: float
    :return: f(a, b, d), so that the expected count is exp(f n + o(n)).
    :rtype: float
    """
    _checkDomain(a, b, d)
    beta = b / d
    inner = (entropyG(a)
             + _shiftedG(-2 * a)
             + 0.5 * _shiftedG(-2 * a + 2 * beta)
             - entropyG(max(a - 2 * beta, 0.0))
             - entropyG(max(beta, 0.0))
             - _shiftedG(max(-3 * a + 2 * beta, -1.0))
             - beta * LN2)
    return d * inner - 2 * entropyG(a) - _shiftedG(-2 * a)


def bStar(a: float, d: float) -> float:
    """
    The stationary point of f in b, the positive root of d²a² + 4dab - 4b² - 2db = 0.

    :param a: Side fraction in (0, 1/2).
    :type a: float
    :param d: Degree.
    :type d: float
    :return: (2da - d + sqrt((2da - d)² + 4d²a²)) / 4, evaluated without cancellation.
    :rtype: float
    """
    if not 0 < a < 0.5:
        raise PreconditionError(f"a={a} outside (0, 1/2)")
    s = 1.0 - 2.0 * a
    b = d * a * a / (s + math.hypot(s, 2.0 * a))
    _checkDomain(a, b, d)
    return b


def maximizedExponent(a: float, d: float) -> float:
    """
    max over b of f(a, b, d), comparing b* against both ends of the b-domain.

    :param a: Side fraction.
    :type a: float
    :param d: Degree.
    :type d: float
    :return: The largest exponent found.
    :rtype: float
    """
    interior = exponentF(a, bStar(a, d), d)
    best = interior
    for b in (max(0.0, (3 * a - 1) * d / 2), d * a / 2):
        edge = exponentF(a, b, d)
        if edge > best:
            Log.verbose(f"Boundary b={b:.6g} beats b* at a={a:.6g}, d={d}: {edge:.3e} > {interior:.3e}")
            best = edge
    return best


def thresholdA(d: int, rootTol: float = 1e-12) -> HoleBoundResult:
    """
    Largest a in (0, 1/2) at which the maximized exponent changes sign. Above it, a.a.s.
    no (an)-bipartite hole exists and Z >= (1 - 2a) n.

    :param d: Degree, at least 3.
    :type d: int
    :param rootTol: Absolute tolerance in a.
    :type rootTol: float
    :return: The threshold and the derived lower bound.
    :rtype: HoleBoundResult
    """
    if d < 3:
        raise PreconditionError(f"thresholdA needs d >= 3, got d={d}")

    grid = np.linspace(BRACKET[0], BRACKET[1], SCAN_POINTS + 1)
    values = np.array([maximizedExponent(a, d) for a in grid])
    positive = np.nonzero(values > 0)[0]
    if len(positive) == 0 or positive[-1] == len(grid) - 1:
        raise NumericalError(f"No sign change of f(a, b*, {d}) on [{BRACKET[0]}, {BRACKET[1]}]")

    i = int(positive[-1])
    a = brentq(lambda x: maximizedExponent(x, d), grid[i], grid[i + 1], xtol=rootTol)
    b = bStar(a, d)
    result = HoleBoundResult(d, a, b, exponentF(a, b, d), rootTol)
    Log.verbose(f"Hole threshold d={d}: a={a:.6f}, lower bound {result.lowerBound:.5f}")
    return result


def correctedCoefficient(K: float, d: float) -> float:
    """
    K(2 - K) plus the first correction 2K(1 - ln(K ln d)) / ln d of f d / ln² d at
    a = K ln d / d.
    """
    L = math.log(d)
    return K * (2 - K) + 2 * K * (1 - math.log(K * L)) / L


def asymptoticCheck(K: float, d: float) -> AsymptoticEstimate:
    """
    Evaluates f at a = K ln d / d and b = b*, rescaled by d / ln² d.

    :param K: Multiplier of ln d / d.
    :type K: float
    :param d: Degree, large.
    :type d: float
    :return: The estimate with the leading and corrected coefficients.
    :rtype: AsymptoticEstimate
    """
    L = math.log(d)
    a = K * L / d
    estimate = exponentF(a, bStar(a, d), d) * d / (L * L)
    return AsymptoticEstimate(K, d, estimate, K * (2 - K), correctedCoefficient(K, d))


def thresholdTable(ds: Iterable[int], rootTol: float = 1e-12) -> List[HoleBoundResult]:
    return [thresholdA(d, rootTol) for d in ds]


def writeLowerBoundCsv(path: str, results: Iterable[HoleBoundResult]) -> None:
    writeCsv(path, ["d", "a", "lower_bound"],
             ([r.d, f"{r.aThreshold:.5f}", f"{r.lowerBound:.5f}"] for r in results))
    Log.info(f"Wrote lower bounds to {os.path.abspath(path)}")
