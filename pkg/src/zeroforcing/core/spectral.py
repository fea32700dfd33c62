import math
from itertools import combinations
from typing import Iterable, Optional, Tuple

import numpy as np
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh

from src.zeroforcing.core.errors import NumericalError, PreconditionError
from src.zeroforcing.core.log import Log
from src.zeroforcing.core.models.graph import SimpleGraph
from src.zeroforcing.core.models.spectral_profile import SpectralProfile
from src.zeroforcing.core.utils import Seed, makeRng, writeJson

Hole = Tuple[frozenset, frozenset]


def _regularDegree(graph: SimpleGraph) -> int:
    if graph.n == 0 or not graph.isRegular():
        raise PreconditionError("Spectral analysis needs a nonempty regular graph")
    return graph.degree(0)


def secondEigenvalue(graph: SimpleGraph, tol: float = 1e-10, denseLimit: int = 2000,
                     maxIterations: Optional[int] = None) -> float:
    """
    max |λ_i| over the eigenvalues after the trivial one. The all-ones eigenvector is
    removed by working with A - (d/n)J.

    :param graph: A d-regular graph.
    :type graph: SimpleGraph
    :param tol: Eigensolver tolerance beyond the dense limit.
    :type tol: float
    :param denseLimit: Largest n handled by a dense eigendecomposition.
    :type denseLimit: int
    :param maxIterations: Iteration cap of the sparse eigensolver.
    :type maxIterations: Optional[int]
    :return: λ.
    :rtype: float
    """
    d = _regularDegree(graph)
    n = graph.n
    if n == 1:
        return 0.0
    adjacency = graph.adjacencyMatrix().astype(float)

    if n <= denseLimit:
        deflated = adjacency.toarray() - d / n
        return float(np.max(np.abs(np.linalg.eigvalsh(deflated))))

    def matvec(x: np.ndarray) -> np.ndarray:
        x = np.ravel(x)
        return adjacency @ x - (d / n) * np.sum(x)

    operator = LinearOperator((n, n), matvec=matvec, dtype=float)
    try:
        values = eigsh(operator, k=1, which='LM', tol=tol, maxiter=maxIterations, return_eigenvectors=False)
    except ArpackNoConvergence as e:
        raise NumericalError(f"Second eigenvalue did not converge for n={n}, d={d}: {e}")
    return float(np.abs(values[0]))


def spectralProfile(graph: SimpleGraph, tol: float = 1e-10, denseLimit: int = 2000) -> SpectralProfile:
    d = _regularDegree(graph)
    return SpectralProfile(graph.n, d, secondEigenvalue(graph, tol, denseLimit), "computed")


def edgeCount(graph: SimpleGraph, first: Iterable[int], second: Iterable[int]) -> int:
    """
    e(U, W): ordered pairs (u, w) with u in U, w in W and uw an edge, so edges inside U ∩ W
    count twice.
    """
    targets = set(second)
    return sum(1 for u in set(first) for w in graph.adjacency[u] if w in targets)


def mixingCheck(graph: SimpleGraph, first: Iterable[int], second: Iterable[int], lam: float) -> float:
    """
    Slack in the expander mixing inequality
    |e(U, W) - d|U||W|/n| <= λ sqrt(|U||W|(1 - |U|/n)(1 - |W|/n)).

    :param graph: A d-regular graph.
    :type graph: SimpleGraph
    :param first: U.
    :type first: Iterable[int]
    :param second: W.
    :type second: Iterable[int]
    :param lam: λ.
    :type lam: float
    :return: Right side minus left side; nonnegative when the inequality holds.
    :rtype: float
    """
    d = _regularDegree(graph)
    n = graph.n
    first, second = set(first), set(second)
    u, w = len(first), len(second)
    bound = lam * math.sqrt(max(u * w * (1 - u / n) * (1 - w / n), 0.0))
    return bound - abs(d * u * w / n - edgeCount(graph, first, second))


def edgeGuaranteeThreshold(n: int, d: int, lam: float) -> float:
    """Disjoint sets both larger than λn/(d + λ) always have an edge between them."""
    if lam < 0:
        raise PreconditionError(f"lambda must be nonnegative, got {lam}")
    return lam * n / (d + lam)


def _checkProp7(n: int, d: int, lam: float) -> None:
    if lam <= 0:
        raise PreconditionError(f"lambda must be positive, got {lam}")
    if d + lam >= n:
        raise PreconditionError(f"d + lambda must be below n, got d={d}, lambda={lam}, n={n}")


def prop7Bound(n: int, d: int, lam: float) -> float:
    """
    Upper bound on Z for a connected (n, d, λ)-graph from the length of the degree greedy's
    first phase: n - ln(2λ/(d + λ)) / ln(1 - (d + λ)/n).

    :param n: Vertex count.
    :type n: int
    :param d: Degree.
    :type d: int
    :param lam: λ in (0, d].
    :type lam: float
    :return: The bound.
    :rtype: float
    """
    _checkProp7(n, d, lam)
    return n - math.log(2 * lam / (d + lam)) / math.log1p(-(d + lam) / n)


def prop7Asymptotic(n: int, d: int, lam: float) -> float:
    _checkProp7(n, d, lam)
    return n - math.log((d + lam) / (2 * lam)) * n / (d + lam)


def prop7Recursion(n: int, d: int, lam: float, maxSteps: Optional[int] = None) -> int:
    """
    Iterates a_1 = n, a_t = (1 - (d + λ)/n) a_{t-1} - λ and returns the first t with
    a_t <= λn/(d + λ).

    :param n: Vertex count.
    :type n: int
    :param d: Degree.
    :type d: int
    :param lam: λ.
    :type lam: float
    :param maxSteps: Iteration cap, 10n by default.
    :type maxSteps: Optional[int]
    :return: The crossing step.
    :rtype: int
    """
    _checkProp7(n, d, lam)
    shrink = 1 - (d + lam) / n
    threshold = edgeGuaranteeThreshold(n, d, lam)
    limit = maxSteps or 10 * n
    a, t = float(n), 1
    while a > threshold:
        if t >= limit:
            raise NumericalError(f"Recursion did not cross {threshold:.3f} within {limit} steps")
        a = shrink * a - lam
        t += 1
    return t


def closedFormCrossing(n: int, d: int, lam: float) -> float:
    """
    Real t at which the exact solution a_t = n(1 + λ/(d + λ))(1 - r)^{t-1} - λn/(d + λ),
    r = (d + λ)/n, equals λn/(d + λ).
    """
    _checkProp7(n, d, lam)
    return 1 + math.log(2 * lam / (d + 2 * lam)) / math.log1p(-(d + lam) / n)


def removalGuarantee(n: int, d: int, lam: float, remaining: int) -> float:
    """
    While |W_t| > λn/(d + λ) some dominated vertex has type at most (d + λ)|W_t|/n + λ.

    :param n: Vertex count.
    :type n: int
    :param d: Degree.
    :type d: int
    :param lam: λ.
    :type lam: float
    :param remaining: |W_t|, the undominated count.
    :type remaining: int
    :return: The type bound.
    :rtype: float
    """
    return (d + lam) * remaining / n + lam


def friedmanLambda(d: int, epsilon: float = 0.0) -> float:
    if d < 3:
        raise PreconditionError(f"friedmanLambda needs d >= 3, got d={d}")
    if epsilon < 0:
        raise PreconditionError(f"epsilon must be nonnegative, got {epsilon}")
    return 2 * math.sqrt(d - 1) + epsilon


def operativeLambda(d: int) -> float:
    return 2 * math.sqrt(d)


def spectralFraction(d: float, lam: float) -> float:
    """Limit of prop7Bound / n as n grows: 1 - ln((d + λ)/(2λ)) / (d + λ)."""
    return 1 - math.log((d + lam) / (2 * lam)) / (d + lam)


def deficitRatio(d: float, lam: Optional[float] = None) -> float:
    """
    The spectral deficit ln((d + λ)/(2λ))/(d + λ) relative to ln d/(2d); tends to 1 as d grows
    with λ = 2√d.
    """
    lam = operativeLambda(d) if lam is None else lam
    return (1 - spectralFraction(d, lam)) / (math.log(d) / (2 * d))


def earlierBounds(d: float) -> Tuple[float, float]:
    """
    The interval 1 - 40 ln d/d <= Z/n <= 1 - ln d/(4d) known before the degree-greedy and
    bipartite-hole analyses.
    """
    L = math.log(d)
    return 1 - 40 * L / d, 1 - L / (4 * d)


def _holeFrom(graph: SimpleGraph, first: Iterable[int], q: int) -> Optional[Hole]:
    blocked = set(first)
    for u in list(blocked):
        blocked.update(graph.adjacency[u])
    candidates = [v for v in range(graph.n) if v not in blocked]
    if len(candidates) < q:
        return None
    return frozenset(first), frozenset(candidates[:q])


def _growGreedily(graph: SimpleGraph, q: int, rng: np.random.Generator) -> Optional[Hole]:
    # Grow U one vertex at a time, keeping N[U] as small as possible
    start = int(rng.integers(graph.n))
    first = {start}
    covered = graph.closedNeighbourhood(start)
    while len(first) < q:
        order = rng.permutation(graph.n).tolist()
        best, bestGrowth = -1, graph.n + 1
        for v in order:
            if v in first:
                continue
            growth = len(graph.closedNeighbourhood(v) - covered)
            if growth < bestGrowth:
                best, bestGrowth = v, growth
                if growth == 0:
                    break
        first.add(best)
        covered.update(graph.closedNeighbourhood(best))
    return _holeFrom(graph, first, q)


def findBipartiteHole(graph: SimpleGraph, q: int, exhaustive: bool = True, limit: int = 24,
                      seed: Seed = 0, attempts: int = 100) -> Optional[Hole]:
    """
    Searches for disjoint U, W with |U| = |W| = q and no edge between them. An exhaustive
    search that finds nothing certifies Z >= n - 2q.

    :param graph: The graph.
    :type graph: SimpleGraph
    :param q: Side size.
    :type q: int
    :param exhaustive: Enumerate every U; otherwise grow U greedily from random starts.
    :type exhaustive: bool
    :param limit: Largest n accepted by the exhaustive search.
    :type limit: int
    :param seed: Seed of the randomized search.
    :type seed: Seed
    :param attempts: Random starts of the randomized search.
    :type attempts: int
    :return: (U, W), or None when nothing was found.
    :rtype: Optional[Tuple[frozenset, frozenset]]
    """
    if q < 0:
        raise PreconditionError(f"q must be nonnegative, got {q}")
    if 2 * q > graph.n:
        return None
    if q == 0:
        return frozenset(), frozenset()

    if exhaustive:
        if graph.n > limit:
            raise PreconditionError(f"Exhaustive hole search limited to n <= {limit}, got n={graph.n}")
        for first in combinations(range(graph.n), q):
            hole = _holeFrom(graph, first, q)
            if hole:
                return hole
        return None

    rng = makeRng(seed)
    for _ in range(attempts):
        hole = _growGreedily(graph, q, rng)
        if hole:
            return hole
    Log.verbose(f"No {q}-bipartite hole found in {attempts} randomized attempts")
    return None


def spectralReport(graph: SimpleGraph, q: Optional[int] = None, denseLimit: int = 2000,
                   holeLimit: int = 24) -> dict:
    """
    λ of the graph together with the bounds it implies and, when q is given, the result of a
    hole search.

    :param graph: A d-regular graph.
    :type graph: SimpleGraph
    :param q: Hole side size to search for.
    :type q: Optional[int]
    :param denseLimit: Largest n handled densely by the eigensolver.
    :type denseLimit: int
    :param holeLimit: Largest n searched exhaustively.
    :type holeLimit: int
    :return: The report fields.
    :rtype: dict
    """
    profile = spectralProfile(graph, denseLimit=denseLimit)
    n, d, lam = profile.n, profile.d, profile.lam
    report = {
        "n": n,
        "d": d,
        "lambda": lam,
        "prop7_exact": None,
        "prop7_asymptotic": None,
        "threshold": edgeGuaranteeThreshold(n, d, lam),
        "holes_found": None,
    }
    if lam > 0 and d + lam < n:
        report["prop7_exact"] = prop7Bound(n, d, lam)
        report["prop7_asymptotic"] = prop7Asymptotic(n, d, lam)
    if q is not None:
        hole = findBipartiteHole(graph, q, exhaustive=n <= holeLimit, limit=holeLimit)
        report["holes_found"] = [sorted(hole[0]), sorted(hole[1])] if hole else []
    return report


def writeSpectralReport(path: str, report: dict) -> None:
    writeJson(path, report)
