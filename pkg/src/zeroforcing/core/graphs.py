import math
from typing import List, Optional, Set, Tuple

import numpy as np
from scipy.sparse.csgraph import connected_components

from src.zeroforcing.core.errors import GenerationError, PreconditionError
from src.zeroforcing.core.log import Log
from src.zeroforcing.core.models.graph import RegularGraph, SimpleGraph
from src.zeroforcing.core.models.multigraph import MultiGraph
from src.zeroforcing.core.models.pairing import Pairing
from src.zeroforcing.core.utils import Seed, makeRng

MAX_ATTEMPTS_CAP = 1_000_000


def newPairing(n: int, d: int, seed: Seed) -> Pairing:
    """
    Draws a uniformly random pairing of the d·n configuration points.

    :param n: Number of buckets.
    :type n: int
    :param d: Points per bucket.
    :type d: int
    :param seed: Generator seed.
    :type seed: Seed
    :return: The pairing.
    :rtype: Pairing
    """
    _checkParameters(n, d)
    return _drawPairing(n, d, makeRng(seed))


def _checkParameters(n: int, d: int) -> None:
    if n < 1:
        raise PreconditionError(f"n must be at least 1, got {n}")
    if d < 1:
        raise PreconditionError(f"d must be at least 1, got {d}")
    if (d * n) % 2:
        raise PreconditionError(f"dn odd: d={d}, n={n}")


def _drawPairing(n: int, d: int, rng: np.random.Generator) -> Pairing:
    # The lowest unmatched point is paired with a uniform choice among the other unmatched points
    total = d * n
    pool = list(range(total))
    where = list(range(total))
    matched = [False] * total
    matches = np.empty((total // 2, 2), dtype=np.int64)
    uniforms = rng.random(total // 2).tolist()
    size = total
    low = 0

    def remove(point: int) -> None:
        nonlocal size
        size -= 1
        slot = where[point]
        last = pool[size]
        pool[slot] = last
        where[last] = slot
        matched[point] = True

    for k in range(total // 2):
        while matched[low]:
            low += 1
        remove(low)
        partner = pool[int(uniforms[k] * size)]
        remove(partner)
        matches[k, 0] = low
        matches[k, 1] = partner
    return Pairing(n, d, matches)


def project(pairing: Pairing) -> MultiGraph:
    """
    Projects a pairing to its multigraph: every point is replaced by its bucket.

    :param pairing: The pairing.
    :type pairing: Pairing
    :return: The multigraph with one edge per pair.
    :rtype: MultiGraph
    """
    buckets = pairing.matches // pairing.d
    edges = np.sort(buckets, axis=1)
    return MultiGraph(pairing.n, pairing.d, edges)


def isSimple(graph: MultiGraph) -> bool:
    edges = graph.edges
    if len(edges) == 0:
        return True
    if np.any(edges[:, 0] == edges[:, 1]):
        return False
    keys = edges[:, 0].astype(np.int64) * graph.n + edges[:, 1]
    return len(np.unique(keys)) == len(keys)


def defaultMaxAttempts(d: int) -> int:
    """
    Ten times the expected number of pairings per simple graph, capped at one million.

    :param d: Degree.
    :type d: int
    :return: The attempt budget.
    :rtype: int
    """
    exponent = (d * d - 1) / 4
    if exponent > math.log(MAX_ATTEMPTS_CAP):
        return MAX_ATTEMPTS_CAP
    return min(MAX_ATTEMPTS_CAP, 10 * math.ceil(math.exp(exponent)))


def sampleSimple(n: int, d: int, seed: Seed, maxAttempts: Optional[int] = None) -> Tuple[RegularGraph, int]:
    """
    Rejection-samples pairings until the projection is simple, which yields a uniformly
    random simple d-regular graph.

    :param n: Vertex count.
    :type n: int
    :param d: Degree.
    :type d: int
    :param seed: Generator seed.
    :type seed: Seed
    :param maxAttempts: Pairings to try before giving up; defaults to defaultMaxAttempts(d).
    :type maxAttempts: Optional[int]
    :return: The graph and the number of pairings drawn.
    :rtype: Tuple[RegularGraph, int]
    """
    _checkParameters(n, d)
    if d >= n:
        raise PreconditionError(f"d must be below n for a simple graph, got d={d}, n={n}")
    if maxAttempts is None:
        maxAttempts = defaultMaxAttempts(d)

    rng = makeRng(seed)
    for attempt in range(1, maxAttempts + 1):
        multigraph = project(_drawPairing(n, d, rng))
        if isSimple(multigraph):
            Log.verbose(f"Sampled simple {d}-regular graph on {n} vertices after {attempt} pairings")
            return RegularGraph.fromEdges(n, multigraph.edges, d), attempt
    raise GenerationError(f"No simple {d}-regular graph on {n} vertices after {maxAttempts} pairings")


def components(graph: SimpleGraph) -> List[Set[int]]:
    """
    Connected components, ordered by their smallest vertex.

    :param graph: The graph.
    :type graph: SimpleGraph
    :return: One vertex set per component.
    :rtype: List[Set[int]]
    """
    count, labels = connected_components(graph.adjacencyMatrix(), directed=False)
    parts: List[Set[int]] = [set() for _ in range(count)]
    for v, label in enumerate(labels.tolist()):
        parts[label].add(v)
    return sorted(parts, key=min)


def cycleCount2Regular(graph: RegularGraph) -> int:
    if graph.d != 2:
        raise PreconditionError(f"cycle counting needs a 2-regular graph, got d={graph.d}")
    count, _ = connected_components(graph.adjacencyMatrix(), directed=False)
    return int(count)


def expectedCycleCount(n: int) -> float:
    """
    Expected number of cycles in the 2-regular pairing multigraph: the i-th pair closes a
    cycle with probability 1/(2n - 2i + 1).

    :param n: Vertex count.
    :type n: int
    :return: The expectation, ½ ln n + O(1).
    :rtype: float
    """
    return float(np.sum(1.0 / (2.0 * np.arange(1, n + 1) - 1.0)))


def hamiltonianCycleProbability(n: int) -> float:
    """
    Asymptotic probability that a uniformly random simple 2-regular graph is a single cycle.
    """
    return 0.5 * math.exp(0.75) * math.sqrt(math.pi) / math.sqrt(n)
