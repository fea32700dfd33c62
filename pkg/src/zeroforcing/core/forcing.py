import heapq
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.zeroforcing.core.errors import PreconditionError
from src.zeroforcing.core.models.forcing_outcome import ForcingOutcome
from src.zeroforcing.core.models.graph import SimpleGraph
from src.zeroforcing.core.models.zsequence_record import ZSequenceRecord


def closure(graph: SimpleGraph, initial: Iterable[int], rng: Optional[np.random.Generator] = None) -> ForcingOutcome:
    """
    Applies the colour-change rule until no black vertex has exactly one white neighbour.
    Among eligible forcers the lowest index forces first, or a random one when rng is given;
    the final black set does not depend on this order.

    :param graph: The graph.
    :type graph: SimpleGraph
    :param initial: Initially black vertices.
    :type initial: Iterable[int]
    :param rng: Draws a random priority for every forcer that becomes eligible.
    :type rng: Optional[np.random.Generator]
    :return: Final black set and the chronological force list.
    :rtype: ForcingOutcome
    """
    n = graph.n
    black = [False] * n
    for v in initial:
        if not 0 <= v < n:
            raise PreconditionError(f"Vertex {v} outside [0, {n})")
        black[v] = True

    def entry(v: int) -> Tuple[float, int]:
        return (rng.random() if rng is not None else v), v

    whiteCount = [sum(1 for w in graph.adjacency[v] if not black[w]) for v in range(n)]
    eligible = [entry(v) for v in range(n) if black[v] and whiteCount[v] == 1]
    heapq.heapify(eligible)
    forces: List[Tuple[int, int]] = []

    while eligible:
        _, v = heapq.heappop(eligible)
        # Stale entries lost their last white neighbour since being pushed
        if whiteCount[v] != 1:
            continue
        w = next(x for x in graph.adjacency[v] if not black[x])
        black[w] = True
        forces.append((v, w))
        for x in graph.adjacency[w]:
            whiteCount[x] -= 1
            if black[x] and whiteCount[x] == 1:
                heapq.heappush(eligible, entry(x))
        if whiteCount[w] == 1:
            heapq.heappush(eligible, entry(w))

    finalBlack = frozenset(v for v in range(n) if black[v])
    return ForcingOutcome(finalBlack, tuple(forces), len(finalBlack) != n)


def isZeroForcingSet(graph: SimpleGraph, vertices: Iterable[int]) -> bool:
    return not closure(graph, vertices).stalled


def zseqFromForcingSet(graph: SimpleGraph, forcingSet: Iterable[int]) -> ZSequenceRecord:
    """
    Reads a Z-sequence off the chronological force list: forcers become the sequence and
    forced vertices the witnesses.

    :param graph: The graph.
    :type graph: SimpleGraph
    :param forcingSet: A zero forcing set.
    :type forcingSet: Iterable[int]
    :return: The record, with |S| = n - |b|.
    :rtype: ZSequenceRecord
    """
    initial = frozenset(forcingSet)
    outcome = closure(graph, initial)
    if outcome.stalled:
        raise PreconditionError(f"Not a zero forcing set: closure covers {len(outcome.finalBlack)} of {graph.n} vertices")
    sequence = tuple(v for v, _ in outcome.forces)
    witnesses = tuple(w for _, w in outcome.forces)
    return ZSequenceRecord(sequence, witnesses, initial)


def validateZseq(graph: SimpleGraph, sequence: Sequence[int], witnesses: Sequence[int]) -> bool:
    """
    Checks w_i ∈ N(v_i) minus the union of N[v_j] over j < i, index by index.

    :param graph: The graph.
    :type graph: SimpleGraph
    :param sequence: v_1..v_k.
    :type sequence: Sequence[int]
    :param witnesses: w_1..w_k.
    :type witnesses: Sequence[int]
    :return: True when every witness condition holds.
    :rtype: bool
    """
    if len(sequence) != len(witnesses):
        raise PreconditionError(f"Sequence has {len(sequence)} entries but {len(witnesses)} witnesses")

    dominated = set()
    for v, w in zip(sequence, witnesses):
        if w not in graph.adjacency[v] or w in dominated:
            return False
        dominated.update(graph.adjacency[v])
        dominated.add(v)
    return True


def forcingSetFromZseq(graph: SimpleGraph,
                       record: Union[ZSequenceRecord, Tuple[Sequence[int], Sequence[int]]]) -> frozenset:
    """
    The complement of a witness sequence, verified to be zero forcing.

    :param graph: The graph.
    :type graph: SimpleGraph
    :param record: A ZSequenceRecord or a (sequence, witnesses) pair.
    :return: V minus W.
    :rtype: frozenset
    """
    if isinstance(record, ZSequenceRecord):
        sequence, witnesses = record.sequence, record.witnesses
    else:
        sequence, witnesses = record
    if not validateZseq(graph, sequence, witnesses):
        raise PreconditionError("Witness condition violated")

    forcingSet = frozenset(range(graph.n)) - frozenset(witnesses)
    if not isZeroForcingSet(graph, forcingSet):
        raise PreconditionError("Complement of the witness sequence does not force the graph")
    return forcingSet


def _closureMask(nbrMasks: List[int], black: int) -> int:
    changed = True
    while changed:
        changed = False
        pending = black
        while pending:
            low = pending & -pending
            pending ^= low
            white = nbrMasks[low.bit_length() - 1] & ~black
            if white and not white & (white - 1):
                black |= white
                changed = True
    return black


def minimumForcingSet(graph: SimpleGraph, limit: int = 20) -> frozenset:
    """
    A minimum zero forcing set by subset enumeration in increasing size.

    :param graph: The graph.
    :type graph: SimpleGraph
    :param limit: Largest n accepted.
    :type limit: int
    :return: The first minimum set in lexicographic order.
    :rtype: frozenset
    """
    n = graph.n
    if n > limit:
        raise PreconditionError(f"Exhaustive zero forcing search limited to n <= {limit}, got n={n}")
    nbrMasks = graph.neighbourMasks()
    full = (1 << n) - 1
    for size in range(n + 1):
        for subset in combinations(range(n), size):
            mask = sum(1 << v for v in subset)
            if _closureMask(nbrMasks, mask) == full:
                return frozenset(subset)
    return frozenset(range(n))


def bruteForceZ(graph: SimpleGraph, limit: int = 20) -> int:
    return len(minimumForcingSet(graph, limit))


def bruteForceGrundy(graph: SimpleGraph, limit: int = 16) -> int:
    """
    Length of a longest Z-sequence by depth-first search, memoized on the dominated set.

    :param graph: The graph.
    :type graph: SimpleGraph
    :param limit: Largest n accepted.
    :type limit: int
    :return: The Z-Grundy domination number.
    :rtype: int
    """
    n = graph.n
    if n > limit:
        raise PreconditionError(f"Exhaustive Z-Grundy search limited to n <= {limit}, got n={n}")
    nbrMasks = graph.neighbourMasks()
    closedMasks = [mask | (1 << v) for v, mask in enumerate(nbrMasks)]
    memo: Dict[int, int] = {}

    def longest(dominated: int) -> int:
        if dominated in memo:
            return memo[dominated]
        best = 0
        for v in range(n):
            if nbrMasks[v] & ~dominated:
                best = max(best, 1 + longest(dominated | closedMasks[v]))
        memo[dominated] = best
        return best

    return longest(0)
