from typing import List, Optional, Tuple

import numpy as np

from src.zeroforcing.core.constants import setPolicies, stallPolicies
from src.zeroforcing.core.errors import PreconditionError
from src.zeroforcing.core.log import Log
from src.zeroforcing.core.models.graph import SimpleGraph
from src.zeroforcing.core.models.greedy_result import GreedyResult
from src.zeroforcing.core.models.greedy_trace import GreedyStep, GreedyTrace
from src.zeroforcing.core.models.zsequence_record import ZSequenceRecord
from src.zeroforcing.core.utils import Seed, makeRng, writeCsv, writeJson

UNDOMINATED = 0
FIRST = 1
SECOND = 2


class _RandomIndex:
    """Uniform indices in [0, k) drawn from blocks of generator output."""

    def __init__(self, rng: np.random.Generator, blockSize: int = 4096):
        self.rng = rng
        self.blockSize = blockSize
        self.block: List[float] = []
        self.position = 0

    def __call__(self, k: int) -> int:
        if self.position == len(self.block):
            self.block = self.rng.random(self.blockSize).tolist()
            self.position = 0
        u = self.block[self.position]
        self.position += 1
        return int(u * k)


class _GreedyState:
    """
    Dominated vertices live in per-(set, type) buckets with O(1) insert, removal and uniform
    choice; the type of a dominated vertex is its number of undominated neighbours.
    """

    def __init__(self, graph: SimpleGraph, sets: int):
        self.graph = graph
        self.n = graph.n
        self.maxType = graph.maxDegree()
        self.status = [UNDOMINATED] * self.n
        self.uCount = [len(nbrs) for nbrs in graph.adjacency]
        self.buckets = [[[] for _ in range(self.maxType + 1)] for _ in range(sets + 1)]
        self.where = [-1] * self.n
        self.undominated = self.n

    def _add(self, v: int) -> None:
        bucket = self.buckets[self.status[v]][self.uCount[v]]
        self.where[v] = len(bucket)
        bucket.append(v)

    def _remove(self, v: int) -> None:
        bucket = self.buckets[self.status[v]][self.uCount[v]]
        slot = self.where[v]
        last = bucket.pop()
        if last != v:
            bucket[slot] = last
            self.where[last] = slot

    def dominate(self, y: int, k: int) -> None:
        for z in self.graph.adjacency[y]:
            if self.status[z] != UNDOMINATED:
                self._remove(z)
                self.uCount[z] -= 1
                self._add(z)
            else:
                self.uCount[z] -= 1
        self.status[y] = k
        self._add(y)
        self.undominated -= 1

    def move(self, v: int, k: int) -> None:
        self._remove(v)
        self.status[v] = k
        self._add(v)

    def minPositiveType(self, sets: Tuple[int, ...]) -> Optional[int]:
        for r in range(1, self.maxType + 1):
            for k in sets:
                if self.buckets[k][r]:
                    return r
        return None

    def undominatedNeighbours(self, v: int) -> List[int]:
        return [w for w in self.graph.adjacency[v] if self.status[w] == UNDOMINATED]

    def typeCounts(self, d: int, sets: Tuple[int, ...]) -> Tuple[int, ...]:
        return tuple(sum(len(self.buckets[k][r]) for k in sets) for r in range(d))

    def pickStart(self, choose: _RandomIndex) -> int:
        # Uniform among undominated vertices of minimum degree
        candidates = [v for v in range(self.n) if self.status[v] == UNDOMINATED]
        low = min(len(self.graph.adjacency[v]) for v in candidates)
        candidates = [v for v in candidates if len(self.graph.adjacency[v]) == low]
        return candidates[choose(len(candidates))]

    def audit(self) -> None:
        """
        Recounts every type from scratch and compares with the incremental buckets.
        """
        for v in range(self.n):
            expected = sum(1 for w in self.graph.adjacency[v] if self.status[w] == UNDOMINATED)
            if expected != self.uCount[v]:
                raise RuntimeError(f"Vertex {v}: stored type {self.uCount[v]}, recount {expected}")
            if self.status[v] != UNDOMINATED:
                bucket = self.buckets[self.status[v]][self.uCount[v]]
                if bucket[self.where[v]] != v:
                    raise RuntimeError(f"Vertex {v} missing from bucket ({self.status[v]}, {self.uCount[v]})")
        stored = sum(len(b) for sets in self.buckets[1:] for b in sets)
        if stored != self.n - self.undominated:
            raise RuntimeError(f"Buckets hold {stored} vertices, {self.n - self.undominated} are dominated")
        if self.buckets[UNDOMINATED] and any(self.buckets[UNDOMINATED]):
            raise RuntimeError("Undominated vertex stored in a type bucket")


def _checkOptions(graph: SimpleGraph, onStall: str) -> None:
    if onStall not in stallPolicies:
        raise PreconditionError(f"onStall must be one of {stallPolicies}, got {onStall!r}")
    if graph.n == 0 or min(len(nbrs) for nbrs in graph.adjacency) < 1:
        raise PreconditionError("Greedy runs need a graph without isolated vertices")


def degreeGreedy(graph: SimpleGraph, seed: Seed, onStall: str = "fail", audit: bool = False,
                 recordSeed: Optional[int] = None) -> GreedyResult:
    """
    Degree greedy: repeatedly process a dominated vertex of minimum positive type, dominating
    its undominated neighbours. The witness of each processed vertex is a uniform choice
    among those neighbours.

    :param graph: A simple graph, normally d-regular.
    :type graph: SimpleGraph
    :param seed: Seed for tie-breaking and witness choice.
    :type seed: Seed
    :param onStall: "fail" reports component_stalled; "restart" continues in an untouched component.
    :type onStall: str
    :param audit: Recount all types after every step.
    :type audit: bool
    :param recordSeed: Integer seed stored in the output record.
    :type recordSeed: Optional[int]
    :return: The Z-sequence record and trace.
    :rtype: GreedyResult
    """
    _checkOptions(graph, onStall)
    d = graph.maxDegree()
    choose = _RandomIndex(makeRng(seed))
    state = _GreedyState(graph, sets=1)
    trace = GreedyTrace(graph.n, d, "plain")
    sequence: List[int] = []
    witnesses: List[int] = []
    status = "complete"

    def process(v: int, stepType: int) -> None:
        candidates = state.undominatedNeighbours(v)
        w = candidates[choose(len(candidates))]
        for y in candidates:
            state.dominate(y, FIRST)
        sequence.append(v)
        witnesses.append(w)
        trace.steps.append(GreedyStep(len(sequence) - 1, stepType, "T", state.typeCounts(d, (FIRST,)),
                                      state.undominated, v, w))
        if audit:
            state.audit()

    start = state.pickStart(choose)
    state.dominate(start, FIRST)
    process(start, state.uCount[start])

    while state.undominated:
        r = state.minPositiveType((FIRST,))
        if r is None:
            if onStall == "fail":
                status = "component_stalled"
                break
            status = "multi_component"
            start = state.pickStart(choose)
            state.dominate(start, FIRST)
            process(start, state.uCount[start])
            continue
        bucket = state.buckets[FIRST][r]
        process(bucket[choose(len(bucket))], r)

    forcingSet = frozenset(range(graph.n)) - frozenset(witnesses)
    Log.verbose(f"Degree greedy on n={graph.n}: {len(sequence)} steps, |B|={len(forcingSet)}, {status}")
    record = ZSequenceRecord(tuple(sequence), tuple(witnesses), forcingSet, status, recordSeed)
    return GreedyResult(record, trace)


def smartDegreeGreedy(graph: SimpleGraph, seed: Seed, policy: str = "uniform", onStall: str = "fail",
                      audit: bool = False, recordSeed: Optional[int] = None) -> GreedyResult:
    """
    Smart degree greedy. Dominated vertices are split into T1 (the future forcing set) and
    T2 (witnesses). When a T1 vertex v of type at least 2 has an undominated neighbour u
    whose neighbours all lie in T1, u joins T1 and v moves to T2 as the witness of u. The
    witness of v is then a neighbour w minimizing |(N(w) minus N(v)) ∩ U|; it goes to T2 and
    the remaining undominated neighbours go to T1.

    Inserted vertices are placed at the front of the sequence, most recent first, which keeps
    every witness condition valid.

    :param graph: A simple graph, normally d-regular.
    :type graph: SimpleGraph
    :param seed: Seed for tie-breaking.
    :type seed: Seed
    :param policy: "uniform" over all minimum-type candidates, "t1_first" or "t2_first".
    :type policy: str
    :param onStall: "fail" or "restart".
    :type onStall: str
    :param audit: Recount all types after every step.
    :type audit: bool
    :param recordSeed: Integer seed stored in the output record.
    :type recordSeed: Optional[int]
    :return: The Z-sequence record and trace; the forcing set equals the final T1.
    :rtype: GreedyResult
    """
    _checkOptions(graph, onStall)
    if policy not in setPolicies:
        raise PreconditionError(f"policy must be one of {setPolicies}, got {policy!r}")
    d = graph.maxDegree()
    choose = _RandomIndex(makeRng(seed))
    state = _GreedyState(graph, sets=2)
    trace = GreedyTrace(graph.n, d, "smart")
    processed: List[int] = []
    witnesses: List[int] = []
    insertions: List[Tuple[int, int]] = []
    status = "complete"
    adjacency = graph.adjacency

    def pick(r: int) -> int:
        first, second = state.buckets[FIRST][r], state.buckets[SECOND][r]
        if policy == "t1_first" and first:
            return first[choose(len(first))]
        if policy == "t2_first" and second:
            return second[choose(len(second))]
        if policy != "uniform":
            bucket = first or second
            return bucket[choose(len(bucket))]
        index = choose(len(first) + len(second))
        return first[index] if index < len(first) else second[index - len(first)]

    def process(v: int, r: int) -> None:
        source = "T1" if state.status[v] == FIRST else "T2"
        inserted = None
        if state.status[v] == FIRST and r >= 2:
            for u in adjacency[v]:
                if state.status[u] == UNDOMINATED and all(state.status[x] == FIRST for x in adjacency[u]):
                    inserted = u
                    break
            if inserted is not None:
                state.move(v, SECOND)
                state.dominate(inserted, FIRST)
                insertions.append((inserted, v))

        candidates = state.undominatedNeighbours(v)
        around = set(adjacency[v])
        scores = [sum(1 for x in adjacency[w] if state.status[x] == UNDOMINATED and x not in around)
                  for w in candidates]
        best = min(scores)
        tied = [w for w, score in zip(candidates, scores) if score == best]
        w = tied[choose(len(tied))]
        chosenScore = scores[candidates.index(w)]

        state.dominate(w, SECOND)
        for y in candidates:
            if y != w:
                state.dominate(y, FIRST)
        processed.append(v)
        witnesses.append(w)
        trace.steps.append(GreedyStep(len(processed) - 1, r, source, state.typeCounts(d, (FIRST, SECOND)),
                                      state.undominated, v, w, chosenScore, best, inserted,
                                      state.typeCounts(d, (FIRST,))))
        if audit:
            state.audit()

    state.dominate(state.pickStart(choose), FIRST)
    while state.undominated:
        r = state.minPositiveType((FIRST, SECOND))
        if r is None:
            if onStall == "fail":
                status = "component_stalled"
                break
            status = "multi_component"
            state.dominate(state.pickStart(choose), FIRST)
            continue
        process(pick(r), r)

    sequence = [u for u, _ in reversed(insertions)] + processed
    witnessList = [v for _, v in reversed(insertions)] + witnesses
    forcingSet = frozenset(range(graph.n)) - frozenset(witnessList)
    Log.verbose(f"Smart greedy on n={graph.n}: {len(processed)} steps, {len(insertions)} insertions, "
                f"|B|={len(forcingSet)}, {status}")
    record = ZSequenceRecord(tuple(sequence), tuple(witnessList), forcingSet, status, recordSeed)
    return GreedyResult(record, trace)


def traceToScaledSeries(trace: GreedyTrace, n: Optional[int] = None) -> np.ndarray:
    """
    Rescales a trace for comparison with the fluid limit.

    :param trace: The trace.
    :type trace: GreedyTrace
    :param n: Scale; defaults to the trace's vertex count.
    :type n: Optional[int]
    :return: Array with columns x = t/n, T_0/n..T_{d-1}/n, |U|/n.
    :rtype: np.ndarray
    """
    scale = float(n or trace.n)
    table = np.array([[s.t, *s.typeCounts, s.undominated] for s in trace.steps], dtype=np.float64)
    return table.reshape(-1, trace.d + 2) / scale


def writeTraceCsv(path: str, trace: GreedyTrace) -> None:
    writeCsv(path, trace.header(), trace.rows())


def writeZSequenceJson(path: str, record: ZSequenceRecord) -> None:
    writeJson(path, record.toJson())
