from dataclasses import dataclass, field
from typing import List, Optional, Tuple


@dataclass(frozen=True)
class GreedyStep:
    """
    One row of a greedy trace, recorded after the step completes.

    :param t: Step counter; the initial vertex is step 0.
    :type t: int
    :param stepType: Number of undominated neighbours of the processed vertex.
    :type stepType: int
    :param source: Set the processed vertex was taken from ("T", "T1" or "T2").
    :type source: str
    :param typeCounts: T_0..T_{d-1} over all dominated vertices.
    :type typeCounts: Tuple[int, ...]
    :param undominated: |U|.
    :type undominated: int
    :param vertex: The processed vertex.
    :type vertex: int
    :param witness: Its witness.
    :type witness: int
    :param witnessScore: |(N(w) minus N(v)) ∩ U| for the chosen witness.
    :type witnessScore: int
    :param bestWitnessScore: Minimum of the same quantity over all candidates.
    :type bestWitnessScore: int
    :param inserted: Vertex inserted by the smart rule at this step, if any.
    :type inserted: Optional[int]
    :param firstSetCounts: T_{0,1}..T_{d-1,1} for the smart algorithm.
    :type firstSetCounts: Tuple[int, ...]
    """
    t: int
    stepType: int
    source: str
    typeCounts: Tuple[int, ...]
    undominated: int
    vertex: int
    witness: int
    witnessScore: int = 0
    bestWitnessScore: int = 0
    inserted: Optional[int] = None
    firstSetCounts: Tuple[int, ...] = ()


@dataclass
class GreedyTrace:
    n: int
    d: int
    algorithm: str
    steps: List[GreedyStep] = field(default_factory=list)

    def header(self) -> List[str]:
        return ["t", "type", "source"] + [f"T{i}" for i in range(self.d)] + ["U"]

    def rows(self) -> List[list]:
        return [[s.t, s.stepType, s.source, *s.typeCounts, s.undominated] for s in self.steps]
