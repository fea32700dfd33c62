from dataclasses import dataclass, field
from typing import FrozenSet, Optional, Tuple


@dataclass(frozen=True)
class ZSequenceRecord:
    """
    A Z-sequence with its witnesses and the zero forcing set they determine.

    :param sequence: v_1..v_k.
    :type sequence: Tuple[int, ...]
    :param witnesses: w_1..w_k, with w_i a neighbour of v_i outside every earlier closed neighbourhood.
    :type witnesses: Tuple[int, ...]
    :param forcingSet: V minus the witnesses.
    :type forcingSet: FrozenSet[int]
    :param status: "complete", "component_stalled" or "multi_component" for greedy output.
    :type status: str
    :param seed: Seed of the run that produced the record, when there was one.
    :type seed: Optional[int]
    """
    sequence: Tuple[int, ...]
    witnesses: Tuple[int, ...]
    forcingSet: FrozenSet[int]
    status: str = "complete"
    seed: Optional[int] = field(default=None)

    def toJson(self) -> dict:
        return {
            "sequence": list(self.sequence),
            "witnesses": list(self.witnesses),
            "forcing_set": sorted(self.forcingSet),
            "status": self.status,
            "seed": self.seed,
        }
