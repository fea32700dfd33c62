from dataclasses import dataclass
from typing import FrozenSet, Tuple


@dataclass(frozen=True)
class ForcingOutcome:
    """
    Result of running the colour-change rule to exhaustion.

    :param finalBlack: The closure of the initial set.
    :type finalBlack: FrozenSet[int]
    :param forces: Chronological (forcer, forced) pairs.
    :type forces: Tuple[Tuple[int, int], ...]
    :param stalled: True when some vertex stays white.
    :type stalled: bool
    """
    finalBlack: FrozenSet[int]
    forces: Tuple[Tuple[int, int], ...]
    stalled: bool
