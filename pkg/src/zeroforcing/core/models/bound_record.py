from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class BoundRecord:
    """
    Asymptotic bounds on Z/n for one degree.

    :param d: Degree.
    :type d: int
    :param lowerBound: 1 - 2a from the bipartite-hole threshold.
    :type lowerBound: float
    :param upperBound: 1 - x_end of the degree-greedy phase system.
    :type upperBound: float
    :param smartUpperBound: Final T1 mass of the smart system, d = 3 only.
    :type smartUpperBound: Optional[float]
    :param spectralUpper: Limit of the spectral bound with λ = 2√d.
    :type spectralUpper: float
    :param earlierLower: 1 - 40 ln d / d.
    :type earlierLower: float
    :param earlierUpper: 1 - ln d / (4d).
    :type earlierUpper: float
    """
    d: int
    lowerBound: float
    upperBound: float
    smartUpperBound: Optional[float]
    spectralUpper: float
    earlierLower: float
    earlierUpper: float

    @staticmethod
    def header():
        return ["d", "lower", "upper", "smart_upper", "spectral_upper", "earlier_lower", "earlier_upper"]

    def row(self) -> list:
        return [self.d, self.lowerBound, self.upperBound, self.smartUpperBound, self.spectralUpper,
                self.earlierLower, self.earlierUpper]
