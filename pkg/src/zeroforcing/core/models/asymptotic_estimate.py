from dataclasses import dataclass


@dataclass(frozen=True)
class AsymptoticEstimate:
    """
    f(K ln d / d, b*, d) rescaled by d / ln² d, next to its limit K(2 - K) and the limit with
    its first correction in 1 / ln d.
    """
    K: float
    d: float
    estimate: float
    leading: float
    corrected: float
