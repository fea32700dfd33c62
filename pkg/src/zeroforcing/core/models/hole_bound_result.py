from dataclasses import dataclass


@dataclass(frozen=True)
class HoleBoundResult:
    """
    Threshold of the first-moment bound for bipartite holes in random d-regular graphs.

    :param d: Degree.
    :type d: int
    :param aThreshold: Largest side fraction a with f(a, b*(a), d) = 0.
    :type aThreshold: float
    :param bAtThreshold: b*(a) at the threshold.
    :type bAtThreshold: float
    :param fAtThreshold: The exponent at the threshold, zero up to the root tolerance.
    :type fAtThreshold: float
    :param rootTol: Tolerance of the root search in a.
    :type rootTol: float
    """
    d: int
    aThreshold: float
    bAtThreshold: float
    fAtThreshold: float
    rootTol: float

    @property
    def lowerBound(self) -> float:
        return 1.0 - 2.0 * self.aThreshold
