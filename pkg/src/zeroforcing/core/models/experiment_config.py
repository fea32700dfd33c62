from dataclasses import dataclass
from typing import Optional

from src.zeroforcing.core.constants import greedyAlgorithms, setPolicies, stallPolicies
from src.zeroforcing.core.errors import PreconditionError


@dataclass(frozen=True)
class ExperimentConfig:
    """
    A Monte Carlo batch: independent samples of a random d-regular graph, each run through
    one greedy algorithm.

    :param d: Degree.
    :type d: int
    :param n: Vertex count.
    :type n: int
    :param samples: Number of samples.
    :type samples: int
    :param algorithm: "plain" or "smart".
    :type algorithm: str
    :param baseSeed: Sample i uses seed baseSeed + i.
    :type baseSeed: int
    :param threads: Worker threads; 0 defers to the configured default.
    :type threads: int
    :param outputDir: Where sample records and the report are written, if anywhere.
    :type outputDir: Optional[str]
    :param keepTraces: Keep greedy traces and compare them against the phase system.
    :type keepTraces: bool
    :param onStall: Greedy behaviour on a stalled component, "fail" or "restart".
    :type onStall: str
    :param policy: Set preference of the smart greedy.
    :type policy: str
    :param maxAttempts: Pairings per sample before generation gives up.
    :type maxAttempts: Optional[int]
    """
    d: int
    n: int
    samples: int
    algorithm: str = "plain"
    baseSeed: int = 0
    threads: int = 0
    outputDir: Optional[str] = None
    keepTraces: bool = False
    onStall: str = "fail"
    policy: str = "uniform"
    maxAttempts: Optional[int] = None

    def __post_init__(self):
        if self.samples < 1:
            raise PreconditionError(f"samples must be at least 1, got {self.samples}")
        if (self.d * self.n) % 2:
            raise PreconditionError(f"dn odd: d={self.d}, n={self.n}")
        if self.algorithm not in greedyAlgorithms:
            raise PreconditionError(f"Unknown algorithm {self.algorithm!r}, expected one of {greedyAlgorithms}")
        if self.onStall not in stallPolicies:
            raise PreconditionError(f"onStall must be one of {stallPolicies}, got {self.onStall!r}")
        if self.policy not in setPolicies:
            raise PreconditionError(f"policy must be one of {setPolicies}, got {self.policy!r}")

    def seeds(self):
        return [self.baseSeed + i for i in range(self.samples)]
