from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from src.zeroforcing.core.constants import countedStatuses
from src.zeroforcing.core.models.experiment_config import ExperimentConfig
from src.zeroforcing.core.models.sample_record import SampleRecord


@dataclass
class ExperimentReport:
    """
    Outcome of a Monte Carlo batch. The aggregates are recomputed from the per-sample records,
    which are kept sorted by seed.

    :param config: The batch.
    :type config: ExperimentConfig
    :param records: Per-sample records.
    :type records: List[SampleRecord]
    :param failures: Seeds whose sample could not be generated or run.
    :type failures: List[int]
    :param prediction: Asymptotic Z/n bound of the matching phase system, if any.
    :type prediction: Optional[float]
    :param distances: Per-cell statistics of the trajectory sup-distance.
    :type distances: Dict[str, Dict[str, float]]
    """
    config: ExperimentConfig
    records: List[SampleRecord] = field(default_factory=list)
    failures: List[int] = field(default_factory=list)
    prediction: Optional[float] = None
    distances: Dict[str, Dict[str, float]] = field(default_factory=dict)

    def __post_init__(self):
        self.records = sorted(self.records, key=lambda r: r.seed)
        self.failures = sorted(self.failures)

    def counted(self) -> List[SampleRecord]:
        return [r for r in self.records if r.status in countedStatuses]

    @property
    def meanFraction(self) -> Optional[float]:
        counted = self.counted()
        return float(np.mean([r.fraction for r in counted])) if counted else None

    @property
    def stdFraction(self) -> Optional[float]:
        counted = self.counted()
        return float(np.std([r.fraction for r in counted], ddof=1)) if len(counted) > 1 else None

    @property
    def meanSize(self) -> Optional[float]:
        counted = self.counted()
        return float(np.mean([r.forcingSetSize for r in counted])) if counted else None

    def summary(self) -> dict:
        return {
            "d": self.config.d,
            "n": self.config.n,
            "samples": self.config.samples,
            "algorithm": self.config.algorithm,
            "base_seed": self.config.baseSeed,
            "completed": len(self.counted()),
            "stalled": sum(1 for r in self.records if r.status == "component_stalled"),
            "failures": self.failures,
            "mean_fraction": self.meanFraction,
            "std_fraction": self.stdFraction,
            "mean_size": self.meanSize,
            "prediction": self.prediction,
            "sup_distance": self.distances,
        }
