from dataclasses import dataclass

from src.zeroforcing.core.models.greedy_trace import GreedyTrace
from src.zeroforcing.core.models.zsequence_record import ZSequenceRecord


@dataclass
class GreedyResult:
    record: ZSequenceRecord
    trace: GreedyTrace

    @property
    def status(self) -> str:
        return self.record.status

    @property
    def forcingSetSize(self) -> int:
        return len(self.record.forcingSet)
