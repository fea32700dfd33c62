import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from src.zeroforcing.core.graphs import sampleSimple
from src.zeroforcing.core.greedy import degreeGreedy, smartDegreeGreedy
from src.zeroforcing.core.log import Log
from src.zeroforcing.core.models.experiment_config import ExperimentConfig
from src.zeroforcing.core.models.greedy_trace import GreedyTrace
from src.zeroforcing.core.models.sample_record import SampleRecord
from src.zeroforcing.core.utils import spawnSeeds

SampleOutcome = Tuple[SampleRecord, Optional[GreedyTrace]]


def runSample(config: ExperimentConfig, seed: int) -> SampleOutcome:
    """
    Generates one graph and runs the configured greedy on it. The seed alone determines the
    outcome, so any recorded sample can be replayed.

    :param config: The batch the sample belongs to.
    :type config: ExperimentConfig
    :param seed: Sample seed.
    :type seed: int
    :return: The record, and the trace when the batch keeps traces.
    :rtype: Tuple[SampleRecord, Optional[GreedyTrace]]
    """
    started = time.perf_counter()
    graphSeed, greedySeed = spawnSeeds(seed, 2)
    graph, attempts = sampleSimple(config.n, config.d, graphSeed, config.maxAttempts)
    if config.algorithm == "smart":
        result = smartDegreeGreedy(graph, greedySeed, config.policy, config.onStall, recordSeed=seed)
    else:
        result = degreeGreedy(graph, greedySeed, config.onStall, recordSeed=seed)

    record = SampleRecord(seed, config.n, config.d, config.algorithm, result.forcingSetSize,
                          result.status, attempts, time.perf_counter() - started)
    return record, result.trace if config.keepTraces else None


class SampleWorker:
    """
    Runs the samples of a batch on a thread pool.

    :param config: The batch.
    :type config: ExperimentConfig
    :param threads: Pool size.
    :type threads: int
    :param onSampleFinished: Called with each record as it completes.
    :type onSampleFinished: Optional[Callable[[SampleRecord], None]]
    """

    def __init__(self, config: ExperimentConfig, threads: int,
                 onSampleFinished: Optional[Callable[[SampleRecord], None]] = None):
        self.config = config
        self.threads = max(1, threads)
        self.onSampleFinished = onSampleFinished
        self.outcomes: Dict[int, SampleOutcome] = {}
        self.failures: List[int] = []

    def run(self, seeds: Optional[Sequence[int]] = None) -> None:
        seeds = list(self.config.seeds() if seeds is None else seeds)
        Log.info(f"Sampling started: {len(seeds)} samples of n={self.config.n}, d={self.config.d} "
                 f"on {self.threads} threads.")

        with ThreadPoolExecutor(max_workers=self.threads) as executor:
            futureToSeed = {executor.submit(runSample, self.config, seed): seed for seed in seeds}
            for future in as_completed(futureToSeed):
                seed = futureToSeed[future]
                try:
                    self.outcomes[seed] = future.result()
                except Exception as e:
                    Log.info(f"Error sampling seed {seed}: {e}")
                    self.failures.append(seed)
                    continue
                if self.onSampleFinished:
                    self.onSampleFinished(self.outcomes[seed][0])

        Log.info(f"Sampling finished: {len(self.outcomes)} done, {len(self.failures)} failed.")
