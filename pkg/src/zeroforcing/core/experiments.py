import os
from typing import Dict, Optional, Union

import numpy as np

from src.zeroforcing.core.de_solver import runPlain, runSmartD3
from src.zeroforcing.core.errors import ExperimentError, PreconditionError
from src.zeroforcing.core.greedy import traceToScaledSeries
from src.zeroforcing.core.log import Log
from src.zeroforcing.core.models.experiment_config import ExperimentConfig
from src.zeroforcing.core.models.experiment_report import ExperimentReport
from src.zeroforcing.core.models.greedy_trace import GreedyTrace
from src.zeroforcing.core.models.phase_portrait import PhasePortrait
from src.zeroforcing.core.models.solver_config import SolverConfig
from src.zeroforcing.core.utils import appendJsonLines, writeJson
from src.zeroforcing.threads.sample_worker import SampleWorker, runSample

MAX_FAILURE_RATE = 0.5

Series = Union[GreedyTrace, PhasePortrait, np.ndarray]


def predictionPortrait(d: int, algorithm: str, config: Optional[SolverConfig] = None) -> Optional[PhasePortrait]:
    """The phase system matching a batch, or None where no system applies."""
    if algorithm == "smart":
        return runSmartD3(config) if d == 3 else None
    return runPlain(d, config) if d >= 3 else None


def _scaledSeries(source: Series) -> np.ndarray:
    # Columns x, T_0/n..T_{d-1}/n, |U|/n; smart cells are merged over the two sets
    if isinstance(source, GreedyTrace):
        return traceToScaledSeries(source)
    if isinstance(source, PhasePortrait):
        xs, ys = source.grid()
        if source.algorithm == "smart":
            ys = ys.reshape(len(ys), 3, 2).sum(axis=2)
        return np.column_stack([xs, ys, 1.0 - ys.sum(axis=1)])
    return np.asarray(source, dtype=float)


def compareTrajectory(empirical: Series, portrait: PhasePortrait, xMax: Optional[float] = None) -> Dict[str, float]:
    """
    Sup-distance between an empirical trajectory and the fluid limit, per type.

    :param empirical: A greedy trace, another portrait, or a scaled series.
    :type empirical: Union[GreedyTrace, PhasePortrait, np.ndarray]
    :param portrait: The fluid limit.
    :type portrait: PhasePortrait
    :param xMax: Only compare up to this scaled time, e.g. the end of phase 1.
    :type xMax: Optional[float]
    :return: max |T_i(t)/n - y_i(t/n)| keyed "y0".."y{d-1}", plus "u".
    :rtype: Dict[str, float]
    """
    observed = _scaledSeries(empirical)
    predicted = _scaledSeries(portrait)
    d = predicted.shape[1] - 2
    if observed.shape[1] != predicted.shape[1]:
        raise PreconditionError(f"Trajectory has {observed.shape[1] - 2} types, the fluid limit has {d}")

    limit = predicted[-1, 0] if xMax is None else min(xMax, predicted[-1, 0])
    observed = observed[observed[:, 0] <= limit]
    if len(observed) == 0:
        raise PreconditionError("No shared points between the trajectories")

    labels = [f"y{i}" for i in range(d)] + ["u"]
    distances = {}
    for column, label in enumerate(labels, start=1):
        expected = np.interp(observed[:, 0], predicted[:, 0], predicted[:, column])
        distances[label] = float(np.max(np.abs(observed[:, column] - expected)))
    return distances


def mcRun(config: ExperimentConfig, threads: int = 1, solverConfig: Optional[SolverConfig] = None) -> ExperimentReport:
    """
    Samples graphs, runs the greedy on each and aggregates |B|/n. The records depend only on
    the base seed, never on the thread count.

    :param config: The batch.
    :type config: ExperimentConfig
    :param threads: Pool size when the batch does not fix one.
    :type threads: int
    :param solverConfig: Solver settings for the prediction.
    :type solverConfig: Optional[SolverConfig]
    :return: The report.
    :rtype: ExperimentReport
    """
    worker = SampleWorker(config, config.threads or threads)
    worker.run()
    if len(worker.failures) > MAX_FAILURE_RATE * config.samples:
        raise ExperimentError(f"{len(worker.failures)} of {config.samples} samples failed")

    report = ExperimentReport(config, [record for record, _ in worker.outcomes.values()], worker.failures)
    portrait = predictionPortrait(config.d, config.algorithm, solverConfig)
    if portrait is not None:
        report.prediction = portrait.upperBound
        if config.keepTraces:
            report.distances = _distanceStatistics(worker.outcomes, portrait)

    if config.outputDir:
        writeReport(config.outputDir, report)
    Log.info(f"Monte Carlo d={config.d}, n={config.n}: mean |B|/n = {report.meanFraction}")
    return report


def _distanceStatistics(outcomes: dict, portrait: PhasePortrait) -> Dict[str, Dict[str, float]]:
    perSample = [compareTrajectory(trace, portrait) for _, trace in outcomes.values() if trace is not None]
    if not perSample:
        return {}
    return {label: {"mean": float(np.mean([s[label] for s in perSample])),
                    "max": float(np.max([s[label] for s in perSample]))}
            for label in perSample[0]}


def writeReport(directory: str, report: ExperimentReport) -> None:
    """
    Writes samples.jsonl, one record per line in seed order, and report.json.

    :param directory: Target directory.
    :type directory: str
    :param report: The report.
    :type report: ExperimentReport
    """
    os.makedirs(directory, exist_ok=True)
    samplesPath = os.path.join(directory, "samples.jsonl")
    if os.path.exists(samplesPath):
        os.remove(samplesPath)
    appendJsonLines(samplesPath, (record.toJson() for record in report.records))
    writeJson(os.path.join(directory, "report.json"), report.summary())
