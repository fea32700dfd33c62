import json

import numpy as np
import pytest

from src.zeroforcing.core.de_solver import runPlain
from src.zeroforcing.core.errors import ExperimentError, PreconditionError
from src.zeroforcing.core.experiments import compareTrajectory, mcRun, predictionPortrait, runSample, writeReport
from src.zeroforcing.core.graphs import cycleCount2Regular, sampleSimple
from src.zeroforcing.core.greedy import degreeGreedy
from src.zeroforcing.core.models.experiment_config import ExperimentConfig
from src.zeroforcing.core.models.experiment_report import ExperimentReport
from src.zeroforcing.core.models.sample_record import SampleRecord
from src.zeroforcing.threads.sample_worker import SampleWorker


@pytest.fixture(scope="module")
def cubicPortrait():
    return runPlain(3)


def outcomeKey(record: SampleRecord):
    return record.seed, record.forcingSetSize, record.status, record.attempts


def testConfigValidation():
    with pytest.raises(PreconditionError):
        ExperimentConfig(d=3, n=11, samples=1)
    with pytest.raises(PreconditionError):
        ExperimentConfig(d=3, n=10, samples=0)
    with pytest.raises(PreconditionError):
        ExperimentConfig(d=3, n=10, samples=1, algorithm="random")
    with pytest.raises(PreconditionError):
        ExperimentConfig(d=3, n=10, samples=1, onStall="ignore")
    assert ExperimentConfig(d=3, n=10, samples=3, baseSeed=7).seeds() == [7, 8, 9]


def testSampleReplays():
    config = ExperimentConfig(d=3, n=300, samples=1, algorithm="smart")
    first, trace = runSample(config, 12)
    second, _ = runSample(config, 12)
    assert trace is None
    assert outcomeKey(first) == outcomeKey(second)
    assert first.status == "complete"


def testRecordsDoNotDependOnThreadCount():
    config = ExperimentConfig(d=3, n=300, samples=8, baseSeed=40)
    single = mcRun(config, threads=1)
    pooled = mcRun(config, threads=4)
    assert [outcomeKey(r) for r in single.records] == [outcomeKey(r) for r in pooled.records]
    assert single.meanFraction == pooled.meanFraction
    for record in single.records:
        assert outcomeKey(runSample(config, record.seed)[0]) == outcomeKey(record)


def testReportAggregates():
    config = ExperimentConfig(d=3, n=10, samples=3)
    records = [SampleRecord(2, 10, 3, "plain", 3, "complete", 1, 0.0),
               SampleRecord(0, 10, 3, "plain", 2, "complete", 1, 0.0),
               SampleRecord(1, 10, 3, "plain", 9, "component_stalled", 1, 0.0)]
    report = ExperimentReport(config, records, [5])
    assert [r.seed for r in report.records] == [0, 1, 2]
    assert report.meanFraction == pytest.approx(0.25)
    assert report.stdFraction == pytest.approx(np.std([0.2, 0.3], ddof=1))
    assert report.meanSize == pytest.approx(2.5)
    summary = report.summary()
    assert summary["completed"] == 2 and summary["stalled"] == 1
    assert summary["failures"] == [5]


def testWriteReport(tmp_path):
    config = ExperimentConfig(d=3, n=100, samples=4, baseSeed=3, outputDir=str(tmp_path))
    report = mcRun(config)
    writeReport(str(tmp_path), report)

    lines = (tmp_path / "samples.jsonl").read_text().splitlines()
    assert [json.loads(line)["seed"] for line in lines] == [3, 4, 5, 6]
    summary = json.loads((tmp_path / "report.json").read_text())
    assert summary["samples"] == 4
    assert summary["prediction"] == pytest.approx(0.17072, abs=1e-4)
    assert summary["mean_fraction"] == pytest.approx(report.meanFraction)


def testFailedGenerationAbortsBatch():
    # A simple 5-regular graph on 6 vertices is K6, which a single pairing almost never gives
    config = ExperimentConfig(d=5, n=6, samples=4, maxAttempts=1)
    worker = SampleWorker(config, threads=2)
    worker.run()
    assert worker.failures and len(worker.failures) + len(worker.outcomes) == 4
    with pytest.raises(ExperimentError):
        mcRun(config)


def testWorkerCallback():
    finished = []
    config = ExperimentConfig(d=3, n=50, samples=5)
    worker = SampleWorker(config, threads=3, onSampleFinished=finished.append)
    worker.run()
    assert sorted(record.seed for record in finished) == [0, 1, 2, 3, 4]
    assert not worker.failures


def testTwoRegularForcingSetIsTwicePerCycle():
    for seed in range(5):
        graph, _ = sampleSimple(500, 2, seed)
        result = degreeGreedy(graph, seed, onStall="restart")
        assert result.forcingSetSize == 2 * cycleCount2Regular(graph)


def testTwoRegularBatchNeedsRestart():
    config = ExperimentConfig(d=2, n=400, samples=6, onStall="restart")
    report = mcRun(config, threads=2)
    assert report.prediction is None
    assert len(report.counted()) == 6
    assert predictionPortrait(2, "plain") is None
    assert predictionPortrait(4, "smart") is None


def testCompareTrajectoryAgainstItself(cubicPortrait):
    distances = compareTrajectory(cubicPortrait, cubicPortrait)
    assert set(distances) == {"y0", "y1", "y2", "u"}
    assert max(distances.values()) < 1e-12


def testCompareTrajectoryRejectsOtherDegree(cubicPortrait):
    graph, _ = sampleSimple(100, 4, 0)
    trace = degreeGreedy(graph, 0).trace
    with pytest.raises(PreconditionError):
        compareTrajectory(trace, cubicPortrait)


def testTraceFollowsFirstPhase(cubicPortrait):
    graph, _ = sampleSimple(10 ** 4, 3, 21)
    trace = degreeGreedy(graph, 22).trace
    distances = compareTrajectory(trace, cubicPortrait, xMax=cubicPortrait.boundaries[0])
    assert max(distances.values()) < 0.05


def testKeptTracesAreCompared():
    config = ExperimentConfig(d=3, n=2000, samples=3, keepTraces=True)
    report = mcRun(config, threads=2)
    assert set(report.distances) == {"y0", "y1", "y2", "u"}
    assert all(stats["mean"] <= stats["max"] for stats in report.distances.values())


@pytest.mark.slow
@pytest.mark.parametrize("d", [3, 4])
def testTraceStaysNearFluidLimit(d):
    portrait = runPlain(d)
    graph, _ = sampleSimple(2 * 10 ** 5, d, 99)
    distances = compareTrajectory(degreeGreedy(graph, 100).trace, portrait)
    assert max(distances.values()) < 0.01


@pytest.mark.slow
def testCubicMonteCarloMatchesPrediction():
    report = mcRun(ExperimentConfig(d=3, n=10 ** 4, samples=20, baseSeed=1000), threads=4)
    assert report.meanFraction == pytest.approx(report.prediction, abs=0.005)


@pytest.mark.slow
def testTwoRegularMonteCarlo():
    n = 10 ** 4
    report = mcRun(ExperimentConfig(d=2, n=n, samples=200, onStall="restart"), threads=4)
    assert 0.8 * np.log(n) <= report.meanSize <= 1.2 * np.log(n)


@pytest.mark.slow
def testQuarticMonteCarloMatchesPrediction():
    report = mcRun(ExperimentConfig(d=4, n=2 * 10 ** 5, samples=4, baseSeed=4000), threads=4)
    assert report.failures == []
    assert report.meanFraction == pytest.approx(runPlain(4).upperBound, abs=0.005)


@pytest.mark.slow
def testSmartMonteCarloNotWorseThanPlain():
    # Same seeds, so both algorithms see the same graphs
    plain = mcRun(ExperimentConfig(d=3, n=2 * 10 ** 5, samples=10, baseSeed=3000), threads=4)
    smart = mcRun(ExperimentConfig(d=3, n=2 * 10 ** 5, samples=10, baseSeed=3000, algorithm="smart"), threads=4)
    assert 0.165 <= smart.meanFraction <= 0.176
    assert smart.meanFraction <= plain.meanFraction + 2e-4
