import argparse
import json
import logging
import os
import sys
from typing import List, Optional

from src.zeroforcing.core.config import Config
from src.zeroforcing.core.constants import greedyAlgorithms, setPolicies, stallPolicies
from src.zeroforcing.core.de_solver import (boundTable, runPlain, runSmartD3, writeBoundTableCsv,
                                            writeSummaryJson, writeTrajectoryCsv)
from src.zeroforcing.core.edge_list import readGraph, writeEdgeList
from src.zeroforcing.core.errors import (ExperimentError, GenerationError, NumericalError,
                                         PreconditionError)
from src.zeroforcing.core.experiments import compareTrajectory, mcRun, predictionPortrait, runSample
from src.zeroforcing.core.forcing import bruteForceGrundy, closure, minimumForcingSet
from src.zeroforcing.core.graphs import newPairing, project, sampleSimple
from src.zeroforcing.core.greedy import degreeGreedy, smartDegreeGreedy, writeTraceCsv, writeZSequenceJson
from src.zeroforcing.core.hole_bound import thresholdTable, writeLowerBoundCsv
from src.zeroforcing.core.log import Log
from src.zeroforcing.core.models.experiment_config import ExperimentConfig
from src.zeroforcing.core.spectral import (edgeGuaranteeThreshold, prop7Asymptotic, prop7Bound,
                                           spectralReport, writeSpectralReport)
from src.zeroforcing.core.utils import parseRange, toJsonable

EXIT_OK = 0
EXIT_PRECONDITION = 2
EXIT_NUMERICAL = 3
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class ArgumentParser(argparse.ArgumentParser):
    """Reports usage errors with exit code 64 instead of argparse's 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _print(data) -> None:
    print(json.dumps(toJsonable(data), indent=2))


def _outputPath(args, default: str) -> str:
    if args.out:
        return args.out
    return os.path.join(Config.load().outputPath, default)


def _graphFromArgs(args):
    if args.graph:
        return readGraph(args.graph)
    if args.n is None or args.d is None:
        raise UsageError("either --graph or both --n and --d are required")
    graph, _ = sampleSimple(args.n, args.d, args.seed)
    return graph


def commandGen(args) -> int:
    if args.multigraph:
        graph = project(newPairing(args.n, args.d, args.seed))
        attempts = 1
    else:
        graph, attempts = sampleSimple(args.n, args.d, args.seed, args.max_attempts)
    path = _outputPath(args, f"graph_n{args.n}_d{args.d}_s{args.seed}.el")
    writeEdgeList(path, graph)
    _print({"path": path, "n": args.n, "d": args.d, "seed": args.seed, "attempts": attempts})
    return EXIT_OK


def commandForce(args) -> int:
    graph = readGraph(args.graph)
    outcome = closure(graph, parseRange(args.set) if args.set else [])
    _print({"forces": [list(force) for force in outcome.forces],
            "final_black": outcome.finalBlack,
            "zero_forcing": not outcome.stalled})
    return EXIT_OK


def commandGreedy(args) -> int:
    graph = _graphFromArgs(args)
    if args.algo == "smart":
        result = smartDegreeGreedy(graph, args.seed, args.policy, args.on_stall, recordSeed=args.seed)
    else:
        result = degreeGreedy(graph, args.seed, args.on_stall, recordSeed=args.seed)
    if args.trace:
        writeTraceCsv(args.trace, result.trace)
    if args.out:
        writeZSequenceJson(args.out, result.record)
    _print(result.record.toJson())
    return EXIT_OK


def commandExact(args) -> int:
    config = Config.load()
    graph = readGraph(args.graph)
    forcingSet = minimumForcingSet(graph, config.bruteForceZLimit)
    data = {"n": graph.n, "Z": len(forcingSet), "forcing_set": forcingSet}
    if args.grundy:
        data["grundy"] = bruteForceGrundy(graph, config.bruteForceGrundyLimit)
    _print(data)
    return EXIT_OK


def commandOde(args) -> int:
    if args.algo == "smart" and args.d != 3:
        raise PreconditionError(f"The smart system is only available for d=3, got d={args.d}")
    solverConfig = Config.load().solverConfig()
    portrait = runSmartD3(solverConfig) if args.algo == "smart" else runPlain(args.d, solverConfig)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        writeTrajectoryCsv(args.out, portrait)
        writeSummaryJson(os.path.join(args.out, f"d{portrait.d}_{portrait.algorithm}_summary.json"), portrait)
    _print(portrait.summary())
    return EXIT_OK


def commandLowerBound(args) -> int:
    results = thresholdTable(parseRange(args.d), Config.load().rootTol)
    if args.out:
        writeLowerBoundCsv(args.out, results)
    _print([{"d": r.d, "a": r.aThreshold, "lower_bound": r.lowerBound} for r in results])
    return EXIT_OK


def commandSpectral(args) -> int:
    if args.graph:
        config = Config.load()
        report = spectralReport(readGraph(args.graph), args.q, config.denseEigenLimit, config.holeSearchLimit)
    else:
        if args.n is None or args.d is None or args.lam is None:
            raise UsageError("either --graph or all of --n, --d and --lambda are required")
        report = {
            "n": args.n,
            "d": args.d,
            "lambda": args.lam,
            "prop7_exact": prop7Bound(args.n, args.d, args.lam),
            "prop7_asymptotic": prop7Asymptotic(args.n, args.d, args.lam),
            "threshold": edgeGuaranteeThreshold(args.n, args.d, args.lam),
            "holes_found": None,
        }
    if args.out:
        writeSpectralReport(args.out, report)
    _print(report)
    return EXIT_OK


def commandMc(args) -> int:
    config = ExperimentConfig(
        d=args.d,
        n=args.n,
        samples=args.samples,
        algorithm=args.algo,
        baseSeed=args.seed,
        threads=args.threads or Config.load().threadCount(),
        outputDir=args.out,
        keepTraces=args.keep_traces,
        onStall=args.on_stall,
        policy=args.policy,
        maxAttempts=args.max_attempts
    )
    report = mcRun(config, solverConfig=Config.load().solverConfig())
    _print(report.summary())
    return EXIT_OK


def commandCompare(args) -> int:
    config = ExperimentConfig(d=args.d, n=args.n, samples=1, algorithm=args.algo, baseSeed=args.seed,
                              keepTraces=True, policy=args.policy)
    record, trace = runSample(config, args.seed)
    portrait = predictionPortrait(args.d, args.algo, Config.load().solverConfig())
    if portrait is None:
        raise PreconditionError(f"No phase system for algorithm {args.algo!r} with d={args.d}")
    xMax = portrait.boundaries[0] if args.phase1 else None
    _print({"sample": record.toJson(), "sup_distance": compareTrajectory(trace, portrait, xMax)})
    return EXIT_OK


def commandTable(args) -> int:
    config = Config.load()
    records = boundTable(parseRange(args.d), config.solverConfig(), config.rootTol)
    if args.out:
        writeBoundTableCsv(args.out, records)
    _print([dict(zip(record.header(), record.row())) for record in records])
    return EXIT_OK


def commandLog(args) -> int:
    for entry in Log.tail(args.lines):
        print(entry.display())
    return EXIT_OK


def buildParser() -> ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument('--seed', type=int, default=0, help='base random seed')
    common.add_argument('--threads', type=int, default=0, help='worker threads (0: configured default)')
    common.add_argument('--out', type=str, default=None, help='output file or directory')

    parser = ArgumentParser(prog="zeroforcing",
                            description="Zero forcing number of random regular graphs: bounds and experiments.")
    parser.add_argument('--verbose', action='store_true', help='log progress to stderr')
    parser.add_argument('--debug', action='store_true', help='log per-step detail to stderr')
    subparsers = parser.add_subparsers(dest='command', metavar='command', parser_class=ArgumentParser)
    subparsers.required = True

    gen = subparsers.add_parser('gen', parents=[common], help='sample a random regular graph')
    gen.add_argument('--n', type=int, required=True)
    gen.add_argument('--d', type=int, required=True)
    gen.add_argument('--multigraph', action='store_true', help='keep the raw pairing projection')
    gen.add_argument('--max-attempts', type=int, default=None)
    gen.set_defaults(handler=commandGen)

    force = subparsers.add_parser('force', parents=[common], help='run the zero forcing process')
    force.add_argument('--graph', type=str, required=True)
    force.add_argument('--set', type=str, default='', help='initial black vertices, e.g. "0,3"')
    force.set_defaults(handler=commandForce)

    greedy = subparsers.add_parser('greedy', parents=[common], help='run a greedy Z-sequence algorithm')
    greedy.add_argument('--graph', type=str, default=None)
    greedy.add_argument('--n', type=int, default=None)
    greedy.add_argument('--d', type=int, default=None)
    greedy.add_argument('--algo', choices=greedyAlgorithms, default='plain')
    greedy.add_argument('--policy', choices=setPolicies, default='uniform')
    greedy.add_argument('--on-stall', choices=stallPolicies, default='fail')
    greedy.add_argument('--trace', type=str, default=None, help='trace CSV path')
    greedy.set_defaults(handler=commandGreedy)

    exact = subparsers.add_parser('exact', parents=[common], help='exact Z (and Z-Grundy) of a small graph')
    exact.add_argument('--graph', type=str, required=True)
    exact.add_argument('--grundy', action='store_true')
    exact.set_defaults(handler=commandExact)

    ode = subparsers.add_parser('ode', parents=[common], help='integrate the phase system')
    ode.add_argument('--d', type=int, required=True)
    ode.add_argument('--algo', choices=greedyAlgorithms, default='plain')
    ode.set_defaults(handler=commandOde)

    lower = subparsers.add_parser('lower-bound', parents=[common], help='bipartite-hole lower bounds')
    lower.add_argument('--d', type=str, required=True, help='degrees, e.g. "3:14"')
    lower.set_defaults(handler=commandLowerBound)

    spectral = subparsers.add_parser('spectral', parents=[common], help='spectral bounds')
    spectral.add_argument('--graph', type=str, default=None)
    spectral.add_argument('--q', type=int, default=None, help='bipartite hole size to search for')
    spectral.add_argument('--n', type=int, default=None)
    spectral.add_argument('--d', type=int, default=None)
    spectral.add_argument('--lambda', dest='lam', type=float, default=None)
    spectral.set_defaults(handler=commandSpectral)

    mc = subparsers.add_parser('mc', parents=[common], help='Monte Carlo greedy experiment')
    mc.add_argument('--n', type=int, required=True)
    mc.add_argument('--d', type=int, required=True)
    mc.add_argument('--samples', type=int, default=10)
    mc.add_argument('--algo', choices=greedyAlgorithms, default='plain')
    mc.add_argument('--policy', choices=setPolicies, default='uniform')
    mc.add_argument('--on-stall', choices=stallPolicies, default='fail')
    mc.add_argument('--max-attempts', type=int, default=None)
    mc.add_argument('--keep-traces', action='store_true', help='compare each trace with the phase system')
    mc.set_defaults(handler=commandMc)

    compare = subparsers.add_parser('compare', parents=[common], help='one greedy run against the phase system')
    compare.add_argument('--n', type=int, required=True)
    compare.add_argument('--d', type=int, required=True)
    compare.add_argument('--algo', choices=greedyAlgorithms, default='plain')
    compare.add_argument('--policy', choices=setPolicies, default='uniform')
    compare.add_argument('--phase1', action='store_true', help='only compare up to the first phase boundary')
    compare.set_defaults(handler=commandCompare)

    table = subparsers.add_parser('table', parents=[common], help='upper and lower bounds side by side')
    table.add_argument('--d', type=str, default='3:14')
    table.set_defaults(handler=commandTable)

    log = subparsers.add_parser('log', help='show the end of the log file')
    log.add_argument('--lines', type=int, default=50)
    log.set_defaults(handler=commandLog)
    return parser


def cliMain(argv: Optional[List[str]] = None) -> int:
    """
    Runs one subcommand.

    :param argv: Arguments without the program name; sys.argv[1:] when None.
    :type argv: Optional[List[str]]
    :return: 0 on success, 2 on a precondition error, 3 on a numerical or generation failure,
        64 on a usage error.
    :rtype: int
    """
    parser = buildParser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        return int(e.code or 0)

    if args.debug:
        Log.setConsoleLevel(logging.DEBUG)
    elif args.verbose:
        Log.setConsoleLevel(logging.INFO)
    Log.info(f"Command: {args.command} {argv if argv is not None else sys.argv[1:]}")

    try:
        return args.handler(args)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    except PreconditionError as e:
        Log.error(f"Precondition failed: {e}")
        return EXIT_PRECONDITION
    except (NumericalError, GenerationError, ExperimentError) as e:
        Log.error(f"{type(e).__name__}: {e}")
        return EXIT_NUMERICAL


def main():
    """
    Main entry point for the application.
    """
    sys.exit(cliMain())


if __name__ == "__main__":
    main()
