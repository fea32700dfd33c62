import os
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from src.zeroforcing.core.errors import NumericalError, PhaseError, PreconditionError
from src.zeroforcing.core.hole_bound import thresholdA
from src.zeroforcing.core.log import Log
from src.zeroforcing.core.models.bound_record import BoundRecord
from src.zeroforcing.core.models.phase_portrait import PhasePortrait, PhaseResult, ScaledState
from src.zeroforcing.core.models.solver_config import SolverConfig
from src.zeroforcing.core.rates import dominatedProbability, rateMatrix, smartIndex, smartRateMatrix
from src.zeroforcing.core.spectral import earlierBounds, operativeLambda, spectralFraction
from src.zeroforcing.core.utils import writeCsv, writeJson

MAX_CONDITION = 1e13
SPLIT_FLOOR = 1e-10
VALIDATED_MAX_D = 14


def _solveLinear(system: np.ndarray, rhs: np.ndarray, what: str) -> np.ndarray:
    if not np.all(np.isfinite(system)):
        raise NumericalError(f"Non-finite rates in the tau system of {what}")
    try:
        condition = np.linalg.cond(system)
        if not np.isfinite(condition) or condition > MAX_CONDITION:
            raise NumericalError(f"Singular tau system in {what}: condition estimate {condition:.3e}")
        return np.linalg.solve(system, rhs)
    except np.linalg.LinAlgError as e:
        raise NumericalError(f"Tau system of {what} could not be solved: {e}") from e


def _clampTau(tau: np.ndarray, tol: float, strict: bool, what: str) -> np.ndarray:
    tau = tau.copy()
    tau[(tau < 0.0) & (tau >= -tol)] = 0.0
    if strict and np.any(tau < -tol):
        j = int(np.argmin(tau))
        raise PhaseError(f"{what}: tau_{j + 1}={tau[j]:.3e} is negative")
    return tau


def _checkPhase(k: int, d: int) -> None:
    if d < 2:
        raise PreconditionError(f"d must be at least 2, got {d}")
    if not 1 <= k <= d - 1:
        raise PreconditionError(f"Phase k={k} outside [1, {d - 1}]")


def _plainTau(rates: np.ndarray, m: int, what: str) -> np.ndarray:
    system = np.zeros((m, m))
    rhs = np.zeros(m)
    system[0, :] = 1.0
    rhs[0] = 1.0
    system[1:, :] = rates[1:m, :m]
    return _solveLinear(system, rhs, what)


def solveTau(k: int, state: ScaledState, d: int, tol: float = 1e-9, strict: bool = True) -> np.ndarray:
    """
    Solves the phase-k mixing system: the proportions sum to one and types 1..d-k-1 do not
    accumulate.

    :param k: Phase index.
    :type k: int
    :param state: Scaled state.
    :type state: ScaledState
    :param d: Degree.
    :type d: int
    :param tol: Components in [-tol, 0) are clamped to zero.
    :type tol: float
    :param strict: Raise PhaseError on a component below -tol.
    :type strict: bool
    :return: tau_1..tau_{d-k}.
    :rtype: np.ndarray
    """
    _checkPhase(k, d)
    what = f"phase {k} (d={d}, x={state.x:.6f})"
    tau = _plainTau(rateMatrix(state.y, d), d - k, what)
    return _clampTau(tau, tol, strict, what)


def phaseDerivative(k: int, state: ScaledState, d: int, tol: float = 1e-9) -> Tuple[np.ndarray, float]:
    """
    Right-hand side of the phase-k system.

    :param k: Phase index.
    :type k: int
    :param state: Scaled state.
    :type state: ScaledState
    :param d: Degree.
    :type d: int
    :param tol: Tau clamp band.
    :type tol: float
    :return: dy/dx and du/dx.
    :rtype: Tuple[np.ndarray, float]
    """
    tau = solveTau(k, state, d, tol)
    m = d - k
    dy = rateMatrix(state.y, d)[:, :m] @ tau
    return dy, -float(np.dot(np.arange(1, m + 1), tau))


class _PhaseSystem:
    """
    One phase of a fluid-limit system: tau as a function of the state, the derivative it
    induces, and the quantities watched by the phase events.
    """
    k: int
    final: bool
    stiff: bool = False
    weights: np.ndarray
    flatCells: Sequence[int]
    tauLabels: List[str]

    def evaluate(self, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    def top(self, tau: np.ndarray) -> float:
        raise NotImplementedError

    def topMass(self, y: np.ndarray) -> float:
        raise NotImplementedError

    def checkedTau(self, taus: np.ndarray) -> np.ndarray:
        return taus if self.final else taus[:, :-1]


class _PlainPhase(_PhaseSystem):
    def __init__(self, k: int, d: int):
        _checkPhase(k, d)
        self.k = k
        self.d = d
        self.m = d - k
        self.final = k == d - 1
        self.weights = np.arange(1, self.m + 1, dtype=float)
        self.flatCells = list(range(1, self.m))
        self.tauLabels = [f"tau{j}" for j in range(1, self.m + 1)]
        self.what = f"phase {k} (d={d})"

    def evaluate(self, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        rates = rateMatrix(y, self.d, strict=False)
        tau = _plainTau(rates, self.m, self.what)
        return tau, rates[:, :self.m] @ tau

    def top(self, tau: np.ndarray) -> float:
        return float(tau[-1])

    def topMass(self, y: np.ndarray) -> float:
        return float(y[self.m])


class _SmartPhase(_PhaseSystem):
    """
    Phase 1 mixes type-1 and type-2 steps from both sets; type-2 steps are split between the
    sets in proportion to their type-2 counts. Phase 2 only has type-1 steps, split in
    proportion to the type-1 counts.

    While the splitting counts are near zero the split relaxes on a time scale of the counts
    themselves, so phase 2 is stiff and is integrated with the stiff method.
    """
    STEPS = {1: [(1, 1), (1, 2), (2, 1), (2, 2)], 2: [(1, 1), (1, 2)]}

    def __init__(self, k: int):
        if k not in self.STEPS:
            raise PreconditionError(f"Smart d=3 phase k={k} outside [1, 2]")
        self.k = k
        self.final = k == 2
        self.stiff = self.final
        self.steps = self.STEPS[k]
        self.weights = np.array([j for j, _ in self.steps], dtype=float)
        self.flatCells = [smartIndex(1, 1), smartIndex(1, 2)] if k == 1 else []
        self.tauLabels = [f"tau{j}_{l}" for j, l in self.steps]
        self.what = f"smart phase {k}"

    @staticmethod
    def _split(first: float, second: float, limit: Tuple[float, float]) -> Tuple[float, float]:
        # Blends towards the limiting shares as both counts vanish, keeping the split continuous
        first = max(first, 0.0) + SPLIT_FLOOR * limit[0]
        second = max(second, 0.0) + SPLIT_FLOOR * limit[1]
        total = first + second
        return first / total, second / total

    def evaluate(self, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        rates = smartRateMatrix(y, strict=False)
        columns = [rates[j - 1, l - 1] for j, l in self.steps]
        size = len(self.steps)
        system = np.zeros((size, size))
        rhs = np.zeros(size)
        system[0, :] = 1.0
        rhs[0] = 1.0

        if self.k == 1:
            system[1, :] = [column[1, 0] for column in columns]
            system[2, :] = [column[1, 1] for column in columns]
            shares = self._split(y[smartIndex(2, 1)], y[smartIndex(2, 2)], (0.5, 0.5))
            system[3, :] = [0.0, 0.0, shares[1], -shares[0]]
        else:
            shares = self._split(y[smartIndex(1, 1)], y[smartIndex(1, 2)], self._creationShares(y))
            system[1, :] = [shares[1], -shares[0]]

        tau = _solveLinear(system, rhs, self.what)
        derivative = sum(t * column for t, column in zip(tau, columns)).ravel()
        return tau, derivative

    @staticmethod
    def _creationShares(y: np.ndarray) -> Tuple[float, float]:
        u = max(1.0 - float(np.sum(y)), np.finfo(float).tiny)
        totals = np.asarray(y).reshape(3, 2).sum(axis=1)
        p = dominatedProbability(totals, 3, strict=False)
        first = 4.0 * max(y[smartIndex(2, 1)], 0.0) / (3.0 * u)
        second = 4.0 * max(y[smartIndex(2, 2)], 0.0) / (3.0 * u) + 2.0 * p * (1.0 - p)
        if first + second <= 0.0:
            return 0.5, 0.5
        return first / (first + second), second / (first + second)

    def checkedTau(self, taus: np.ndarray) -> np.ndarray:
        return taus[:, :2] if self.k == 1 else taus

    def top(self, tau: np.ndarray) -> float:
        return float(tau[2] + tau[3])

    def topMass(self, y: np.ndarray) -> float:
        if self.k == 1:
            return float(y[smartIndex(2, 1)] + y[smartIndex(2, 2)])
        return float(y[smartIndex(1, 1)] + y[smartIndex(1, 2)])


def _event(function: Callable, terminal: bool = True, direction: float = -1.0) -> Callable:
    function.terminal = terminal
    function.direction = direction
    return function


def _extrapolatedEnd(system: _PhaseSystem, x: float, y: np.ndarray) -> float:
    tau, _ = system.evaluate(y)
    rate = float(np.dot(system.weights, tau))
    return x + max(1.0 - float(np.sum(y)), 0.0) / rate


def _integrate(system: _PhaseSystem, initial: ScaledState, config: SolverConfig) -> PhaseResult:
    y0 = np.asarray(initial.y, dtype=float)
    tau0, _ = system.evaluate(y0)

    if initial.u <= config.terminalMass:
        xEnd = _extrapolatedEnd(system, initial.x, y0)
        return PhaseResult(system.k, np.array([initial.x]), y0[None, :], tau0[None, :], xEnd,
                           ScaledState(initial.x, y0), "exhausted", system.tauLabels)

    # Trial stages may step past the exhausted event; the rates divide by u, so they are
    # frozen below half the terminal mass
    floor = 0.5 * config.terminalMass

    def derivative(x: float, y: np.ndarray) -> np.ndarray:
        if 1.0 - np.sum(y) <= floor:
            return np.zeros_like(y)
        dy = system.evaluate(y)[1]
        if not np.all(np.isfinite(dy)):
            raise NumericalError(f"Non-finite derivative in phase {system.k} at x={x:.6f}")
        return dy

    exhausted = _event(lambda x, y: (1.0 - np.sum(y)) - config.terminalMass)
    backwards = _event(lambda x, y: system.topMass(y) + config.tauTol)
    events = [exhausted, backwards]
    if not system.final:
        top0 = system.top(tau0)
        if top0 < -config.tauTol:
            raise PhaseError(f"{system.tauLabels[-1]}={top0:.3e} is negative at the start of phase {system.k}")
        offset = config.graceBand if top0 < config.graceBand else 0.0

        def topTau(x: float, y: np.ndarray) -> float:
            if 1.0 - np.sum(y) <= floor:
                return 1.0
            return system.top(system.evaluate(y)[0]) + offset

        events.append(_event(topTau))

    # Every step dominates at least one vertex, so u is spent by x0 + u0
    xMax = initial.x + 1.01 * initial.u + 1e-6
    method = config.stiffMethod if system.stiff else config.method
    solution = solve_ivp(derivative, (initial.x, xMax), y0, method=method, rtol=config.relTol, atol=config.absTol,
                         events=events)
    if solution.status == -1:
        raise NumericalError(f"Phase {system.k} integration failed at x={solution.t[-1]:.6f}: {solution.message}")

    xs, ys = solution.t, solution.y.T
    fired = [len(times) > 0 for times in solution.t_events]
    if fired[1]:
        raise PhaseError(f"Phase {system.k} went backwards: top-type mass {system.topMass(ys[-1]):.3e} at x={xs[-1]:.6f}")
    if len(fired) > 2 and fired[2]:
        event, xEnd = "tau_zero", float(xs[-1])
    elif fired[0]:
        event, xEnd = "exhausted", _extrapolatedEnd(system, float(xs[-1]), ys[-1])
    else:
        raise NumericalError(f"Phase {system.k} reached x={xs[-1]:.6f} without an event")

    taus, derivatives = zip(*(system.evaluate(y) for y in ys))
    taus, derivatives = np.array(taus), np.array(derivatives)
    checked = system.checkedTau(taus)
    flat = derivatives[:, list(system.flatCells)]
    result = PhaseResult(system.k, xs, ys, taus, xEnd, ScaledState(float(xs[-1]), ys[-1]), event, system.tauLabels, {
        "max_flat_rate": float(np.max(np.abs(flat))) if flat.size else 0.0,
        "min_lower_tau": float(np.min(checked)) if checked.size else 0.0,
    })
    _checkLowerTau(result, config)
    return result


def _checkLowerTau(result: PhaseResult, config: SolverConfig) -> None:
    lowest = result.diagnostics["min_lower_tau"]
    if lowest >= -config.tauTol:
        return
    message = f"Phase {result.k}: lower-type tau reached {lowest:.3e}"
    if config.strictTau:
        raise PhaseError(message)
    Log.warning(message)


def integratePhase(k: int, initial: ScaledState, d: int, config: Optional[SolverConfig] = None) -> PhaseResult:
    """
    Integrates phase k until the top-type tau vanishes or the undominated mass runs out.

    :param k: Phase index.
    :type k: int
    :param initial: State at the start of the phase; y = 0 for k = 1.
    :type initial: ScaledState
    :param d: Degree.
    :type d: int
    :param config: Solver settings.
    :type config: Optional[SolverConfig]
    :return: The trajectory and the boundary.
    :rtype: PhaseResult
    """
    if np.shape(initial.y) != (d,):
        raise PreconditionError(f"Initial state has {np.shape(initial.y)} components, expected ({d},)")
    return _integrate(_PlainPhase(k, d), initial, config or SolverConfig())


def runPlain(d: int, config: Optional[SolverConfig] = None) -> PhasePortrait:
    """
    Chains phases 1..d-1 of the degree-greedy system from y(0) = 0; the upper bound on Z/n is
    one minus the time at which the process ends.

    :param d: Degree.
    :type d: int
    :param config: Solver settings.
    :type config: Optional[SolverConfig]
    :return: The phase portrait.
    :rtype: PhasePortrait
    """
    if d < 3:
        raise PreconditionError(f"The phase system needs d >= 3, got d={d}")
    if d > VALIDATED_MAX_D:
        Log.warning(f"d={d} is beyond the validated range 3..{VALIDATED_MAX_D}")
    config = config or SolverConfig()

    state = ScaledState(0.0, np.zeros(d))
    phases: List[PhaseResult] = []
    for k in range(1, d):
        phase = integratePhase(k, state, d, config)
        phases.append(phase)
        Log.verbose(f"d={d} phase {k} ended at x={phase.xEnd:.6f} ({phase.event})")
        if phase.event == "exhausted":
            break
        state = phase.endState

    portrait = PhasePortrait(d, "plain", phases, 1.0 - phases[-1].xEnd, config, [f"y{i}" for i in range(d)])
    portrait.diagnostics = _portraitDiagnostics(phases)
    if phases[-1].k == d - 1 and len(phases) > 1:
        previous = phases[-2].endState
        portrait.diagnostics["final_phase_gap"] = abs(phases[-1].xEnd - (previous.x + previous.u))
    Log.info(f"Plain degree greedy d={d}: upper bound {portrait.upperBound:.5f}")
    return portrait


def runSmartD3(config: Optional[SolverConfig] = None) -> PhasePortrait:
    """
    Integrates the two phases of the smart degree greedy for d = 3. The bound is the final
    T1 mass.

    :param config: Solver settings.
    :type config: Optional[SolverConfig]
    :return: The phase portrait over the six cells y_{i,k}.
    :rtype: PhasePortrait
    """
    config = config or SolverConfig()
    phases = [_integrate(_SmartPhase(1), ScaledState(0.0, np.zeros(6)), config)]
    if phases[0].event == "tau_zero":
        phases.append(_integrate(_SmartPhase(2), phases[0].endState, config))

    end = phases[-1].endState.y
    firstSet = float(sum(end[smartIndex(i, 1)] for i in range(3)))
    labels = [f"y{i}_{k}" for i in range(3) for k in (1, 2)]
    portrait = PhasePortrait(3, "smart", phases, firstSet, config, labels, _portraitDiagnostics(phases))
    Log.info(f"Smart degree greedy d=3: upper bound {portrait.upperBound:.5f}")
    return portrait


def _portraitDiagnostics(phases: Sequence[PhaseResult]) -> dict:
    return {
        "events": [phase.event for phase in phases],
        "max_flat_rate": max(phase.diagnostics.get("max_flat_rate", 0.0) for phase in phases),
        "min_lower_tau": min(phase.diagnostics.get("min_lower_tau", 0.0) for phase in phases),
    }


def writeTrajectoryCsv(directory: str, portrait: PhasePortrait) -> List[str]:
    """
    Writes one CSV per phase with columns x, the state cells, u and tau.

    :param directory: Target directory.
    :type directory: str
    :param portrait: The portrait.
    :type portrait: PhasePortrait
    :return: Paths written.
    :rtype: List[str]
    """
    paths = []
    for phase in portrait.phases:
        path = os.path.join(directory, f"d{portrait.d}_{portrait.algorithm}_phase{phase.k}.csv")
        header = ["x"] + portrait.stateLabels + ["u"] + phase.tauLabels
        u = 1.0 - phase.ys.sum(axis=1)
        rows = np.column_stack([phase.xs, phase.ys, u, phase.taus])
        writeCsv(path, header, (row.tolist() for row in rows))
        paths.append(path)
    return paths


def writeSummaryJson(path: str, portrait: PhasePortrait) -> None:
    writeJson(path, portrait.summary())


def boundTable(ds: Iterable[int], config: Optional[SolverConfig] = None, rootTol: float = 1e-12) -> List[BoundRecord]:
    """
    Upper and lower asymptotic bounds on Z/n for each degree, next to the spectral bound and
    the earlier interval.

    :param ds: Degrees, each at least 3.
    :type ds: Iterable[int]
    :param config: Solver settings.
    :type config: Optional[SolverConfig]
    :param rootTol: Tolerance of the hole-threshold search.
    :type rootTol: float
    :return: One record per degree.
    :rtype: List[BoundRecord]
    """
    records = []
    for d in ds:
        smart = runSmartD3(config).upperBound if d == 3 else None
        earlierLower, earlierUpper = earlierBounds(d)
        records.append(BoundRecord(
            d=d,
            lowerBound=thresholdA(d, rootTol).lowerBound,
            upperBound=runPlain(d, config).upperBound,
            smartUpperBound=smart,
            spectralUpper=spectralFraction(d, operativeLambda(d)),
            earlierLower=earlierLower,
            earlierUpper=earlierUpper
        ))
    return records


def writeBoundTableCsv(path: str, records: Iterable[BoundRecord]) -> None:
    writeCsv(path, BoundRecord.header(), (record.row() for record in records))
