from dataclasses import dataclass, field
from typing import Dict, List

import numpy as np

from src.zeroforcing.core.models.solver_config import SolverConfig


@dataclass(frozen=True, eq=False)
class ScaledState:
    """
    Fluid-limit state: x = t/n and the scaled type counts. The smart d=3 system stores six
    components, y_{i,k} at index 2i + (k - 1).

    :param x: Scaled time.
    :type x: float
    :param y: Scaled type counts.
    :type y: np.ndarray
    """
    x: float
    y: np.ndarray

    @property
    def u(self) -> float:
        return float(1.0 - np.sum(self.y))


@dataclass(eq=False)
class PhaseResult:
    """
    One integrated phase.

    :param k: Phase index, starting at 1.
    :type k: int
    :param xs: Solver grid.
    :type xs: np.ndarray
    :param ys: States on the grid, one row per point.
    :type ys: np.ndarray
    :param taus: Step-type proportions on the grid.
    :type taus: np.ndarray
    :param xEnd: Phase boundary, or the extrapolated end of the process.
    :type xEnd: float
    :param endState: State handed to the next phase.
    :type endState: ScaledState
    :param event: "tau_zero" or "exhausted".
    :type event: str
    :param tauLabels: Column names for taus.
    :type tauLabels: List[str]
    :param diagnostics: Largest flat-cell rate and smallest lower-type tau on the grid.
    :type diagnostics: Dict[str, float]
    """
    k: int
    xs: np.ndarray
    ys: np.ndarray
    taus: np.ndarray
    xEnd: float
    endState: ScaledState
    event: str
    tauLabels: List[str] = field(default_factory=list)
    diagnostics: Dict[str, float] = field(default_factory=dict)


@dataclass(eq=False)
class PhasePortrait:
    d: int
    algorithm: str
    phases: List[PhaseResult]
    upperBound: float
    config: SolverConfig
    stateLabels: List[str] = field(default_factory=list)
    diagnostics: Dict[str, object] = field(default_factory=dict)

    @property
    def boundaries(self) -> List[float]:
        return [phase.xEnd for phase in self.phases]

    @property
    def xEnd(self) -> float:
        return self.phases[-1].xEnd

    def grid(self):
        """
        The whole trajectory as one increasing grid.

        :return: (xs, ys) with duplicate boundary points removed.
        :rtype: Tuple[np.ndarray, np.ndarray]
        """
        xs = np.concatenate([phase.xs for phase in self.phases])
        ys = np.vstack([phase.ys for phase in self.phases])
        keep = np.concatenate([[True], np.diff(xs) > 0])
        return xs[keep], ys[keep]

    def stateAt(self, x: float) -> np.ndarray:
        xs, ys = self.grid()
        return np.array([np.interp(x, xs, ys[:, i]) for i in range(ys.shape[1])])

    def summary(self) -> dict:
        return {
            "d": self.d,
            "algorithm": self.algorithm,
            "x_k": self.boundaries,
            "events": [phase.event for phase in self.phases],
            "upper_bound": self.upperBound,
            "solver": {
                "method": self.config.method,
                "stiff_method": self.config.stiffMethod,
                "rtol": self.config.relTol,
                "atol": self.config.absTol,
                "tau_tol": self.config.tauTol,
                "grace_band": self.config.graceBand,
                "terminal_mass": self.config.terminalMass,
            },
            "diagnostics": self.diagnostics,
        }
