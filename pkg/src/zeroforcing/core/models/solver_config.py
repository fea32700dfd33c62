from dataclasses import dataclass, replace


@dataclass(frozen=True)
class SolverConfig:
    """
    Numerical settings for the phase integrator.

    :param method: scipy solve_ivp method name, an explicit adaptive Runge-Kutta scheme.
    :type method: str
    :param stiffMethod: solve_ivp method for phases flagged stiff.
    :type stiffMethod: str
    :param relTol: Relative integration tolerance.
    :type relTol: float
    :param absTol: Absolute integration tolerance.
    :type absTol: float
    :param tauTol: Components of tau in [-tauTol, 0) are clamped to zero.
    :type tauTol: float
    :param graceBand: Top-type tau below this value at phase start does not end the phase.
    :type graceBand: float
    :param terminalMass: The final phase stops when u reaches this value and is extrapolated to u = 0.
    :type terminalMass: float
    :param strictTau: Abort when a lower-type tau goes negative instead of logging a warning.
    :type strictTau: bool
    """
    method: str = "DOP853"
    stiffMethod: str = "LSODA"
    relTol: float = 1e-10
    absTol: float = 1e-13
    tauTol: float = 1e-9
    graceBand: float = 1e-12
    terminalMass: float = 1e-9
    strictTau: bool = False

    def halved(self) -> 'SolverConfig':
        return replace(self, relTol=self.relTol / 2, absTol=self.absTol / 2)
