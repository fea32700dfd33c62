import json
import os
from sys import platform
from dataclasses import dataclass, asdict, fields
from typing import ClassVar, Optional

import psutil

from src.zeroforcing.core.log import Log
from src.zeroforcing.core.models.solver_config import SolverConfig


@dataclass
class Config:
    """
    Represents the configuration settings for the application.

    :param outputPath: Directory where experiment reports and tables are written.
    :type outputPath: str
    :param threads: Worker threads for batch runs; 0 selects the physical core count.
    :type threads: int
    :param bruteForceZLimit: Largest n accepted by the exact zero forcing oracle.
    :type bruteForceZLimit: int
    :param bruteForceGrundyLimit: Largest n accepted by the exact Z-Grundy oracle.
    :type bruteForceGrundyLimit: int
    :param holeSearchLimit: Largest n accepted by the exhaustive bipartite hole search.
    :type holeSearchLimit: int
    :param denseEigenLimit: Largest n for which the spectrum is computed densely.
    :type denseEigenLimit: int
    :param odeMethod: Runge-Kutta method passed to the phase integrator.
    :type odeMethod: str
    :param odeStiffMethod: Implicit or switching method used for stiff phases.
    :type odeStiffMethod: str
    :param odeRelTol: Relative tolerance of the phase integrator.
    :type odeRelTol: float
    :param odeAbsTol: Absolute tolerance of the phase integrator.
    :type odeAbsTol: float
    :param tauTol: Clamp band for slightly negative tau components.
    :type tauTol: float
    :param graceBand: Ignored top-type tau at phase start.
    :type graceBand: float
    :param terminalMass: Undominated mass at which the last phase is closed analytically.
    :type terminalMass: float
    :param rootTol: Absolute tolerance of the hole-threshold root search.
    :type rootTol: float
    :param strictTau: Abort on negative lower-type tau.
    :type strictTau: bool
    """
    outputPath: str
    threads: int = 0
    bruteForceZLimit: int = 20
    bruteForceGrundyLimit: int = 16
    holeSearchLimit: int = 24
    denseEigenLimit: int = 2000
    odeMethod: str = "DOP853"
    odeStiffMethod: str = "LSODA"
    odeRelTol: float = 1e-10
    odeAbsTol: float = 1e-13
    tauTol: float = 1e-9
    graceBand: float = 1e-12
    terminalMass: float = 1e-9
    rootTol: float = 1e-12
    strictTau: bool = False

    _instance: ClassVar[Optional['Config']] = None

    @staticmethod
    def load() -> 'Config':
        """
        Loads the configuration as a singleton instance. If the configuration file
        does not exist, a default configuration is created.

        :return: The singleton instance of the configuration.
        :rtype: Config
        """
        if Config._instance is None:
            Config._instance = Config._loadConfig()
        return Config._instance

    @staticmethod
    def reset() -> None:
        Config._instance = None

    @staticmethod
    def configPath() -> str:
        """
        Gets the path to the configuration file based on the platform.

        :return: The path to the configuration file.
        :rtype: str
        """
        override = os.getenv('ZEROFORCING_CONFIG')
        if override:
            return override
        if platform == 'win32':
            return os.path.join(os.getenv('APPDATA'), 'ZeroForcing', 'config.json')
        elif platform == 'darwin':
            return os.path.join(os.getenv('HOME'), 'Library', 'Application Support', 'ZeroForcing', 'config.json')
        return os.path.join(os.getenv('HOME'), '.config', 'zeroforcing', 'config.json')

    def solverConfig(self) -> SolverConfig:
        return SolverConfig(
            method=self.odeMethod,
            stiffMethod=self.odeStiffMethod,
            relTol=self.odeRelTol,
            absTol=self.odeAbsTol,
            tauTol=self.tauTol,
            graceBand=self.graceBand,
            terminalMass=self.terminalMass,
            strictTau=self.strictTau
        )

    def threadCount(self) -> int:
        """
        Resolves the default worker count: ZEROFORCING_THREADS, then the config file,
        then the number of physical cores.

        :return: A positive thread count.
        :rtype: int
        """
        env = os.getenv('ZEROFORCING_THREADS')
        if env:
            try:
                return max(1, int(env))
            except ValueError:
                Log.warning(f"Ignoring non-integer ZEROFORCING_THREADS={env!r}")
        if self.threads > 0:
            return self.threads
        return psutil.cpu_count(logical=False) or 1

    @staticmethod
    def _createDefaultConfig() -> None:
        """
        Creates a default configuration file if none exists.
        The file is written in JSON format to the appropriate directory based on the platform.
        """
        path = Config.configPath()
        os.makedirs(os.path.dirname(path), exist_ok=True)
        config = Config(outputPath=getDefaultOutputPath())
        data = asdict(config)
        Log.info(f"Creating default config at {path}\n{data}")

        with open(path, 'w', encoding="utf-8") as file:
            json.dump(data, file, indent=4)

    @staticmethod
    def _loadConfig() -> 'Config':
        """
        Loads the configuration from a file. If the file does not exist,
        it creates a default configuration.

        :return: The loaded configuration.
        :rtype: Config
        """
        path = Config.configPath()
        if not os.path.exists(path):
            Config._createDefaultConfig()
        Log.info(f"Loading config from {path}")

        with open(path, 'r', encoding="utf-8") as file:
            data = json.load(file)
        Log.info(f"Loaded config: {data}")

        known = {f.name for f in fields(Config)}
        for key in sorted(set(data) - known):
            Log.warning(f"Ignoring unknown config key {key!r} in {path}")
        data = {key: value for key, value in data.items() if key in known}
        data.setdefault('outputPath', getDefaultOutputPath())
        return Config(**data)


def getDefaultOutputPath() -> str:
    """
    Determines the default directory for experiment output based on the platform.

    :return: The default output path.
    :rtype: str
    """
    if platform == 'win32':
        return os.path.join(os.getenv('USERPROFILE'), 'ZeroForcing')
    return os.path.join(os.getenv('HOME'), 'ZeroForcing')
