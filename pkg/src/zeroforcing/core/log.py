import logging
import os
import re
import sys
from sys import platform
from pathlib import Path
from datetime import datetime
from typing import List, Optional

from src.zeroforcing.core.models.log_entry import LogEntry


class SourceFilter(logging.Filter):
    def filter(self, record: logging.LogRecord) -> bool:
        record.source = "ZF"
        return True


class CustomFormatter(logging.Formatter):
    """Custom formatter to support ISO 8601 timestamps with milliseconds and include a 'source'."""

    def formatTime(self, record, datefmt=None):
        ct = datetime.fromtimestamp(record.created)
        if datefmt:
            s = ct.strftime(datefmt)
            return s.replace('%f', f"{ct.microsecond:06d}"[:3])
        else:
            return ct.strftime("%Y-%m-%dT%H:%M:%S.%f")[:23]


def getLogDirectory() -> Path:
    """
    Determines the log directory based on the platform, honouring ZEROFORCING_LOG_DIR.

    :return: The directory holding log.txt.
    :rtype: Path
    """
    override = os.getenv("ZEROFORCING_LOG_DIR")
    if override:
        return Path(override)
    if platform == "win32":
        return Path(os.getenv("APPDATA", Path.home())) / "ZeroForcing" / "Logs"
    elif platform == "darwin":
        return Path.home() / "Library" / "Logs" / "ZeroForcing"
    return Path.home() / ".local" / "share" / "zeroforcing"


class Log:
    _instance = None
    _logger = None
    _logFilePath = None
    _streamHandler = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(Log, cls).__new__(cls)
            cls._setup()
        return cls._instance

    @classmethod
    def _setup(cls):
        if cls._logger:
            return

        cls._logger = logging.getLogger("ZeroForcingLogger")
        cls._logger.setLevel(logging.DEBUG)
        cls._logger.propagate = False

        formatter = CustomFormatter(
            "%(asctime)s - %(source)s - %(levelname)s - %(message)s",
            datefmt="%Y-%m-%dT%H:%M:%S.%f"
        )
        sourceFilter = SourceFilter()

        # File handler, skipped when the log directory is not writable
        logPath = getLogDirectory()
        try:
            logPath.mkdir(parents=True, exist_ok=True)
            cls._logFilePath = logPath / "log.txt"
            fileHandler = logging.FileHandler(str(cls._logFilePath), encoding="utf-8")
            fileHandler.setLevel(logging.DEBUG)
            fileHandler.setFormatter(formatter)
            fileHandler.addFilter(sourceFilter)
            cls._logger.addHandler(fileHandler)
        except OSError:
            cls._logFilePath = None

        # Console handler
        cls._streamHandler = logging.StreamHandler(sys.stderr)
        cls._streamHandler.setLevel(logging.WARNING)
        cls._streamHandler.setFormatter(formatter)
        cls._streamHandler.addFilter(sourceFilter)
        cls._logger.addHandler(cls._streamHandler)

        # numpy / scipy RuntimeWarnings end up in the same sinks
        logging.captureWarnings(True)
        cls.adopt(logging.getLogger("py.warnings"), logging.WARNING)

    @classmethod
    def adopt(cls, logger: logging.Logger, logLevel: int = logging.DEBUG):
        logger.setLevel(logLevel)
        logger.propagate = True
        logger.parent = cls._logger

    @classmethod
    def setConsoleLevel(cls, level: int):
        cls._setup()
        cls._streamHandler.setLevel(level)

    @classmethod
    def error(cls, message: str):
        cls._setup()
        cls._logger.error(message)

    @classmethod
    def warning(cls, message: str):
        cls._setup()
        cls._logger.warning(message)

    @classmethod
    def info(cls, message: str):
        cls._setup()
        cls._logger.info(message)

    @classmethod
    def verbose(cls, message: str):
        cls._setup()
        cls._logger.debug(message)

    @classmethod
    def getLogFilePath(cls) -> Optional[Path]:
        cls._setup()
        return cls._logFilePath

    @classmethod
    def tail(cls, numLines: int = 100) -> List[LogEntry]:
        """
        Read the last entries of the log file.

        :param numLines: The number of lines to read.
        :type numLines: int
        :return: Parsed entries, oldest first.
        :rtype: List[LogEntry]
        """
        path = cls.getLogFilePath()
        if path is None or not path.exists():
            return []
        return [parseLogLine(line) for line in tailLines(path, numLines)]


def tailLines(filename: Path, n: int) -> List[str]:
    """
    Read the last n lines from a file efficiently.

    :param filename: The path to the file.
    :type filename: Path
    :param n: The number of lines to read.
    :type n: int
    :return: A list of the last n lines in the file.
    :rtype: list of str
    """
    with open(filename, "rb") as f:
        f.seek(0, os.SEEK_END)
        position = f.tell()
        blockSize = 1024
        blocks = []
        linesFound = 0

        while position > 0 and linesFound <= n:
            step = min(blockSize, position)
            position -= step
            f.seek(position)
            block = f.read(step)
            blocks.insert(0, block)
            linesFound += block.count(b"\n")

        content = b"".join(blocks)
        lines = content.splitlines()[-n:] if n > 0 else []
        return [line.decode("utf-8", errors="replace") for line in lines]


_LINE_PATTERN = re.compile(r"(\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}\.\d{3}) - (\w+) - (\w+) - (.*)")


def parseLogLine(line: str) -> LogEntry:
    match = _LINE_PATTERN.match(line)
    if match:
        timestamp, source, level, message = match.groups()
        return LogEntry(timestamp, source, level, message)
    # Continuation lines of multi-line messages
    return LogEntry("", "ZF", "CONT", line.rstrip("\n"))
