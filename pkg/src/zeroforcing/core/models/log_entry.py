from dataclasses import dataclass


@dataclass(frozen=True)
class LogEntry:
    """
    One parsed line of the log file. Continuation lines of multi-line messages carry level
    "CONT" and no timestamp.
    """
    timestamp: str
    source: str
    level: str
    message: str

    @property
    def isContinuation(self) -> bool:
        return self.level == "CONT"

    def display(self) -> str:
        if self.isContinuation:
            return f"    {self.message}"
        return f"{self.timestamp} {self.level:<7} {self.message}"
