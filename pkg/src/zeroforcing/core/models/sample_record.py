from dataclasses import dataclass


@dataclass(frozen=True)
class SampleRecord:
    seed: int
    n: int
    d: int
    algorithm: str
    forcingSetSize: int
    status: str
    attempts: int
    runtime: float

    @property
    def fraction(self) -> float:
        return self.forcingSetSize / self.n

    def toJson(self) -> dict:
        return {
            "seed": self.seed,
            "n": self.n,
            "d": self.d,
            "algorithm": self.algorithm,
            "forcing_set_size": self.forcingSetSize,
            "status": self.status,
            "attempts": self.attempts,
            "runtime": self.runtime,
        }
