from dataclasses import dataclass

from src.zeroforcing.core.errors import PreconditionError

SOURCES = ("computed", "friedman", "user")


@dataclass(frozen=True)
class SpectralProfile:
    """
    An (n, d, λ) description of a graph: every adjacency eigenvalue other than d is at most
    λ in absolute value.

    :param n: Vertex count.
    :type n: int
    :param d: Degree.
    :type d: int
    :param lam: The bound λ.
    :type lam: float
    :param source: "computed", "friedman" or "user".
    :type source: str
    """
    n: int
    d: int
    lam: float
    source: str = "computed"

    def __post_init__(self):
        if self.lam < 0:
            raise PreconditionError(f"lambda must be nonnegative, got {self.lam}")
        if self.source not in SOURCES:
            raise PreconditionError(f"Unknown spectral source {self.source!r}")
