from dataclasses import dataclass
from typing import List, Tuple

import numpy as np


@dataclass(frozen=True, eq=False)
class Pairing:
    """
    A perfect matching of the d·n configuration points. Point p lives in bucket p // d
    at slot p % d.

    :param n: Number of buckets (vertices).
    :type n: int
    :param d: Points per bucket.
    :type d: int
    :param matches: Array of shape (d·n/2, 2) holding point indices, one row per pair.
    :type matches: np.ndarray
    """
    n: int
    d: int
    matches: np.ndarray

    def bucketOf(self, point: int) -> int:
        return point // self.d

    def pairs(self) -> List[Tuple[Tuple[int, int], Tuple[int, int]]]:
        """
        The pairs as ((bucket, slot), (bucket, slot)) tuples.

        :return: One entry per matched pair.
        :rtype: list
        """
        return [((int(p) // self.d, int(p) % self.d), (int(q) // self.d, int(q) % self.d))
                for p, q in self.matches]
