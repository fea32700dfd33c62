from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class MultiGraph:
    """
    The projection of a pairing: one edge per pair, loops and parallel edges allowed.

    :param n: Vertex count.
    :type n: int
    :param d: Declared degree (0 when the source is not regular).
    :type d: int
    :param edges: Array of shape (m, 2) with u <= v in every row.
    :type edges: np.ndarray
    """
    n: int
    d: int
    edges: np.ndarray

    def degrees(self) -> np.ndarray:
        # A loop contributes both endpoints, so it counts twice
        return np.bincount(self.edges.ravel(), minlength=self.n)

    def sortedEdges(self) -> np.ndarray:
        if len(self.edges) == 0:
            return self.edges.reshape(0, 2)
        order = np.lexsort((self.edges[:, 1], self.edges[:, 0]))
        return self.edges[order]
