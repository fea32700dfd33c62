from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

import networkx as nx
import numpy as np
from scipy import sparse

from src.zeroforcing.core.errors import PreconditionError


@dataclass(frozen=True, eq=False)
class SimpleGraph:
    """
    A simple undirected graph on vertices 0..n-1 with sorted neighbour tuples.

    :param n: Vertex count.
    :type n: int
    :param adjacency: Per-vertex sorted neighbour tuples.
    :type adjacency: Tuple[Tuple[int, ...], ...]
    """
    n: int
    adjacency: Tuple[Tuple[int, ...], ...]

    def neighbours(self, v: int) -> Tuple[int, ...]:
        return self.adjacency[v]

    def closedNeighbourhood(self, v: int) -> set:
        return {v, *self.adjacency[v]}

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def edges(self) -> List[Tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adjacency[u] if u < v]

    def edgeCount(self) -> int:
        return sum(len(nbrs) for nbrs in self.adjacency) // 2

    def maxDegree(self) -> int:
        return max((len(nbrs) for nbrs in self.adjacency), default=0)

    def isRegular(self) -> bool:
        return len({len(nbrs) for nbrs in self.adjacency}) <= 1

    def neighbourMasks(self) -> List[int]:
        """
        Bitmask of N(v) per vertex, used by the exhaustive oracles.

        :return: One integer mask per vertex.
        :rtype: List[int]
        """
        return [sum(1 << w for w in nbrs) for nbrs in self.adjacency]

    def adjacencyMatrix(self) -> sparse.csr_matrix:
        rows = np.repeat(np.arange(self.n), [len(nbrs) for nbrs in self.adjacency])
        cols = np.fromiter((w for nbrs in self.adjacency for w in nbrs), dtype=np.int64, count=len(rows))
        data = np.ones(len(rows), dtype=np.float64)
        return sparse.csr_matrix((data, (rows, cols)), shape=(self.n, self.n))

    def toNetworkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges())
        return graph

    @staticmethod
    def fromEdges(n: int, edges: Iterable[Tuple[int, int]]) -> 'SimpleGraph':
        """
        Builds a graph from an edge iterable, returning a RegularGraph when every vertex
        has the same positive degree.

        :param n: Vertex count.
        :type n: int
        :param edges: Unordered vertex pairs; loops and repeated edges are rejected.
        :type edges: Iterable[Tuple[int, int]]
        :return: The graph.
        :rtype: SimpleGraph
        """
        edgeArray = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        adjacency = _adjacencyFromEdges(n, edgeArray)
        degrees = {len(nbrs) for nbrs in adjacency}
        if len(degrees) == 1 and n > 0 and len(adjacency[0]) > 0:
            return RegularGraph(n, adjacency, len(adjacency[0]))
        return SimpleGraph(n, adjacency)

    @staticmethod
    def fromNetworkx(graph: nx.Graph) -> 'SimpleGraph':
        relabelled = nx.convert_node_labels_to_integers(graph, ordering="sorted")
        return SimpleGraph.fromEdges(relabelled.number_of_nodes(), relabelled.edges())


@dataclass(frozen=True, eq=False)
class RegularGraph(SimpleGraph):
    """
    A simple d-regular graph.

    :param d: Common vertex degree.
    :type d: int
    """
    d: int

    def __post_init__(self):
        for v, nbrs in enumerate(self.adjacency):
            if len(nbrs) != self.d:
                raise PreconditionError(f"Vertex {v} has degree {len(nbrs)}, expected {self.d}")

    @staticmethod
    def fromEdges(n: int, edges: Iterable[Tuple[int, int]], d: Optional[int] = None) -> 'RegularGraph':
        graph = SimpleGraph.fromEdges(n, edges)
        if not isinstance(graph, RegularGraph) or (d is not None and graph.d != d):
            expected = f"{d}-regular" if d is not None else "regular"
            raise PreconditionError(f"Edge list on {n} vertices is not {expected}")
        return graph


def _adjacencyFromEdges(n: int, edges: np.ndarray) -> Tuple[Tuple[int, ...], ...]:
    if len(edges) and (edges.min() < 0 or edges.max() >= n):
        raise PreconditionError(f"Edge endpoint outside [0, {n})")
    if np.any(edges[:, 0] == edges[:, 1]):
        raise PreconditionError("Loops are not allowed in a simple graph")
    src = np.concatenate([edges[:, 0], edges[:, 1]])
    dst = np.concatenate([edges[:, 1], edges[:, 0]])
    order = np.lexsort((dst, src))
    src, dst = src[order], dst[order]
    if len(src) > 1 and np.any((src[1:] == src[:-1]) & (dst[1:] == dst[:-1])):
        raise PreconditionError("Repeated edges are not allowed in a simple graph")
    counts = np.bincount(src, minlength=n)
    return tuple(tuple(chunk.tolist()) for chunk in np.split(dst, np.cumsum(counts)[:-1]))
