from typing import Union

import numpy as np

from src.zeroforcing.core.errors import PreconditionError
from src.zeroforcing.core.models.graph import SimpleGraph
from src.zeroforcing.core.models.multigraph import MultiGraph


def writeEdgeList(path: str, graph: Union[MultiGraph, SimpleGraph]) -> None:
    """
    Writes the "n m d" header followed by one sorted "u v" line per edge (u <= v).

    :param path: Destination file.
    :type path: str
    :param graph: A multigraph or a simple graph; irregular graphs record d = 0.
    :type graph: Union[MultiGraph, SimpleGraph]
    """
    if isinstance(graph, MultiGraph):
        n, d = graph.n, graph.d
        edges = graph.sortedEdges().tolist()
    else:
        n = graph.n
        d = graph.degree(0) if graph.n and graph.isRegular() else 0
        edges = graph.edges()

    with open(path, 'w', encoding="utf-8", newline='\n') as file:
        file.write(f"{n} {len(edges)} {d}\n")
        for u, v in edges:
            file.write(f"{u} {v}\n")


def readEdgeList(path: str) -> MultiGraph:
    """
    Reads an edge-list file into a multigraph, validating the header counts.

    :param path: Source file.
    :type path: str
    :return: The multigraph as written.
    :rtype: MultiGraph
    """
    with open(path, 'r', encoding="utf-8") as file:
        lines = [line.split() for line in file if line.strip() and not line.startswith('#')]
    if not lines or len(lines[0]) != 3:
        raise PreconditionError(f"{path}: expected header 'n m d'")

    n, m, d = (int(x) for x in lines[0])
    rows = lines[1:]
    if len(rows) != m:
        raise PreconditionError(f"{path}: header declares {m} edges, found {len(rows)}")
    edges = np.array([[int(a), int(b)] for a, b in rows], dtype=np.int64).reshape(-1, 2)
    if len(edges) and (edges.min() < 0 or edges.max() >= n):
        raise PreconditionError(f"{path}: endpoint outside [0, {n})")
    return MultiGraph(n, d, np.sort(edges, axis=1))


def readGraph(path: str) -> SimpleGraph:
    """
    Reads an edge-list file that must describe a simple graph. The result is a RegularGraph
    when every vertex has the same degree.

    :param path: Source file.
    :type path: str
    :return: The graph.
    :rtype: SimpleGraph
    """
    multigraph = readEdgeList(path)
    graph = SimpleGraph.fromEdges(multigraph.n, multigraph.edges)
    if multigraph.d and (not graph.isRegular() or graph.maxDegree() != multigraph.d):
        raise PreconditionError(f"{path}: header declares d={multigraph.d} but the graph is not {multigraph.d}-regular")
    return graph
