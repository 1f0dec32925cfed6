import logging
from collections.abc import Iterable
from dataclasses import dataclass

from ..graph.graph_domain import Graph, VertexSet, ball

logger = logging.getLogger(__name__)


class InvariantViolationError(RuntimeError):
    """An internal-consistency check failed.

    Signals a broken precondition or a bug upstream, never bad user input.
    """

    def __init__(self, message: str, vertex: int | None = None):
        self.vertex = vertex
        super().__init__(message)


@dataclass(frozen=True)
class AbcPartition:
    """Split of V(G) around a maximal distance-3+ set.

    a: the distance-3+ set itself
    b: vertices outside a with a neighbor in a (exactly one, by maximality)
    c: everything else (each has a neighbor in b)
    """

    a: VertexSet
    b: VertexSet
    c: VertexSet

    def translate(self, id_map: dict[int, int]) -> "AbcPartition":
        """Rename every vertex through id_map, keeping each set sorted."""
        return AbcPartition(
            a=_mapped(self.a, id_map),
            b=_mapped(self.b, id_map),
            c=_mapped(self.c, id_map),
        )


def _mapped(vertices: VertexSet, id_map: dict[int, int]) -> VertexSet:
    return tuple(sorted(id_map[v] for v in vertices))


def maximal_distance3_set(graph: Graph) -> VertexSet:
    """Greedy maximal set with pairwise distance at least 3.

    Vertex ids are scanned in ascending order and v joins the set iff no
    member chosen so far lies in ball(v, 2). Distance is symmetric, so this
    is the same as v not lying in the radius-2 ball of any member, which is
    what `blocked` records.
    """
    blocked = [False] * graph.n
    chosen: list[int] = []
    for v in range(graph.n):
        if blocked[v]:
            continue
        chosen.append(v)
        for u in ball(graph, v, 2):
            blocked[u] = True
    return tuple(chosen)


def partition_abc(graph: Graph, a: Iterable[int]) -> AbcPartition:
    """Partition V(G) into (A, B, C) and check both neighborhood observations.

    Args:
        graph: The graph A was computed on
        a: A maximal distance-3+ set of graph

    Returns:
        The partition

    Raises:
        ValueError: If a contains an invalid id
        InvariantViolationError: If a is not independent, a B vertex does not
            see exactly one A vertex, or a C vertex has no B neighbor
    """
    a_set = sorted(set(a))
    for v in a_set:
        graph.check_vertex(v)
    in_a = [False] * graph.n
    for v in a_set:
        in_a[v] = True

    b: list[int] = []
    c: list[int] = []
    for v in range(graph.n):
        a_neighbors = sum(1 for u in graph.adj[v] if in_a[u])
        if in_a[v]:
            if a_neighbors:
                raise InvariantViolationError(
                    f"Vertex {v} of A has a neighbor in A; A is not independent",
                    vertex=v,
                )
        elif a_neighbors == 1:
            b.append(v)
        elif a_neighbors > 1:
            raise InvariantViolationError(
                f"Vertex {v} has {a_neighbors} neighbors in A, expected exactly one",
                vertex=v,
            )
        else:
            c.append(v)

    in_b = [False] * graph.n
    for v in b:
        in_b[v] = True
    for v in c:
        if not any(in_b[u] for u in graph.adj[v]):
            raise InvariantViolationError(
                f"Vertex {v} of C has no neighbor in B; A is not maximal",
                vertex=v,
            )

    logger.debug("A/B/C sizes: %d/%d/%d", len(a_set), len(b), len(c))
    return AbcPartition(a=tuple(a_set), b=tuple(b), c=tuple(c))
