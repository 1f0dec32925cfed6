import logging
from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass

from ..graph.graph_domain import Graph
from ..hypergraph.hypergraph_domain import (
    MAX_EXACT_POINTS,
    Hypergraph,
    InstanceTooLargeError,
    exact_cf_number,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CfcnReport:
    """Outcome of checking a coloring on closed neighborhoods.

    witnesses[v] is the lowest color occurring exactly once in N[v], or None
    when N[v] has no such color.
    """

    witnesses: tuple[int | None, ...]

    @property
    def valid(self) -> bool:
        """True when every closed neighborhood has a witness."""
        return all(w is not None for w in self.witnesses)

    @property
    def violations(self) -> list[int]:
        """Vertices whose N[v] has no unique color."""
        return [v for v, w in enumerate(self.witnesses) if w is None]

    @property
    def first_violation(self) -> int | None:
        """Lowest violating vertex, or None for a valid coloring."""
        return next((v for v, w in enumerate(self.witnesses) if w is None), None)


def verify_cfcn(graph: Graph, colors: Sequence[int | None]) -> CfcnReport:
    """Check that every closed neighborhood has a uniquely occurring color.

    Args:
        graph: The graph
        colors: colors[v] for every vertex v

    Returns:
        Report with one witness (or None) per vertex

    Raises:
        ValueError: If colors does not cover exactly the n vertices
    """
    if len(colors) != graph.n:
        raise ValueError(f"Expected {graph.n} colors, got {len(colors)}")
    uncolored = next((v for v, color in enumerate(colors) if color is None), None)
    if uncolored is not None:
        raise ValueError(f"Vertex {uncolored} is not colored")

    witnesses: list[int | None] = []
    for v in range(graph.n):
        counts = Counter(colors[u] for u in graph.adj[v])
        counts[colors[v]] += 1
        singles = [color for color, count in counts.items() if count == 1]
        witnesses.append(min(singles) if singles else None)
    return CfcnReport(witnesses=tuple(witnesses))


def closed_neighborhood_hypergraph(graph: Graph) -> Hypergraph:
    """Points V(G), one edge N[v] per vertex v (labelled v).

    A coloring of G is CFCN exactly when it is conflict-free on this hypergraph.
    """
    return Hypergraph(
        points=tuple(range(graph.n)),
        edges=tuple(graph.closed_neighborhood(v) for v in range(graph.n)),
        labels=tuple(range(graph.n)),
    )


def exact_chi_cn(graph: Graph, max_colors: int) -> int | None:
    """Minimum number of colors of a CFCN coloring, by exhaustive search.

    Returns:
        chi_CN(G) (0 for the empty graph), or None if it exceeds max_colors

    Raises:
        InstanceTooLargeError: If the graph has more than 12 vertices
    """
    if graph.n > MAX_EXACT_POINTS:
        raise InstanceTooLargeError(
            f"Exact search supports at most {MAX_EXACT_POINTS} vertices, got {graph.n}"
        )
    value = exact_cf_number(closed_neighborhood_hypergraph(graph), max_colors)
    logger.debug("Exact chi_CN for n=%d: %s", graph.n, value)
    return value


def greedy_cfcn_baseline(graph: Graph) -> list[int]:
    """Proper greedy coloring in ascending id order.

    Each vertex takes the smallest color none of its already colored
    neighbors has. A proper coloring makes every vertex the unique holder of
    its own color in N[v], so the result is CFCN with at most Delta+1 colors.
    """
    colors = [-1] * graph.n
    for v in range(graph.n):
        taken = {colors[u] for u in graph.adj[v]}
        color = 0
        while color in taken:
            color += 1
        colors[v] = color
    return colors


def count_colors(colors: Sequence[int]) -> int:
    """Number of distinct colors in a coloring."""
    return len(set(colors))
