"""Hypothesis strategies for graphs and hypergraphs."""

from hypothesis import strategies as st

from domains.graph.graph_domain import Graph, GraphKind, GraphSpec, generate
from domains.hypergraph.hypergraph_domain import Hypergraph


def gnp(n: int, p: float, seed: int) -> Graph:
    return generate(GraphSpec(GraphKind.GNP, n=n, p=p, seed=seed))


@st.composite
def graphs(draw, min_n: int = 0, max_n: int = 10) -> Graph:
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    if not pairs:
        return Graph.from_edges(n, [])
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True))
    return Graph.from_edges(n, chosen)


@st.composite
def hypergraphs(draw, max_points: int = 6, max_edges: int = 6) -> Hypergraph:
    m = draw(st.integers(1, max_points))
    edges = draw(
        st.lists(
            st.sets(st.integers(0, m - 1), min_size=1, max_size=m),
            min_size=1,
            max_size=max_edges,
        )
    )
    return Hypergraph.from_edges([sorted(e) for e in edges], points=range(m))
