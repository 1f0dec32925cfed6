import hypothesis
import pytest

from domains.graph.graph_domain import Graph, GraphKind, GraphSpec, generate

from .strategies import gnp

hypothesis.settings.register_profile("cfcn", deadline=None, max_examples=60)
hypothesis.settings.register_profile("fast", deadline=None, max_examples=10)
hypothesis.settings.load_profile("cfcn")


@pytest.fixture
def small_corpus() -> list[Graph]:
    """Forty small graphs (n <= 9): named families plus seeded G(n, p)."""
    named = [
        generate(GraphSpec(GraphKind.PATH, n=n)) for n in range(1, 8)
    ] + [
        generate(GraphSpec(GraphKind.CYCLE, n=n)) for n in range(3, 9)
    ] + [
        generate(GraphSpec(GraphKind.COMPLETE, n=n)) for n in range(2, 7)
    ] + [
        generate(GraphSpec(GraphKind.STAR, n=n)) for n in range(1, 6)
    ] + [
        generate(GraphSpec(GraphKind.GRID, rows=2, cols=c)) for c in range(2, 5)
    ]
    random_graphs = [
        gnp(n, p, seed)
        for seed, (n, p) in enumerate(
            [(n, p) for n in (5, 6, 7, 8, 9) for p in (0.2, 0.35, 0.5)][:14]
        )
    ]
    corpus = named + random_graphs
    assert len(corpus) == 40
    return corpus
