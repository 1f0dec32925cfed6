import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from domains.coordination.cfcn_coordination import cfcn_color
from domains.graph.graph_domain import Graph, GraphKind, GraphSpec, generate
from domains.hypergraph.hypergraph_domain import InstanceTooLargeError, verify_cf
from domains.oracle.oracle_domain import (
    closed_neighborhood_hypergraph,
    count_colors,
    exact_chi_cn,
    greedy_cfcn_baseline,
    verify_cfcn,
)

from .strategies import graphs

K3 = generate(GraphSpec(GraphKind.COMPLETE, n=3))


def all_graphs(n: int):
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield Graph.from_edges(n, [pair for bit, pair in enumerate(pairs) if mask >> bit & 1])


def canonical_colorings(n: int, max_colors: int):
    """Restricted-growth strings: each vertex opens at most one new color."""

    def extend(prefix: list[int], used: int):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for color in range(min(used + 1, max_colors)):
            yield from extend([*prefix, color], max(used, color + 1))

    yield from extend([], 0)


def naive_is_cfcn(graph: Graph, colors) -> bool:
    """Count each candidate color over the whole vertex set."""
    for v in range(graph.n):
        members = [u for u in range(graph.n) if u == v or graph.has_edge(u, v)]
        found = False
        for color in set(colors):
            if sum(1 for u in members if colors[u] == color) == 1:
                found = True
                break
        if not found:
            return False
    return True


def brute_force_chi_cn(graph: Graph, max_colors: int) -> int | None:
    if graph.n == 0:
        return 0
    for k in range(1, max_colors + 1):
        for colors in itertools.product(range(k), repeat=graph.n):
            if naive_is_cfcn(graph, colors):
                return k
    return None


class TestVerifyCfcn:
    """Test the closed-neighborhood verifier."""

    def test_triangle_odd_one_out(self):
        """Test K_3 colored (0, 0, 1) is valid everywhere with witness 1."""
        report = verify_cfcn(K3, [0, 0, 1])

        assert report.valid
        assert report.witnesses == (1, 1, 1)

    def test_triangle_monochromatic(self):
        """Test K_3 colored (0, 0, 0) fails at every vertex."""
        report = verify_cfcn(K3, [0, 0, 0])

        assert not report.valid
        assert report.violations == [0, 1, 2]
        assert report.first_violation == 0

    def test_path_witnesses(self):
        """Test P_3 colored (0, 1, 0) reports the lowest witness per vertex."""
        report = verify_cfcn(generate(GraphSpec(GraphKind.PATH, n=3)), [0, 1, 0])

        assert report.valid
        assert report.witnesses == (0, 1, 0)
        assert report.first_violation is None

    def test_length_mismatch_rejected(self):
        """Test a coloring of the wrong length is refused."""
        with pytest.raises(ValueError, match="Expected 3 colors, got 2"):
            verify_cfcn(K3, [0, 1])

    def test_uncolored_vertex_rejected(self):
        """Test every vertex must be colored."""
        with pytest.raises(ValueError, match="Vertex 1 is not colored"):
            verify_cfcn(K3, [0, None, 1])

    def test_empty_graph(self):
        """Test the empty coloring of the empty graph is valid."""
        assert verify_cfcn(Graph(n=0, adj=()), []).valid

    def test_agrees_with_naive_checker(self):
        """Test every graph with n <= 5 and every coloring with at most 3 colors."""
        for n in range(1, 6):
            for graph in all_graphs(n):
                for colors in canonical_colorings(n, 3):
                    assert verify_cfcn(graph, colors).valid == naive_is_cfcn(graph, colors)

    @pytest.mark.slow
    def test_agrees_with_naive_checker_six_vertices(self):
        """Test all graphs on six vertices."""
        colorings = list(canonical_colorings(6, 3))
        for graph in all_graphs(6):
            for colors in colorings:
                assert verify_cfcn(graph, colors).valid == naive_is_cfcn(graph, colors)

    @given(graphs(max_n=8), st.data())
    def test_matches_hypergraph_view(self, graph, data):
        """Test CFCN validity equals CF validity on the closed-neighborhood hypergraph."""
        colors = data.draw(st.lists(st.integers(0, 3), min_size=graph.n, max_size=graph.n))
        h = closed_neighborhood_hypergraph(graph)

        assert verify_cfcn(graph, colors).valid == verify_cf(h, dict(enumerate(colors))).valid


class TestClosedNeighborhoodHypergraph:
    """Test the N[v] hypergraph."""

    def test_path(self):
        """Test P_3 gives one edge per closed neighborhood, labelled by vertex."""
        h = closed_neighborhood_hypergraph(generate(GraphSpec(GraphKind.PATH, n=3)))

        assert h.points == (0, 1, 2)
        assert h.edges == ((0, 1), (0, 1, 2), (1, 2))
        assert h.labels == (0, 1, 2)


class TestExactChiCn:
    """Test the exact CFCN chromatic number."""

    @pytest.mark.parametrize("n", range(2, 7))
    def test_complete_graphs(self, n):
        """Test K_n needs exactly two colors."""
        assert exact_chi_cn(generate(GraphSpec(GraphKind.COMPLETE, n=n)), 12) == 2

    def test_single_vertex(self):
        """Test one vertex needs one color."""
        assert exact_chi_cn(Graph(n=1, adj=((),)), 12) == 1

    @pytest.mark.parametrize(
        "spec",
        [
            GraphSpec(GraphKind.PATH, n=4),
            GraphSpec(GraphKind.CYCLE, n=4),
            GraphSpec(GraphKind.STAR, n=4),
        ],
    )
    def test_two_color_examples(self, spec):
        """Test P_4, C_4 and K_{1,4} need two colors."""
        assert exact_chi_cn(generate(spec), 12) == 2

    def test_empty_graph(self):
        """Test the empty graph needs zero colors."""
        assert exact_chi_cn(Graph(n=0, adj=()), 12) == 0

    def test_exceeds_max(self):
        """Test None when the cap is below the answer."""
        assert exact_chi_cn(K3, 1) is None

    def test_too_large_rejected(self):
        """Test graphs above twelve vertices are refused."""
        with pytest.raises(InstanceTooLargeError, match="at most 12 vertices"):
            exact_chi_cn(generate(GraphSpec(GraphKind.PATH, n=13)), 12)

    def test_matches_brute_force(self):
        """Test agreement with unpruned enumeration for every graph with n <= 4."""
        for n in range(5):
            for graph in all_graphs(n):
                assert exact_chi_cn(graph, 4) == brute_force_chi_cn(graph, 4)

    @pytest.mark.slow
    def test_matches_brute_force_five_vertices(self):
        """Test agreement for every graph on five vertices."""
        for graph in all_graphs(5):
            assert exact_chi_cn(graph, 5) == brute_force_chi_cn(graph, 5)

    def test_lower_bounds_both_algorithms(self, small_corpus):
        """Test the optimum never exceeds the pipeline or the baseline."""
        for graph in small_corpus:
            optimum = exact_chi_cn(graph, 12)
            coloring, _ = cfcn_color(graph, seed=1)
            baseline = greedy_cfcn_baseline(graph)

            assert optimum is not None
            assert optimum <= coloring.total_colors
            assert optimum <= count_colors(baseline)


class TestGreedyBaseline:
    """Test the proper-coloring baseline."""

    def test_complete_graph(self):
        """Test K_4 gets four colors."""
        colors = greedy_cfcn_baseline(generate(GraphSpec(GraphKind.COMPLETE, n=4)))

        assert colors == [0, 1, 2, 3]
        assert count_colors(colors) == 4

    def test_edgeless(self):
        """Test an edgeless graph gets one color."""
        assert count_colors(greedy_cfcn_baseline(Graph.from_edges(5, []))) == 1

    def test_five_cycle(self):
        """Test C_5 gets at most three colors and is valid."""
        graph = generate(GraphSpec(GraphKind.CYCLE, n=5))
        colors = greedy_cfcn_baseline(graph)

        assert count_colors(colors) <= 3
        assert verify_cfcn(graph, colors).valid

    @given(graphs())
    def test_always_valid(self, graph):
        """Test the baseline is CFCN with at most delta + 1 colors."""
        colors = greedy_cfcn_baseline(graph)
        delta = max((len(row) for row in graph.adj), default=0)

        assert verify_cfcn(graph, colors).valid
        assert count_colors(colors) <= delta + 1
