import logging
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Any

from ..decomposition.decomposition_domain import (
    AbcPartition,
    InvariantViolationError,
    maximal_distance3_set,
    partition_abc,
)
from ..graph.graph_domain import Graph, VertexSet, induced_subgraph, max_degree
from ..hypergraph.hypergraph_domain import (
    MIN_GAMMA,
    CfParams,
    Hypergraph,
    cf_color,
    max_edge_intersection,
)
from ..oracle.oracle_domain import verify_cfcn

logger = logging.getLogger(__name__)

# Below this degree the hypergraph stage cannot be reached.
MIN_THEOREM_DELTA = 2


class StopReason(Enum):
    """Why the layering loop stopped."""

    GRAPH_EMPTY = "graph-empty"
    CAP_REACHED = "cap-reached"


@dataclass(frozen=True)
class LayerDecomposition:
    """Layers (A_i, B_i, C_i) in original graph ids.

    Layer i is the A/B/C partition of G[C_{i-1}], with C_{-1} = V(G).
    """

    layers: tuple[AbcPartition, ...]
    k_target: int
    stop_reason: StopReason

    @property
    def residual(self) -> VertexSet:
        """C of the last layer (empty when there are no layers)."""
        return self.layers[-1].c if self.layers else ()

    def b_union(self) -> VertexSet:
        """All B_i vertices across layers, sorted; the points of the residual hypergraph."""
        return tuple(sorted(v for layer in self.layers for v in layer.b))


@dataclass(frozen=True)
class PaletteLedger:
    """Which color ids play which role.

    Layer color i marks A_i; hypergraph colors follow contiguously; the fresh
    color, when used at all, comes last.
    """

    layer_colors: tuple[int, ...]
    hypergraph_colors: tuple[int, ...]
    fresh_color: int | None


@dataclass(frozen=True)
class CfcnColoring:
    colors: tuple[int, ...]
    ledger: PaletteLedger
    total_colors: int


@dataclass(frozen=True)
class CfcnRunStats:
    """Counters describing one pipeline run."""

    seed: int
    c1: float
    delta: int
    k_target: int
    layers: int
    stop_reason: StopReason
    palette_size: int = 0
    hypergraph_colors_used: int = 0
    doublings: int = 0
    rounds: int = 0
    total_colors: int = 0


@dataclass(frozen=True)
class PipelineConfig:
    """Tunable constants of the pipeline; defaults match the CLI defaults."""

    c1: float = 4.0
    max_rounds_factor: int = 1000
    max_doublings: int = 10

    def __post_init__(self):
        if self.c1 <= 0:
            raise ValueError("c1 must be positive")


def iteration_cap(delta: int) -> int:
    """k = ceil(4 * log2(delta)), and 1 when delta is 0 or 1."""
    if delta < 0:
        raise ValueError("Maximum degree must be nonnegative")
    if delta <= 1:
        return 1
    return math.ceil(round(4 * math.log2(delta), 9))


def theorem_parameters(delta: int) -> tuple[int, int]:
    """Hypergraph parameters for a graph of maximum degree delta.

    Returns:
        (t, gamma) = (max(1, floor(2 * log2(delta))), delta ** 2)

    Raises:
        ValueError: If delta < 2
    """
    if delta < MIN_THEOREM_DELTA:
        raise ValueError(
            f"Maximum degree must be at least {MIN_THEOREM_DELTA}, got {delta}"
        )
    t = max(1, math.floor(round(2 * math.log2(delta), 9)))
    return t, delta**2


def decompose_layers(graph: Graph) -> LayerDecomposition:
    """Peel maximal distance-3+ layers off the graph.

    Stops when the residual graph is empty or after layer k_target
    (so a capped run has k_target + 1 layers).
    """
    k_target = iteration_cap(max_degree(graph))
    layers: list[AbcPartition] = []
    current = graph
    original: VertexSet = tuple(range(graph.n))

    while current.n:
        partition = partition_abc(current, maximal_distance3_set(current))
        layer = partition.translate(dict(enumerate(original)))
        layers.append(layer)
        logger.debug(
            "Layer %d: |A|=%d |B|=%d |C|=%d",
            len(layers) - 1,
            len(layer.a),
            len(layer.b),
            len(layer.c),
        )
        if not layer.c or len(layers) == k_target + 1:
            break
        original = layer.c
        current, _ = induced_subgraph(graph, original)

    stop_reason = StopReason.CAP_REACHED if layers and layers[-1].c else StopReason.GRAPH_EMPTY
    return LayerDecomposition(layers=tuple(layers), k_target=k_target, stop_reason=stop_reason)


def build_residual_hypergraph(graph: Graph, decomposition: LayerDecomposition) -> Hypergraph:
    """Hypergraph on the B vertices with one edge N(v) ∩ points per residual v.

    Raises:
        ValueError: If the decomposition did not stop at the cap with a
            nonempty residual set
        InvariantViolationError: If an edge has fewer than k_target + 1 points
            or some edge meets more than delta^2 others
    """
    residual = decomposition.residual
    if decomposition.stop_reason != StopReason.CAP_REACHED or not residual:
        raise ValueError("Residual hypergraph needs a capped decomposition with nonempty C_k")

    points = decomposition.b_union()
    in_points = set(points)
    min_size = decomposition.k_target + 1
    edges = []
    for v in residual:
        edge = tuple(u for u in graph.adj[v] if u in in_points)
        if len(edge) < min_size:
            raise InvariantViolationError(
                f"Residual vertex {v} sees {len(edge)} B vertices, expected at least {min_size}",
                vertex=v,
            )
        edges.append(edge)

    hypergraph = Hypergraph(points=points, edges=tuple(edges), labels=residual)
    delta = max_degree(graph)
    intersection = max_edge_intersection(hypergraph)
    if intersection > delta**2:
        raise InvariantViolationError(
            f"A residual edge meets {intersection} others, more than delta^2 = {delta**2}"
        )
    return hypergraph


class CfcnPipeline:
    """Orchestrates layering, the hypergraph stage and the fresh color.

    Each domain does its own part; this class only moves vertex sets and
    colors between them and checks the end result.
    """

    def __init__(self, config: PipelineConfig | None = None, seed: int = 0):
        """Initialize the pipeline.

        Args:
            config: Algorithm constants (defaults when None)
            seed: Seed for the randomized hypergraph stage
        """
        if seed < 0:
            raise ValueError(f"seed must be non-negative, got {seed}")
        self.config = config or PipelineConfig()
        self.seed = seed

    def run(self, graph: Graph) -> tuple[CfcnColoring, CfcnRunStats]:
        """Color `graph` conflict-free on closed neighborhoods.

        Returns:
            The coloring with its palette ledger, and run statistics

        Raises:
            ColoringBudgetExhaustedError: If the hypergraph stage gives up
            InvariantViolationError: If any internal check fails
        """
        delta = max_degree(graph)
        decomposition = decompose_layers(graph)
        layer_count = len(decomposition.layers)

        colors: list[int | None] = [None] * graph.n
        for i, layer in enumerate(decomposition.layers):
            for v in layer.a:
                colors[v] = i

        stats = CfcnRunStats(
            seed=self.seed,
            c1=self.config.c1,
            delta=delta,
            k_target=decomposition.k_target,
            layers=layer_count,
            stop_reason=decomposition.stop_reason,
        )
        hypergraph_colors: tuple[int, ...] = ()
        if decomposition.stop_reason == StopReason.CAP_REACHED:
            hypergraph_colors, stats = self._color_residual(
                graph, decomposition, colors, stats
            )

        fresh_color = None
        uncolored = [v for v, color in enumerate(colors) if color is None]
        if uncolored:
            fresh_color = layer_count + len(hypergraph_colors)
            for v in uncolored:
                colors[v] = fresh_color

        total = layer_count + len(hypergraph_colors) + (0 if fresh_color is None else 1)
        # Every vertex is colored by now.
        final = tuple(c for c in colors if c is not None)
        coloring = CfcnColoring(
            colors=final,
            ledger=PaletteLedger(
                layer_colors=tuple(range(layer_count)),
                hypergraph_colors=hypergraph_colors,
                fresh_color=fresh_color,
            ),
            total_colors=total,
        )
        stats = replace(stats, total_colors=total)
        self._check(graph, coloring, stats)
        logger.info(
            "Colored n=%d (delta=%d) with %d colors: %d layers, stop=%s, K=%d",
            graph.n,
            delta,
            total,
            layer_count,
            decomposition.stop_reason.value,
            stats.palette_size,
        )
        return coloring, stats

    def _color_residual(
        self,
        graph: Graph,
        decomposition: LayerDecomposition,
        colors: list[int | None],
        stats: CfcnRunStats,
    ) -> tuple[tuple[int, ...], CfcnRunStats]:
        """Run the hypergraph stage and write its colors after the layer colors."""
        hypergraph = build_residual_hypergraph(graph, decomposition)
        t, gamma_bound = theorem_parameters(stats.delta)
        gamma = max(MIN_GAMMA, min(gamma_bound, max_edge_intersection(hypergraph)))
        params = CfParams(
            t=t,
            gamma=gamma,
            c1=self.config.c1,
            max_rounds_factor=self.config.max_rounds_factor,
            max_doublings=self.config.max_doublings,
        )
        result = cf_color(hypergraph, params, self.seed)

        # Compact to the colors actually used so ids stay contiguous.
        offset = len(decomposition.layers)
        relabel = {
            color: offset + rank
            for rank, color in enumerate(sorted(set(result.colors.values())))
        }
        for point, color in result.colors.items():
            colors[point] = relabel[color]

        stats = replace(
            stats,
            palette_size=result.palette_size,
            hypergraph_colors_used=len(relabel),
            doublings=result.doublings_used,
            rounds=result.rounds_used,
        )
        return tuple(sorted(relabel.values())), stats

    def _check(self, graph: Graph, coloring: CfcnColoring, stats: CfcnRunStats) -> None:
        expected = max(coloring.colors) + 1 if coloring.colors else 0
        if coloring.total_colors != expected:
            raise InvariantViolationError(
                f"Palette is not packed: {coloring.total_colors} colors, max id {expected - 1}"
            )
        bound = (stats.k_target + 1) + stats.palette_size + 1
        if coloring.total_colors > bound:
            raise InvariantViolationError(
                f"{coloring.total_colors} colors exceed the construction bound {bound}"
            )
        report = verify_cfcn(graph, coloring.colors)
        if not report.valid:
            vertex = report.first_violation
            raise InvariantViolationError(
                f"Closed neighborhood of vertex {vertex} has no unique color",
                vertex=vertex,
            )


def cfcn_color(
    graph: Graph, c1: float = 4.0, seed: int = 0
) -> tuple[CfcnColoring, CfcnRunStats]:
    """Convenience wrapper: CfcnPipeline(PipelineConfig(c1=c1), seed).run(graph)."""
    return CfcnPipeline(PipelineConfig(c1=c1), seed=seed).run(graph)


def coloring_document(coloring: CfcnColoring, stats: CfcnRunStats) -> dict[str, Any]:
    """Structured record of a run, as written by the `color` command."""
    return {
        "n": len(coloring.colors),
        "colors": list(coloring.colors),
        "ledger": {
            "layer_colors": list(coloring.ledger.layer_colors),
            "hypergraph_colors": list(coloring.ledger.hypergraph_colors),
            "fresh_color": coloring.ledger.fresh_color,
        },
        "stats": {
            "k_target": stats.k_target,
            "layers": stats.layers,
            "K": stats.palette_size,
            "hypergraph_colors_used": stats.hypergraph_colors_used,
            "doublings": stats.doublings,
            "rounds": stats.rounds,
            "total_colors": stats.total_colors,
            "seed": stats.seed,
            "c1": stats.c1,
            "delta": stats.delta,
            "stop_reason": stats.stop_reason.value,
        },
    }
