import logging
from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass
from enum import Enum

import numpy as np

logger = logging.getLogger(__name__)

VertexSet = tuple[int, ...]


class EdgeListParseError(ValueError):
    """Raised when edge-list text cannot be turned into a simple graph."""

    def __init__(self, line_number: int, message: str):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertex ids 0..n-1.

    adj[v] is the sorted tuple of neighbors of v. Instances are immutable and
    safe to share between threads or worker processes.
    """

    n: int
    adj: tuple[VertexSet, ...]

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("Vertex count must be nonnegative")
        if len(self.adj) != self.n:
            raise ValueError(
                f"Adjacency has {len(self.adj)} rows for {self.n} vertices"
            )
        for v, row in enumerate(self.adj):
            for i, u in enumerate(row):
                if not (0 <= u < self.n):
                    raise ValueError(f"Neighbor {u} of vertex {v} is out of range")
                if u == v:
                    raise ValueError(f"Self-loop at vertex {v}")
                if i > 0 and row[i - 1] >= u:
                    raise ValueError(f"Neighbors of vertex {v} must be strictly increasing")
        for v, row in enumerate(self.adj):
            for u in row:
                if v not in self._neighbor_set(u):
                    raise ValueError(f"Edge {{{v},{u}}} is not symmetric")

    def _neighbor_set(self, v: int) -> frozenset[int]:
        # Built lazily; frozen dataclasses still allow object.__setattr__.
        cache = self.__dict__.get("_sets")
        if cache is None:
            cache = tuple(frozenset(row) for row in self.adj)
            object.__setattr__(self, "_sets", cache)
        return cache[v]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        """Build a graph from an edge iterable, collapsing duplicates.

        Args:
            n: Number of vertices
            edges: Pairs (u, v) with u != v and both ids below n

        Returns:
            The graph

        Raises:
            ValueError: On self-loops or out-of-range ids
        """
        neighbors: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise ValueError(f"Self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"Edge {{{u},{v}}} has an id outside 0..{n - 1}")
            neighbors[u].add(v)
            neighbors[v].add(u)
        return cls(n=n, adj=tuple(tuple(sorted(row)) for row in neighbors))

    def check_vertex(self, v: int) -> None:
        """Raise ValueError unless v is a vertex id of this graph."""
        if not (0 <= v < self.n):
            raise ValueError(f"Vertex must be between 0 and {self.n - 1}, got {v}")

    def neighbors(self, v: int) -> VertexSet:
        """N(v): the neighbors of v, sorted."""
        self.check_vertex(v)
        return self.adj[v]

    def closed_neighborhood(self, v: int) -> VertexSet:
        """N[v]: v together with its neighbors, sorted."""
        self.check_vertex(v)
        return tuple(sorted((v, *self.adj[v])))

    def degree(self, v: int) -> int:
        """Number of neighbors of v."""
        self.check_vertex(v)
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        """Check whether u and v are adjacent.

        Args:
            u: First vertex id
            v: Second vertex id

        Returns:
            True when {u, v} is an edge
        """
        self.check_vertex(u)
        self.check_vertex(v)
        return v in self._neighbor_set(u)

    def edges(self) -> list[tuple[int, int]]:
        """All edges as (u, v) with u < v, in ascending order."""
        return [(u, v) for u, row in enumerate(self.adj) for v in row if u < v]

    def edge_count(self) -> int:
        """Number of edges."""
        return sum(len(row) for row in self.adj) // 2


def _is_vertex_id(token: str) -> bool:
    # str.isdigit also accepts superscripts and non-Latin digits
    return token.isascii() and token.isdigit()


def parse_edge_list(text: str) -> Graph:
    """Parse line-oriented edge-list text into a simple graph.

    Lines starting with '#' and blank lines are ignored. An optional header
    "n <count>" before the first edge fixes the vertex count; otherwise the
    count is one more than the largest id seen.

    Raises:
        EdgeListParseError: On self-loops, malformed lines or ids above the header count
    """
    header_n: int | None = None
    edges: list[tuple[int, int]] = []
    max_id = -1

    for line_number, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()

        if tokens[0] == "n":
            if header_n is not None or edges:
                raise EdgeListParseError(
                    line_number, "header 'n <count>' must come once, before any edge"
                )
            if len(tokens) != 2 or not _is_vertex_id(tokens[1]):
                raise EdgeListParseError(line_number, f"malformed header {line!r}")
            header_n = int(tokens[1])
            continue

        if len(tokens) != 2 or not all(_is_vertex_id(token) for token in tokens):
            raise EdgeListParseError(line_number, f"expected 'u v', got {line!r}")
        u, v = int(tokens[0]), int(tokens[1])
        if u == v:
            raise EdgeListParseError(line_number, f"self-loop on vertex {u}")
        if header_n is not None and max(u, v) >= header_n:
            raise EdgeListParseError(
                line_number, f"vertex id {max(u, v)} exceeds header count {header_n}"
            )
        edges.append((u, v))
        max_id = max(max_id, u, v)

    n = header_n if header_n is not None else max_id + 1
    graph = Graph.from_edges(n, edges)
    logger.debug("Parsed edge list: n=%d, m=%d", graph.n, graph.edge_count())
    return graph


def format_edge_list(graph: Graph) -> str:
    """Serialize a graph as edge-list text.

    The "n <count>" header is written only when the max-id rule would not
    recover the vertex count (trailing isolated vertices).
    """
    edges = graph.edges()
    implied_n = 1 + max((v for _, v in edges), default=-1)
    lines = [] if implied_n == graph.n else [f"n {graph.n}"]
    lines.extend(f"{u} {v}" for u, v in edges)
    return "".join(f"{line}\n" for line in lines)


def max_degree(graph: Graph) -> int:
    """Maximum degree; 0 for empty or edgeless graphs."""
    return max((len(row) for row in graph.adj), default=0)


def ball(graph: Graph, v: int, radius: int) -> VertexSet:
    """All vertices within distance `radius` of v, by breadth-first search.

    Args:
        graph: The graph
        v: Center vertex
        radius: Maximum distance (nonnegative)

    Returns:
        Sorted vertex set, always containing v
    """
    graph.check_vertex(v)
    if radius < 0:
        raise ValueError("Radius must be nonnegative")

    dist = {v: 0}
    queue = deque([v])
    while queue:
        u = queue.popleft()
        if dist[u] == radius:
            continue
        for w in graph.adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return tuple(sorted(dist))


def induced_subgraph(graph: Graph, vertices: Iterable[int]) -> tuple[Graph, dict[int, int]]:
    """Subgraph induced on `vertices`.

    Returns:
        (subgraph, id_map) where id_map is the order-preserving bijection
        from old ids to the new ids 0..|vertices|-1
    """
    kept = sorted(set(vertices))
    for v in kept:
        graph.check_vertex(v)
    id_map = {old: new for new, old in enumerate(kept)}
    adj = tuple(
        tuple(id_map[u] for u in graph.adj[old] if u in id_map) for old in kept
    )
    return Graph(n=len(kept), adj=adj), id_map


class GraphKind(Enum):
    """Graph families the generator knows how to build."""

    PATH = "path"
    CYCLE = "cycle"
    COMPLETE = "complete"
    STAR = "star"
    GRID = "grid"
    GNP = "gnp"
    TOWER = "tower"


# Positional parameters accepted after the kind name, in order.
_KIND_PARAMS: dict[GraphKind, tuple[str, ...]] = {
    GraphKind.PATH: ("n",),
    GraphKind.CYCLE: ("n",),
    GraphKind.COMPLETE: ("n",),
    GraphKind.STAR: ("n",),
    GraphKind.GRID: ("rows", "cols"),
    GraphKind.GNP: ("n", "p", "seed"),
    GraphKind.TOWER: ("n",),
}


@dataclass(frozen=True)
class GraphSpec:
    """Parameters of a generated graph.

    `n` is the vertex count for path/cycle/complete/gnp, the leaf count for
    star and the level count for tower.
    """

    kind: GraphKind
    n: int = 0
    p: float = 0.0
    seed: int = 0
    rows: int = 0
    cols: int = 0

    def __post_init__(self):
        if min(self.n, self.rows, self.cols, self.seed) < 0:
            raise ValueError("Generator sizes and seed must be nonnegative")
        if not (0.0 <= self.p <= 1.0):
            raise ValueError(f"Edge probability must be between 0 and 1, got {self.p}")

    @classmethod
    def from_tokens(cls, tokens: list[str]) -> "GraphSpec":
        """Build a spec from "kind arg..." tokens, e.g. ["gnp", "100", "0.1", "42"].

        Raises:
            ValueError: On unknown kinds or wrong parameter counts/values
        """
        if not tokens:
            raise ValueError("Missing graph kind")
        try:
            kind = GraphKind(tokens[0])
        except ValueError:
            known = ", ".join(k.value for k in GraphKind)
            raise ValueError(f"Unknown graph kind {tokens[0]!r} (known: {known})") from None
        names = _KIND_PARAMS[kind]
        args = tokens[1:]
        if len(args) != len(names):
            raise ValueError(f"{kind.value} expects parameters: {' '.join(names)}")
        values: dict[str, int | float] = {}
        for name, arg in zip(names, args, strict=True):
            try:
                values[name] = float(arg) if name == "p" else int(arg)
            except ValueError:
                raise ValueError(f"Invalid value {arg!r} for {name}") from None
        return cls(kind=kind, **values)  # type: ignore[arg-type]

    def describe(self) -> str:
        """Tokens that rebuild this spec, e.g. "grid 3 4"."""
        names = _KIND_PARAMS[self.kind]
        return " ".join([self.kind.value, *(str(getattr(self, name)) for name in names)])


def generate(spec: GraphSpec) -> Graph:
    """Build the graph a spec describes; gnp is deterministic in its seed."""
    n = spec.n
    if spec.kind == GraphKind.PATH:
        return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)))
    if spec.kind == GraphKind.CYCLE:
        edges = [(i, i + 1) for i in range(n - 1)]
        if n >= 3:
            edges.append((n - 1, 0))
        return Graph.from_edges(n, edges)
    if spec.kind == GraphKind.COMPLETE:
        return Graph.from_edges(n, ((u, v) for u in range(n) for v in range(u + 1, n)))
    if spec.kind == GraphKind.STAR:
        return Graph.from_edges(n + 1, ((0, leaf) for leaf in range(1, n + 1)))
    if spec.kind == GraphKind.GRID:
        return _grid(spec.rows, spec.cols)
    if spec.kind == GraphKind.GNP:
        return _gnp(n, spec.p, spec.seed)
    return _tower(n)


def _grid(rows: int, cols: int) -> Graph:
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return Graph.from_edges(rows * cols, edges)


def _gnp(n: int, p: float, seed: int) -> Graph:
    rng = np.random.default_rng(seed)
    us, vs = np.triu_indices(n, k=1)
    keep = rng.random(us.size) < p
    return Graph.from_edges(n, zip(us[keep].tolist(), vs[keep].tolist(), strict=True))


def _tower(levels: int) -> Graph:
    """Stacked levels (a_i, h_i) = (2i, 2i+1) plus apex z = 2*levels.

    h_i is adjacent to a_i, to every vertex of later levels and to z, so the
    ascending-id greedy peels exactly one level per layer and z survives
    every layer.
    """
    apex = 2 * levels
    edges = []
    for i in range(levels):
        hub = 2 * i + 1
        edges.append((2 * i, hub))
        later = [w for j in range(i + 1, levels) for w in (2 * j, 2 * j + 1)]
        edges.extend((hub, w) for w in [*later, apex])
    return Graph.from_edges(apex + 1, edges)
