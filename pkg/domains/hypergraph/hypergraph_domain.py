import logging
import math
from collections import Counter
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

logger = logging.getLogger(__name__)

PointSet = tuple[int, ...]

# Exhaustive search is only offered for instances this small.
MAX_EXACT_POINTS = 12
MIN_GAMMA = 2


class InstanceTooLargeError(ValueError):
    """Raised when an exact solver is asked to enumerate an oversize instance."""


class ColoringBudgetExhaustedError(RuntimeError):
    """The resampling colorer ran out of rounds at every palette size it tried."""

    def __init__(self, rounds: int, doublings: int, violations: int, palette_size: int):
        self.rounds = rounds
        self.doublings = doublings
        self.violations = violations
        self.palette_size = palette_size
        super().__init__(
            f"No conflict-free coloring found after {rounds} resample rounds and "
            f"{doublings} palette doublings (last palette {palette_size}, "
            f"{violations} edges still violated)"
        )


@dataclass(frozen=True)
class Hypergraph:
    """Points plus an ordered list of hyperedges.

    labels[i], when present, names what edge i was built from (for residual
    hypergraphs, the graph vertex whose neighborhood it is).
    """

    points: PointSet
    edges: tuple[PointSet, ...]
    labels: tuple[int, ...] | None = None

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.points, self.points[1:], strict=False)):
            raise ValueError("Points must be strictly increasing")
        known = set(self.points)
        for i, edge in enumerate(self.edges):
            if not edge:
                raise ValueError(f"Edge {i} is empty")
            if any(b <= a for a, b in zip(edge, edge[1:], strict=False)):
                raise ValueError(f"Edge {i} must be strictly increasing")
            if not known.issuperset(edge):
                raise ValueError(f"Edge {i} contains points outside the point set")
        if self.labels is not None and len(self.labels) != len(self.edges):
            raise ValueError(
                f"Got {len(self.labels)} labels for {len(self.edges)} edges"
            )

    @classmethod
    def from_edges(
        cls,
        edges: Sequence[Sequence[int]],
        points: Sequence[int] | None = None,
        labels: Sequence[int] | None = None,
    ) -> "Hypergraph":
        """Normalize raw edges; points default to the union of the edges."""
        normalized = tuple(tuple(sorted(set(edge))) for edge in edges)
        if points is None:
            points = [p for edge in normalized for p in edge]
        return cls(
            points=tuple(sorted(set(points))),
            edges=normalized,
            labels=None if labels is None else tuple(labels),
        )

    def without_edge(self, index: int) -> "Hypergraph":
        """Copy of this hypergraph with edge `index` (and its label) removed.

        Args:
            index: Position of the edge to drop

        Returns:
            A hypergraph on the same points
        """
        edges = self.edges[:index] + self.edges[index + 1 :]
        labels = None
        if self.labels is not None:
            labels = self.labels[:index] + self.labels[index + 1 :]
        return Hypergraph(points=self.points, edges=edges, labels=labels)


@dataclass(frozen=True)
class CfParams:
    """Knobs of the randomized conflict-free colorer.

    t and gamma are the edge-size / intersection parameters the palette is
    sized for; c1 scales the palette; the round budget per attempt is
    max_rounds_factor * (#edges + 1).
    """

    t: int
    gamma: int
    c1: float = 4.0
    max_rounds_factor: int = 1000
    max_doublings: int = 10

    def __post_init__(self):
        if self.t < 1:
            raise ValueError("t must be a positive integer")
        if self.gamma < MIN_GAMMA:
            raise ValueError(f"gamma must be at least {MIN_GAMMA}")
        if self.c1 <= 0:
            raise ValueError("c1 must be positive")
        if self.max_rounds_factor < 1:
            raise ValueError("max_rounds_factor must be positive")
        if self.max_doublings < 0:
            raise ValueError("max_doublings must be nonnegative")


@dataclass(frozen=True)
class CfColoring:
    """Result of cf_color."""

    colors: dict[int, int]
    palette_size: int
    rounds_used: int
    doublings_used: int

    @property
    def colors_used(self) -> int:
        """Distinct colors actually assigned."""
        return len(set(self.colors.values()))


@dataclass(frozen=True)
class CfReport:
    """Per-edge witness colors; None marks an edge with no unique color."""

    witnesses: tuple[int | None, ...] = field(default_factory=tuple)

    @property
    def valid(self) -> bool:
        """True when every edge has a witness."""
        return all(w is not None for w in self.witnesses)

    @property
    def violations(self) -> list[int]:
        """Indices of edges with no unique color."""
        return [i for i, w in enumerate(self.witnesses) if w is None]


def palette_size(params: CfParams) -> int:
    """K = max(2, ceil(c1 * t * gamma^(1/t) * log2(gamma)))."""
    raw = params.c1 * params.t * params.gamma ** (1 / params.t) * math.log2(params.gamma)
    # Rounding first keeps float noise in the fractional power out of the ceiling.
    return max(2, math.ceil(round(raw, 9)))


def unique_color(colors: Sequence[int]) -> int | None:
    """Lowest color occurring exactly once in `colors`, or None."""
    counts = Counter(colors)
    singles = [color for color, count in counts.items() if count == 1]
    return min(singles) if singles else None


def verify_cf(hypergraph: Hypergraph, coloring: Mapping[int, int]) -> CfReport:
    """Check the conflict-free condition edge by edge.

    Raises:
        ValueError: If a point of the hypergraph has no color
    """
    missing = [p for p in hypergraph.points if p not in coloring]
    if missing:
        raise ValueError(f"Point {missing[0]} is not colored")
    return CfReport(
        witnesses=tuple(
            unique_color([coloring[p] for p in edge]) for edge in hypergraph.edges
        )
    )


def find_violated_edges(hypergraph: Hypergraph, coloring: Mapping[int, int]) -> list[int]:
    """Indices of edges without a uniquely occurring color, ascending."""
    return verify_cf(hypergraph, coloring).violations


def max_edge_intersection(hypergraph: Hypergraph) -> int:
    """Largest number of other edges (by index) any one edge meets."""
    incidence: dict[int, list[int]] = {}
    for i, edge in enumerate(hypergraph.edges):
        for p in edge:
            incidence.setdefault(p, []).append(i)

    best = 0
    for i, edge in enumerate(hypergraph.edges):
        met = {j for p in edge for j in incidence[p]}
        met.discard(i)
        best = max(best, len(met))
    return best


class _ResampleRun:
    """One resample-until-valid attempt at a fixed palette size.

    Per-edge color counts and the number of singly-occurring colors are kept
    incrementally, so a round costs the total degree of the resampled points.
    """

    def __init__(self, hypergraph: Hypergraph, palette: int, rng: np.random.Generator):
        self.palette = palette
        self.rng = rng
        self.points = hypergraph.points
        index = {p: i for i, p in enumerate(hypergraph.points)}
        self.edges = [[index[p] for p in edge] for edge in hypergraph.edges]
        self.incidence: list[list[int]] = [[] for _ in self.points]
        for ei, edge in enumerate(self.edges):
            for i in edge:
                self.incidence[i].append(ei)

        self.colors: list[int] = rng.integers(0, palette, size=len(self.points)).tolist()
        self.counts = [Counter(self.colors[i] for i in edge) for edge in self.edges]
        self.singles = [
            sum(1 for count in counts.values() if count == 1) for counts in self.counts
        ]
        self.violated = {ei for ei, s in enumerate(self.singles) if s == 0}

    def _shift(self, ei: int, color: int, delta: int) -> None:
        counts = self.counts[ei]
        before = counts[color]
        after = before + delta
        if after:
            counts[color] = after
        else:
            del counts[color]
        if before == 1:
            self.singles[ei] -= 1
        if after == 1:
            self.singles[ei] += 1
        if self.singles[ei]:
            self.violated.discard(ei)
        else:
            self.violated.add(ei)

    def _resample(self, ei: int) -> None:
        edge = self.edges[ei]
        fresh = self.rng.integers(0, self.palette, size=len(edge)).tolist()
        for i, color in zip(edge, fresh, strict=True):
            old = self.colors[i]
            if old == color:
                continue
            for ej in self.incidence[i]:
                self._shift(ej, old, -1)
                self._shift(ej, color, +1)
            self.colors[i] = color

    def run(self, max_rounds: int) -> int | None:
        """Resample the lowest-index violated edge until none is left.

        Returns:
            Rounds used, or None when max_rounds elapsed first
        """
        rounds = 0
        while self.violated:
            if rounds >= max_rounds:
                return None
            self._resample(min(self.violated))
            rounds += 1
        return rounds

    def coloring(self) -> dict[int, int]:
        return dict(zip(self.points, self.colors, strict=True))


def cf_color(hypergraph: Hypergraph, params: CfParams, seed: int) -> CfColoring:
    """Randomized conflict-free coloring with palette doubling.

    Every point starts with a uniform color from a palette_size(params)
    palette; the lowest-index violated edge is then resampled until no edge
    is violated. When the round budget runs out the palette doubles and the
    attempt restarts on a stream spawned from the seed, up to
    params.max_doublings times.

    Args:
        hypergraph: Hypergraph with at least one edge
        params: Palette and budget parameters
        seed: Nonnegative seed; equal inputs give equal results

    Returns:
        A verified coloring; rounds_used sums rounds over all attempts

    Raises:
        ValueError: If the hypergraph has no edges
        ColoringBudgetExhaustedError: If every palette size ran out of rounds
    """
    if not hypergraph.edges:
        raise ValueError("Hypergraph has no edges")

    base = palette_size(params)
    max_rounds = params.max_rounds_factor * (len(hypergraph.edges) + 1)
    streams = np.random.SeedSequence(seed).spawn(params.max_doublings + 1)
    total_rounds = 0
    violations = 0
    palette = base

    for doubling, stream in enumerate(streams):
        palette = base * 2**doubling
        attempt = _ResampleRun(hypergraph, palette, np.random.default_rng(stream))
        rounds = attempt.run(max_rounds)
        if rounds is not None:
            total_rounds += rounds
            coloring = attempt.coloring()
            report = verify_cf(hypergraph, coloring)
            if not report.valid:
                raise AssertionError(f"Resampler returned violated edges {report.violations}")
            logger.debug(
                "CF coloring: palette=%d rounds=%d doublings=%d",
                palette,
                total_rounds,
                doubling,
            )
            return CfColoring(
                colors=coloring,
                palette_size=palette,
                rounds_used=total_rounds,
                doublings_used=doubling,
            )
        total_rounds += max_rounds
        violations = len(attempt.violated)
        logger.warning(
            "Round budget %d exhausted with palette %d (%d edges violated); doubling",
            max_rounds,
            palette,
            violations,
        )

    raise ColoringBudgetExhaustedError(
        rounds=total_rounds,
        doublings=params.max_doublings,
        violations=violations,
        palette_size=palette,
    )


def _has_unique(colors: list[int], edge: list[int]) -> bool:
    return unique_color([colors[i] for i in edge]) is not None


def exact_cf_number(hypergraph: Hypergraph, max_colors: int) -> int | None:
    """Conflict-free chromatic number by exhaustive search.

    Colorings are enumerated in canonical form (the first point gets color 0
    and each point may open at most one new color), and an edge is checked
    as soon as its last point is colored.

    Returns:
        The smallest k <= max_colors that works (0 when there are no points),
        or None when no k up to max_colors does

    Raises:
        InstanceTooLargeError: If there are more than MAX_EXACT_POINTS points
    """
    m = len(hypergraph.points)
    if m > MAX_EXACT_POINTS:
        raise InstanceTooLargeError(
            f"Exact search supports at most {MAX_EXACT_POINTS} points, got {m}"
        )
    index = {p: i for i, p in enumerate(hypergraph.points)}
    closing: list[list[list[int]]] = [[] for _ in range(m)]
    for edge in hypergraph.edges:
        positions = [index[p] for p in edge]
        closing[max(positions)].append(positions)

    colors = [0] * m

    def extend(pos: int, used: int, k: int) -> bool:
        if pos == m:
            return True
        for color in range(min(used + 1, k)):
            colors[pos] = color
            if all(_has_unique(colors, edge) for edge in closing[pos]) and extend(
                pos + 1, max(used, color + 1), k
            ):
                return True
        return False

    for k in range(1 if m else 0, max_colors + 1):
        if extend(0, 0, k):
            return k
    return None
