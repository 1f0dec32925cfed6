"""
Degree-sweep benchmark harness.

Builds a list of (graph, seed) cells, runs the CFCN pipeline on each, re-checks
every coloring, and writes one CSV row per cell in cell order.
"""

import csv
import logging
import math
import time
from collections.abc import Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from functools import partial
from typing import TextIO

import numpy as np

from domains.coordination.cfcn_coordination import (
    MIN_THEOREM_DELTA,
    CfcnPipeline,
    PipelineConfig,
    iteration_cap,
)
from domains.decomposition.decomposition_domain import InvariantViolationError
from domains.graph.graph_domain import GraphKind, GraphSpec, generate, max_degree
from domains.hypergraph.hypergraph_domain import ColoringBudgetExhaustedError
from domains.oracle.oracle_domain import count_colors, greedy_cfcn_baseline, verify_cfcn

logger = logging.getLogger(__name__)

CSV_HEADER = (
    "kind",
    "n",
    "p",
    "seed",
    "delta",
    "k_target",
    "total_colors",
    "baseline_colors",
    "K",
    "doublings",
    "rounds",
    "wall_time_ms",
    "ratio",
)

# Written into total_colors for rows whose run did not produce a coloring.
FAILED_BUDGET = "FAILED:budget"
FAILED_INVALID = "FAILED:invalid"

# Allowed slack over a pinned max ratio before the sweep counts as a regression.
RATIO_TOLERANCE = 0.10


@dataclass(frozen=True)
class BenchCell:
    """One graph to build and the pipeline seed to run it with."""

    spec: GraphSpec
    seed: int


@dataclass(frozen=True)
class BenchRecord:
    """One CSV row. failure is None for successful, verified runs."""

    kind: str
    n: int
    p: float
    seed: int
    delta: int = 0
    k_target: int = 0
    total_colors: int = 0
    baseline_colors: int | None = None
    palette_size: int = 0
    doublings: int = 0
    rounds: int = 0
    wall_time_ms: float = 0.0
    ratio: float | None = None
    failure: str | None = None

    def to_row(self) -> list[str]:
        """Format the record as CSV fields in CSV_HEADER order."""
        total = self.failure or str(self.total_colors)
        return [
            self.kind,
            str(self.n),
            f"{self.p:g}",
            str(self.seed),
            str(self.delta),
            str(self.k_target),
            total,
            "" if self.baseline_colors is None else str(self.baseline_colors),
            str(self.palette_size),
            str(self.doublings),
            str(self.rounds),
            f"{self.wall_time_ms:.3f}",
            "" if self.ratio is None else f"{self.ratio:.6f}",
        ]


@dataclass(frozen=True)
class BenchSummary:
    """Aggregates over one sweep."""

    rows: int
    failures: int
    budget_failures: int
    max_ratio: float | None
    mean_ratio: float | None
    runs_with_doublings: int

    def describe(self) -> str:
        """One-line summary for stderr."""

        def fmt(value: float | None) -> str:
            return "n/a" if value is None else f"{value:.4f}"

        return (
            f"rows={self.rows} failures={self.failures} "
            f"max_ratio={fmt(self.max_ratio)} mean_ratio={fmt(self.mean_ratio)} "
            f"runs_with_doublings={self.runs_with_doublings}"
        )


def bound_ratio(total_colors: int, delta: int) -> float | None:
    """total_colors / (log2 delta)^2, or None when delta < 2."""
    if delta < MIN_THEOREM_DELTA:
        return None
    return total_colors / math.log2(delta) ** 2


def parse_int_list(text: str) -> list[int]:
    """"1,2,3" -> [1, 2, 3]; empty text gives an empty list."""
    return [int(part) for part in text.split(",") if part.strip()]


def parse_seed_list(text: str) -> list[int]:
    """Like parse_int_list, but every seed must be non-negative."""
    seeds = parse_int_list(text)
    negative = [seed for seed in seeds if seed < 0]
    if negative:
        raise ValueError(f"Seeds must be non-negative, got {negative}")
    return seeds


def delta_cells(deltas: Iterable[int], n: int, seeds: Sequence[int]) -> list[BenchCell]:
    """Near-regular G(n, p) cells with expected degree delta: p = delta / (n - 1)."""
    cells = []
    for delta in deltas:
        p = min(1.0, delta / (n - 1)) if n > 1 else 0.0
        cells.extend(
            BenchCell(GraphSpec(GraphKind.GNP, n=n, p=p, seed=seed), seed) for seed in seeds
        )
    return cells


def gnp_grid_cells(grid: str, seeds: Sequence[int]) -> list[BenchCell]:
    """Cells for a grid spec "N:P1,P2,..." (one n, several edge probabilities)."""
    n_text, _, p_text = grid.partition(":")
    if not p_text:
        raise ValueError(f"Expected 'N:P1,P2,...', got {grid!r}")
    n = int(n_text)
    return [
        BenchCell(GraphSpec(GraphKind.GNP, n=n, p=float(p), seed=seed), seed)
        for p in p_text.split(",")
        for seed in seeds
    ]


def graph_cells(text: str, seeds: Sequence[int]) -> list[BenchCell]:
    """Cells for "KIND:ARG,ARG" such as "path:200", "grid:10,20" or "gnp:100,0.1".

    For gnp the per-cell seed is appended as the generator seed.
    """
    kind, _, arg_text = text.partition(":")
    args = [arg for arg in arg_text.split(",") if arg]
    cells = []
    for seed in seeds:
        tokens = [kind, *args, str(seed)] if kind == GraphKind.GNP.value else [kind, *args]
        cells.append(BenchCell(GraphSpec.from_tokens(tokens), seed))
    return cells


def run_cell(cell: BenchCell, config: PipelineConfig, with_baseline: bool) -> BenchRecord:
    """Generate, color, and re-verify one cell.

    Budget exhaustion and failed verification are reported in the record
    rather than raised, so one bad cell does not stop a sweep.
    """
    graph = generate(cell.spec)
    delta = max_degree(graph)
    record = BenchRecord(
        kind=cell.spec.kind.value,
        n=graph.n,
        p=cell.spec.p,
        seed=cell.seed,
        delta=delta,
        k_target=iteration_cap(delta),
    )
    pipeline = CfcnPipeline(config, seed=cell.seed)

    start = time.perf_counter()
    try:
        coloring, stats = pipeline.run(graph)
    except ColoringBudgetExhaustedError as e:
        logger.error("Cell %s seed %d: %s", cell.spec.describe(), cell.seed, e)
        return replace(record, failure=FAILED_BUDGET)
    except InvariantViolationError as e:
        logger.error("Cell %s seed %d: %s", cell.spec.describe(), cell.seed, e)
        return replace(record, failure=FAILED_INVALID)
    elapsed_ms = (time.perf_counter() - start) * 1000

    if not verify_cfcn(graph, coloring.colors).valid:
        return replace(record, failure=FAILED_INVALID)

    baseline_colors = None
    if with_baseline:
        baseline = greedy_cfcn_baseline(graph)
        if not verify_cfcn(graph, baseline).valid:
            return replace(record, failure=FAILED_INVALID)
        baseline_colors = count_colors(baseline)

    return replace(
        record,
        total_colors=stats.total_colors,
        baseline_colors=baseline_colors,
        palette_size=stats.palette_size,
        doublings=stats.doublings,
        rounds=stats.rounds,
        wall_time_ms=elapsed_ms,
        ratio=bound_ratio(stats.total_colors, stats.delta),
    )


def run_bench(
    cells: Sequence[BenchCell],
    config: PipelineConfig,
    with_baseline: bool = False,
    workers: int = 1,
) -> list[BenchRecord]:
    """Run every cell; records come back in cell order whatever the worker count."""
    task = partial(run_cell, config=config, with_baseline=with_baseline)
    if workers <= 1 or len(cells) <= 1:
        return [task(cell) for cell in cells]
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(task, cells))


def summarize(records: Sequence[BenchRecord]) -> BenchSummary:
    """Aggregate a sweep.

    Args:
        records: Rows from run_bench

    Returns:
        Row and failure counts, plus max and mean ratio over successful rows
    """
    ratios = np.array([r.ratio for r in records if r.failure is None and r.ratio is not None])
    return BenchSummary(
        rows=len(records),
        failures=sum(1 for r in records if r.failure),
        budget_failures=sum(1 for r in records if r.failure == FAILED_BUDGET),
        max_ratio=float(ratios.max()) if ratios.size else None,
        mean_ratio=float(ratios.mean()) if ratios.size else None,
        runs_with_doublings=sum(1 for r in records if r.doublings > 0),
    )


def exceeds_pinned_ratio(summary: BenchSummary, pinned: float) -> bool:
    """True when the measured max ratio is more than 10% above the pinned value."""
    if summary.max_ratio is None:
        return False
    return summary.max_ratio > pinned * (1 + RATIO_TOLERANCE)


def write_csv(records: Iterable[BenchRecord], stream: TextIO) -> None:
    """Write the header and one row per record to stream."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for record in records:
        writer.writerow(record.to_row())
