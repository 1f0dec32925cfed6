import argparse
import json
import logging
import sys
from collections.abc import Sequence
from enum import IntEnum
from pathlib import Path
from typing import Any

from domains.coordination.cfcn_coordination import (
    CfcnPipeline,
    PipelineConfig,
    coloring_document,
    decompose_layers,
)
from domains.decomposition.decomposition_domain import InvariantViolationError
from domains.graph.graph_domain import (
    EdgeListParseError,
    Graph,
    GraphSpec,
    format_edge_list,
    generate,
    parse_edge_list,
)
from domains.hypergraph.hypergraph_domain import (
    MAX_EXACT_POINTS,
    ColoringBudgetExhaustedError,
    InstanceTooLargeError,
)
from domains.oracle.oracle_domain import exact_chi_cn, verify_cfcn

from .bench_runner import (
    delta_cells,
    exceeds_pinned_ratio,
    gnp_grid_cells,
    graph_cells,
    parse_int_list,
    parse_seed_list,
    run_bench,
    summarize,
    write_csv,
)

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


class ExitCode(IntEnum):
    """Process exit codes; fixed so scripts can branch on them."""

    OK = 0
    INVALID = 1
    USAGE = 2
    BUDGET = 3
    MISMATCH = 4


class CommandError(Exception):
    """A command failed in an expected way; carries its exit code."""

    def __init__(self, message: str, code: ExitCode):
        self.code = code
        super().__init__(message)


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise CommandError(f"Cannot read {path}: {e.strerror}", ExitCode.USAGE) from e


def _write_text(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as e:
        raise CommandError(f"Cannot write {path}: {e.strerror}", ExitCode.USAGE) from e


def _load_graph(path: str) -> Graph:
    try:
        return parse_edge_list(_read_text(path))
    except EdgeListParseError as e:
        raise CommandError(f"{path}: {e}", ExitCode.USAGE) from e


def _to_json(document: Any) -> str:
    return json.dumps(document, indent=2, sort_keys=True) + "\n"


def cmd_color(args: argparse.Namespace) -> ExitCode:
    """Color a graph file and write the coloring document."""
    graph = _load_graph(args.input)
    pipeline = CfcnPipeline(PipelineConfig(c1=args.c1), seed=args.seed)
    try:
        coloring, stats = pipeline.run(graph)
    except ColoringBudgetExhaustedError as e:
        raise CommandError(str(e), ExitCode.BUDGET) from e
    except InvariantViolationError as e:
        raise CommandError(str(e), ExitCode.INVALID) from e

    if not verify_cfcn(graph, coloring.colors).valid:
        raise CommandError("Refusing to write an unverified coloring", ExitCode.INVALID)
    _write_text(_to_json(coloring_document(coloring, stats)), args.out)
    return ExitCode.OK


def cmd_verify(args: argparse.Namespace) -> ExitCode:
    """Check a coloring document against a graph file."""
    graph = _load_graph(args.graph)
    try:
        document = json.loads(_read_text(args.coloring))
    except json.JSONDecodeError as e:
        raise CommandError(f"{args.coloring}: invalid JSON ({e.msg})", ExitCode.USAGE) from e

    colors = document.get("colors") if isinstance(document, dict) else document
    # JSON true/false load as bool, an int subclass
    if not isinstance(colors, list) or not all(
        isinstance(c, int) and not isinstance(c, bool) for c in colors
    ):
        raise CommandError(f"{args.coloring}: expected a list of integer colors", ExitCode.USAGE)
    if len(colors) != graph.n:
        raise CommandError(
            f"Coloring has {len(colors)} entries but the graph has {graph.n} vertices",
            ExitCode.MISMATCH,
        )

    report = verify_cfcn(graph, colors)
    if not report.valid:
        print(f"invalid: vertex {report.first_violation} has no unique color in N[v]")
        return ExitCode.INVALID
    print("valid")
    return ExitCode.OK


def cmd_exact(args: argparse.Namespace) -> ExitCode:
    """Print chi_CN of a small graph."""
    graph = _load_graph(args.graph)
    try:
        value = exact_chi_cn(graph, args.max_colors)
    except InstanceTooLargeError as e:
        raise CommandError(str(e), ExitCode.USAGE) from e
    print("exceeds max" if value is None else value)
    return ExitCode.OK


def cmd_gen(args: argparse.Namespace) -> ExitCode:
    """Write a generated graph as an edge list."""
    try:
        spec = GraphSpec.from_tokens([args.kind, *args.params])
    except ValueError as e:
        raise CommandError(str(e), ExitCode.USAGE) from e
    _write_text(format_edge_list(generate(spec)), args.out)
    return ExitCode.OK


def cmd_decompose(args: argparse.Namespace) -> ExitCode:
    """Debug view of the layer decomposition."""
    graph = _load_graph(args.graph)
    decomposition = decompose_layers(graph)
    document = {
        "n": graph.n,
        "k_target": decomposition.k_target,
        "stop_reason": decomposition.stop_reason.value,
        "layers": [
            {"a": list(layer.a), "b": list(layer.b), "c": list(layer.c)}
            for layer in decomposition.layers
        ],
    }
    _write_text(_to_json(document), args.out)
    return ExitCode.OK


def cmd_bench(args: argparse.Namespace) -> ExitCode:
    """Run a sweep and write the CSV; the summary goes to stderr."""
    try:
        seeds = parse_seed_list(args.seeds)
        cells = delta_cells(parse_int_list(args.deltas), args.n, seeds) if args.deltas else []
        for grid in args.gnp_grid:
            cells.extend(gnp_grid_cells(grid, seeds))
        for text in args.graph:
            cells.extend(graph_cells(text, seeds))
    except ValueError as e:
        raise CommandError(f"Invalid sweep spec: {e}", ExitCode.USAGE) from e

    config = PipelineConfig(c1=args.c1)
    records = run_bench(cells, config, with_baseline=args.baseline, workers=args.workers)

    if args.out is None:
        write_csv(records, sys.stdout)
    else:
        try:
            with Path(args.out).open("w", encoding="utf-8", newline="") as stream:
                write_csv(records, stream)
        except OSError as e:
            raise CommandError(f"Cannot write {args.out}: {e.strerror}", ExitCode.USAGE) from e

    summary = summarize(records)
    print(summary.describe(), file=sys.stderr)
    if summary.budget_failures:
        return ExitCode.BUDGET
    if summary.failures:
        return ExitCode.INVALID
    if args.max_ratio is not None and exceeds_pinned_ratio(summary, args.max_ratio):
        print(
            f"max ratio {summary.max_ratio:.4f} exceeds pinned {args.max_ratio:.4f} by more than 10%",
            file=sys.stderr,
        )
        return ExitCode.INVALID
    return ExitCode.OK


def build_parser() -> argparse.ArgumentParser:
    """Build the cfcn parser with one subcommand per operation."""
    parser = argparse.ArgumentParser(
        prog="cfcn",
        description="Conflict-free coloring of closed neighborhoods with O(log^2 Delta) colors.",
    )
    parser.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging level for diagnostics on stderr (default WARNING)",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    color = commands.add_parser("color", help="Color a graph file")
    color.add_argument("input", help="Edge-list file")
    color.add_argument("--seed", type=int, default=0, help="Seed for the randomized stage")
    color.add_argument("--c1", type=float, default=4.0, help="Palette scaling constant")
    color.add_argument("--out", help="Output path (default stdout)")
    color.add_argument("--format", choices=["json"], default="json")
    color.set_defaults(handler=cmd_color)

    verify = commands.add_parser("verify", help="Verify a coloring document")
    verify.add_argument("graph", help="Edge-list file")
    verify.add_argument("coloring", help="Coloring JSON document")
    verify.set_defaults(handler=cmd_verify)

    exact = commands.add_parser("exact", help=f"Exact chi_CN (n <= {MAX_EXACT_POINTS})")
    exact.add_argument("graph", help="Edge-list file")
    exact.add_argument("--max-colors", type=int, default=MAX_EXACT_POINTS)
    exact.set_defaults(handler=cmd_exact)

    gen = commands.add_parser("gen", help="Generate a graph edge list")
    gen.add_argument("kind", help="path|cycle|complete|star|grid|gnp|tower")
    gen.add_argument("params", nargs="*", help="Kind parameters, e.g. 'gnp 100 0.1 42'")
    gen.add_argument("--out", help="Output path (default stdout)")
    gen.set_defaults(handler=cmd_gen)

    decompose = commands.add_parser("decompose", help="Show the layer decomposition")
    decompose.add_argument("graph", help="Edge-list file")
    decompose.add_argument("--out", help="Output path (default stdout)")
    decompose.set_defaults(handler=cmd_decompose)

    bench = commands.add_parser("bench", help="Run a degree sweep and write CSV")
    bench.add_argument("--deltas", default="", help="Target degrees, e.g. 4,8,16")
    bench.add_argument("--n", type=int, default=512, help="Vertex count for --deltas")
    bench.add_argument(
        "--gnp-grid", action="append", default=[], help="N:P1,P2,... (repeatable)"
    )
    bench.add_argument(
        "--graph", action="append", default=[], help="KIND:ARG,... (repeatable)"
    )
    bench.add_argument("--seeds", default="1", help="Seeds, e.g. 1,2,3")
    bench.add_argument("--c1", type=float, default=4.0)
    bench.add_argument("--out", help="CSV path (default stdout)")
    bench.add_argument("--baseline", action="store_true", help="Also run the greedy baseline")
    bench.add_argument("--workers", type=int, default=1)
    bench.add_argument("--max-ratio", type=float, help="Pinned max ratio to guard")
    bench.set_defaults(handler=cmd_bench)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Parse arguments, run one command, and return its exit code."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level, format=LOG_FORMAT, stream=sys.stderr)
    try:
        return int(args.handler(args))
    except CommandError as e:
        print(f"error: {e}", file=sys.stderr)
        return int(e.code)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return int(ExitCode.USAGE)
