import io
import json
from pathlib import Path

import pytest

from domains.coordination.cfcn_coordination import PipelineConfig
from domains.graph.graph_domain import GraphKind, GraphSpec
from ui.bench_runner import (
    CSV_HEADER,
    FAILED_BUDGET,
    BenchCell,
    BenchRecord,
    bound_ratio,
    delta_cells,
    exceeds_pinned_ratio,
    gnp_grid_cells,
    graph_cells,
    parse_int_list,
    parse_seed_list,
    run_bench,
    run_cell,
    summarize,
    write_csv,
)


class TestCellBuilders:
    """Test turning sweep specs into cells."""

    def test_parse_int_list(self):
        """Test comma lists, including the empty one."""
        assert parse_int_list("1,2, 3") == [1, 2, 3]
        assert parse_int_list("") == []

    def test_parse_seed_list_rejects_negatives(self):
        """Test negative seeds fail when the sweep is built."""
        assert parse_seed_list("0,5") == [0, 5]
        with pytest.raises(ValueError, match="Seeds must be non-negative"):
            parse_seed_list("1,-1")

    def test_delta_cells(self):
        """Test p = delta / (n - 1) and one cell per seed."""
        cells = delta_cells([8], 65, [1, 2])

        assert [cell.seed for cell in cells] == [1, 2]
        assert cells[0].spec == GraphSpec(GraphKind.GNP, n=65, p=0.125, seed=1)

    def test_gnp_grid_cells(self):
        """Test probabilities vary slowest and seeds fastest."""
        cells = gnp_grid_cells("200:0.02,0.05", [1, 2])

        assert [(cell.spec.p, cell.seed) for cell in cells] == [
            (0.02, 1),
            (0.02, 2),
            (0.05, 1),
            (0.05, 2),
        ]

    def test_gnp_grid_requires_probabilities(self):
        """Test a grid spec without ':' is rejected."""
        with pytest.raises(ValueError, match="Expected 'N:P1,P2,...'"):
            gnp_grid_cells("200", [1])

    def test_graph_cells_gnp_takes_the_seed(self):
        """Test gnp cells use the cell seed as the generator seed."""
        (cell,) = graph_cells("gnp:100,0.1", [7])

        assert cell.spec == GraphSpec(GraphKind.GNP, n=100, p=0.1, seed=7)

    def test_graph_cells_named_family(self):
        """Test other kinds ignore the seed when generating."""
        cells = graph_cells("grid:3,4", [1, 2])

        assert {cell.spec for cell in cells} == {GraphSpec(GraphKind.GRID, rows=3, cols=4)}


class TestRecords:
    """Test rows, ratios and summaries."""

    def test_bound_ratio(self):
        """Test the ratio is undefined below delta = 2 and total / 16 at delta = 16."""
        assert bound_ratio(5, 1) is None
        assert bound_ratio(5, 2) == 5.0
        assert bound_ratio(32, 16) == 2.0

    def test_row_format(self):
        """Test column formatting and empty optional fields."""
        record = BenchRecord(kind="path", n=10, p=0.0, seed=1, delta=2, total_colors=3, ratio=3.0)

        assert record.to_row() == [
            "path", "10", "0", "1", "2", "0", "3", "", "0", "0", "0", "0.000", "3.000000",
        ]
        assert len(record.to_row()) == len(CSV_HEADER)

    def test_failure_marker(self):
        """Test a failed row carries its marker in total_colors."""
        record = BenchRecord(kind="tower", n=61, p=0.0, seed=0, failure=FAILED_BUDGET)

        assert record.to_row()[CSV_HEADER.index("total_colors")] == FAILED_BUDGET

    def test_summary_ignores_failures(self):
        """Test failed rows are counted but not averaged."""
        records = [
            BenchRecord(kind="path", n=3, p=0.0, seed=1, ratio=2.0),
            BenchRecord(kind="path", n=3, p=0.0, seed=2, ratio=4.0, doublings=1),
            BenchRecord(kind="path", n=3, p=0.0, seed=3, failure=FAILED_BUDGET),
        ]
        summary = summarize(records)

        assert summary.rows == 3
        assert summary.failures == 1
        assert summary.budget_failures == 1
        assert summary.max_ratio == 4.0
        assert summary.mean_ratio == 3.0
        assert summary.runs_with_doublings == 1
        assert "max_ratio=4.0000" in summary.describe()

    def test_pinned_ratio_tolerance(self):
        """Test up to 10% above the pinned value is accepted."""
        summary = summarize([BenchRecord(kind="path", n=3, p=0.0, seed=1, ratio=1.05)])

        assert not exceeds_pinned_ratio(summary, 1.0)
        assert exceeds_pinned_ratio(summary, 0.9)
        assert not exceeds_pinned_ratio(summarize([]), 0.1)

    def test_write_csv(self):
        """Test the header comes first and rows follow in order."""
        stream = io.StringIO()
        write_csv([BenchRecord(kind="path", n=3, p=0.0, seed=1)], stream)

        lines = stream.getvalue().splitlines()
        assert lines[0] == ",".join(CSV_HEADER)
        assert lines[1].startswith("path,3,0,1,")


class TestRunCell:
    """Test running single cells."""

    def test_successful_cell(self):
        """Test a path cell is verified and gets its ratio."""
        record = run_cell(BenchCell(GraphSpec(GraphKind.PATH, n=40), 1), PipelineConfig(), True)

        assert record.failure is None
        assert record.delta == 2
        assert record.ratio == float(record.total_colors)
        assert record.baseline_colors == 2

    def test_budget_failure_is_recorded(self):
        """Test a starved palette becomes a FAILED:budget row instead of raising."""
        config = PipelineConfig(c1=0.01, max_rounds_factor=1, max_doublings=0)
        record = run_cell(BenchCell(GraphSpec(GraphKind.TOWER, n=30), 0), config, False)

        assert record.failure == FAILED_BUDGET
        assert record.delta == 60
        assert record.k_target == 24

    def test_run_bench_keeps_cell_order(self):
        """Test serial runs return one record per cell in order."""
        cells = graph_cells("cycle:9", [3, 1, 2])
        records = run_bench(cells, PipelineConfig())

        assert [record.seed for record in records] == [3, 1, 2]


@pytest.fixture(scope="module")
def sweep_baseline() -> dict:
    path = Path(__file__).parent / "bench_baseline.json"
    return json.loads(path.read_text(encoding="utf-8"))["delta_sweep"]


@pytest.mark.slow
class TestPinnedDeltaSweep:
    """Test the near-regular degree sweep against its recorded baseline."""

    @pytest.fixture(scope="class")
    def sweep(self, sweep_baseline):
        cells = delta_cells(sweep_baseline["deltas"], sweep_baseline["n"], sweep_baseline["seeds"])
        records = run_bench(cells, PipelineConfig(c1=sweep_baseline["c1"]))
        return records, summarize(records)

    def test_every_row_succeeds(self, sweep, sweep_baseline):
        """Test all cells color and verify without failure markers."""
        records, summary = sweep

        assert summary.rows == sweep_baseline["rows"]
        assert summary.failures == 0
        assert all(record.ratio is not None for record in records)

    def test_ratio_within_pinned_tolerance(self, sweep, sweep_baseline):
        """Test max total / (log2 delta)^2 stays within 10% of the recorded value."""
        _, summary = sweep

        assert not exceeds_pinned_ratio(summary, sweep_baseline["max_ratio"])

    def test_doublings_are_rare(self, sweep):
        """Test at least 95% of runs never double the palette."""
        records, summary = sweep

        assert summary.runs_with_doublings <= 0.05 * len(records)

    def test_sweep_is_reproducible(self, sweep, sweep_baseline):
        """Test the first cell of each degree gives the same row when rerun."""
        records, _ = sweep
        seeds = len(sweep_baseline["seeds"])
        firsts = records[::seeds]
        cells = delta_cells(sweep_baseline["deltas"], sweep_baseline["n"], sweep_baseline["seeds"][:1])

        again = run_bench(cells, PipelineConfig(c1=sweep_baseline["c1"]))

        assert [r.total_colors for r in again] == [r.total_colors for r in firsts]
        assert [r.doublings for r in again] == [r.doublings for r in firsts]
