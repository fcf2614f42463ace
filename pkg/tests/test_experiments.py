import io
import json

import pytest

from sparsepath import (
    GraphSizeError,
    NegativeWeightError,
    WeightMode,
    apply_weight_mode,
    generate_random_graph,
    run_benchmark,
    run_mu_experiment,
    write_report,
)
from conftest import make_csr


@pytest.fixture
def small_random():
    return generate_random_graph(80, 4.0, WeightMode.unit(), seed=21)


class TestMuExperiment:
    def test_baseline_arm_is_exactly_mu_one(self, small_random):
        report = run_mu_experiment(small_random, num_sources=16, seed=5)
        assert report.baseline.re_updates == 0
        assert report.baseline.mean_mu == 1.0
        assert report.baseline.mean_updated_ratio == 0.0

    def test_randomized_arm_mu_at_least_one(self, small_random):
        report = run_mu_experiment(small_random, num_sources=16, seed=5)
        assert report.mean_mu >= 1.0
        assert report.mean_mu == report.randomized.mean_mu
        assert 0.0 <= report.mean_updated_ratio <= 1.0

    def test_seed_determinism(self, small_random):
        a = run_mu_experiment(small_random, num_sources=16, seed=7)
        b = run_mu_experiment(small_random, num_sources=16, seed=7)
        assert a.to_dict() == b.to_dict()

    def test_different_seed_changes_weights(self, small_random):
        a = run_mu_experiment(small_random, num_sources=16, seed=7)
        b = run_mu_experiment(small_random, num_sources=16, seed=8)
        assert a.randomized.writes != b.randomized.writes  # overwhelmingly likely

    def test_clamps_with_note(self):
        g = make_csr(3, [(0, 1, 1.0), (1, 2, 1.0)])
        report = run_mu_experiment(g, num_sources=10, seed=1)
        assert report.sources_sampled == 3
        assert "clamped" in report.notes

    def test_rejects_bad_source_count(self, small_random):
        with pytest.raises(ValueError):
            run_mu_experiment(small_random, num_sources=0, seed=1)

    def test_aggregates_recompute_from_details(self, small_random):
        report = run_mu_experiment(small_random, num_sources=12, seed=3)
        agg = report.randomized
        assert agg.re_updates == agg.writes - agg.first_discoveries
        assert report.sources_sampled == agg.sources


class TestBenchmark:
    def test_work_dominance_measured(self, small_random):
        g = apply_weight_mode(
            small_random, WeightMode.random_uniform(0.0, 2.0, seed=2)
        )
        r_govm = run_benchmark(g, "govm", "mssp", sources=[0, 5, 9])
        r_gsvm = run_benchmark(g, "gsvm", "mssp", sources=[0, 5, 9])
        assert r_govm.relaxations <= r_gsvm.relaxations

    def test_median_over_three_repeats(self, three_node):
        record = run_benchmark(three_node, "govm", "sssp", sources=[0], repeats=3)
        assert record.repeats == 3
        assert len(record.times) == 3
        assert record.wall_time == sorted(record.times)[1]

    def test_workers_do_not_change_relaxations(self, small_random):
        r1 = run_benchmark(small_random, "govm", "mssp", sources=[0, 3, 6], workers=1)
        r2 = run_benchmark(small_random, "govm", "mssp", sources=[0, 3, 6], workers=2)
        assert r1.relaxations == r2.relaxations

    def test_dijkstra_rejects_negative_weights_before_timing(self):
        g = make_csr(2, [(0, 1, -1.0)])
        with pytest.raises(NegativeWeightError):
            run_benchmark(g, "dijkstra", "sssp", sources=[0])

    def test_floyd_rejects_over_cap(self, small_random):
        with pytest.raises(GraphSizeError):
            run_benchmark(small_random, "floyd", "apsp", floyd_cap=10)

    def test_repeats_below_three_rejected(self, three_node):
        with pytest.raises(ValueError, match="repeats"):
            run_benchmark(three_node, "govm", "sssp", sources=[0], repeats=1)

    def test_unknown_algorithm_and_task(self, three_node):
        with pytest.raises(ValueError, match="unknown algorithm"):
            run_benchmark(three_node, "astar", "sssp", sources=[0])
        with pytest.raises(ValueError, match="unknown task"):
            run_benchmark(three_node, "govm", "walk", sources=[0])

    def test_sssp_needs_exactly_one_source(self, three_node):
        with pytest.raises(ValueError, match="exactly one"):
            run_benchmark(three_node, "govm", "sssp", sources=[0, 1])
        with pytest.raises(ValueError, match="requires explicit"):
            run_benchmark(three_node, "govm", "mssp")

    def test_oracle_algorithms_run_and_record(self, three_node):
        for algo in ("dijkstra", "bellman_ford", "floyd"):
            record = run_benchmark(three_node, algo, "apsp")
            assert record.algorithm == algo
            assert record.relaxations > 0
            assert record.workers == 1  # reference algorithms are single-threaded


class TestWriteReport:
    def test_csv_one_header_one_row(self, small_random):
        report = run_mu_experiment(small_random, num_sources=8, seed=2)
        buf = io.StringIO()
        write_report([report], "csv", buf)
        lines = buf.getvalue().strip().splitlines()
        assert len(lines) == 2
        assert lines[0].startswith("graph_id,sources_sampled,baseline_sources")

    def test_empty_records_rejected(self):
        with pytest.raises(ValueError, match="no records"):
            write_report([], "csv", io.StringIO())

    def test_json_round_trip(self, small_random):
        report = run_mu_experiment(small_random, num_sources=8, seed=2)
        buf = io.StringIO()
        write_report([report], "json", buf)
        assert json.loads(buf.getvalue()) == [report.to_dict()]

    def test_bench_record_json_round_trip(self, three_node):
        record = run_benchmark(three_node, "govm", "sssp", sources=[0])
        buf = io.StringIO()
        write_report([record], "json", buf)
        assert json.loads(buf.getvalue()) == [record.to_dict()]

    def test_idempotent(self, small_random):
        report = run_mu_experiment(small_random, num_sources=8, seed=2)
        a, b = io.StringIO(), io.StringIO()
        write_report([report], "csv", a)
        write_report([report], "csv", b)
        assert a.getvalue() == b.getvalue()

    def test_mixed_records_rejected_for_csv(self, small_random, three_node):
        mu = run_mu_experiment(small_random, num_sources=4, seed=2)
        bench = run_benchmark(three_node, "govm", "sssp", sources=[0])
        with pytest.raises(ValueError, match="identical fields"):
            write_report([mu, bench], "csv", io.StringIO())

    def test_unknown_format(self, three_node):
        record = run_benchmark(three_node, "govm", "sssp", sources=[0])
        with pytest.raises(ValueError, match="unknown report format"):
            write_report([record], "xml", io.StringIO())

    def test_writes_to_path(self, tmp_path, three_node):
        record = run_benchmark(three_node, "govm", "sssp", sources=[0])
        out = tmp_path / "report.json"
        write_report([record], "json", out)
        assert json.loads(out.read_text()) == [record.to_dict()]
