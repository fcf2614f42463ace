import math
from math import inf

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sparsepath import (
    SolveStats,
    WeightMode,
    aggregate_stats,
    apply_weight_mode,
    apsp,
    bellman_ford_sssp,
    dijkstra_sssp,
    floyd_warshall_apsp,
    format_distance_row,
    generate_random_graph,
    govm_sssp,
    gsvm_sssp,
    mssp,
    seed_source,
)
from _bruteforce import walk_distances
from _gen import edges_of, graph_with_negative_cycle, random_graph
from conftest import make_csr

seeds = st.integers(min_value=0, max_value=2**32 - 1)


class TestSeedSource:
    def test_parallel_edges_take_min(self):
        g = make_csr(2, [(0, 1, 2.0), (0, 1, 1.0)])
        alpha, delta = [0.0, inf], [False, False]
        seed_source(g, 0, alpha, delta)
        assert alpha == [0.0, 1.0]
        assert delta == [False, True]

    def test_isolated_source(self):
        g = make_csr(3, [(1, 2, 1.0)])
        alpha, delta = [0.0, inf, inf], [False] * 3
        seed_source(g, 0, alpha, delta)
        assert alpha == [0.0, inf, inf]
        assert delta == [False] * 3
        dv, _, stats = govm_sssp(g, 0)
        assert stats.outer_steps == 2  # one empty round and done

    def test_self_loop_blocked_by_source_guard(self):
        g = make_csr(1, [(0, 0, -1.0)])
        alpha, delta = [0.0], [False]
        stats = SolveStats()
        seed_source(g, 0, alpha, delta, stats=stats)
        assert alpha == [0.0]
        assert delta == [False]
        assert stats.writes == 0
        assert stats.negative_cycle  # a negative self-loop is a negative cycle

    def test_counts_discoveries(self, three_node):
        alpha, delta = [0.0, inf, inf], [False] * 3
        stats = SolveStats()
        seed_source(three_node, 0, alpha, delta, stats=stats)
        assert stats.first_discoveries == 2
        assert stats.writes == 2


class TestGsvm:
    def test_three_node(self, three_node):
        dv, _, stats = gsvm_sssp(three_node, 0)
        assert dv.dist.tolist() == [0.0, 1.0, 2.0]
        assert not stats.negative_cycle

    def test_single_node(self):
        g = make_csr(1, [])
        dv, _, stats = gsvm_sssp(g, 0)
        assert dv.dist.tolist() == [0.0]
        assert stats.outer_steps == 1
        assert stats.writes == 0

    def test_negative_cycle_flagged(self, neg_cycle_graph):
        dv, _, stats = gsvm_sssp(neg_cycle_graph, 0)
        assert stats.negative_cycle
        assert bellman_ford_sssp(neg_cycle_graph, 0).negative_cycle
        assert stats.outer_steps <= neg_cycle_graph.n

    def test_out_of_range_source(self, three_node):
        with pytest.raises(ValueError, match="out of range"):
            gsvm_sssp(three_node, 3)


class TestGovm:
    def test_three_node_matches_and_does_less_work(self, three_node):
        dv_o, _, st_o = govm_sssp(three_node, 0)
        dv_g, _, st_g = gsvm_sssp(three_node, 0)
        assert dv_o.dist.tolist() == dv_g.dist.tolist() == [0.0, 1.0, 2.0]
        assert st_o.relaxations <= st_g.relaxations

    def test_unit_weight_random_graph_mu_is_one(self):
        g = generate_random_graph(200, 6.0, WeightMode.unit(), seed=11)
        _, _, stats = govm_sssp(g, 0)
        assert stats.re_updates == 0
        assert stats.mu == 1.0

    def test_hand_traced_re_update(self, hand_trace_graph):
        dv, _, stats = govm_sssp(hand_trace_graph, 0)
        # node 1: discovered at 1.9, re-updated to 0.2 through node 2
        assert dv.dist.tolist() == [0.0, 0.2, 0.1]
        assert stats.writes == 3
        assert stats.first_discoveries == 2
        assert stats.re_updates == 1
        assert stats.mu == 1.5
        assert stats.updated_ratio == 0.5
        ref, cyc = walk_distances(3, edges_of(hand_trace_graph), 0)
        assert not cyc
        assert dv.dist.tolist() == ref

    def test_negative_cycle_through_source_detected(self):
        g = make_csr(2, [(0, 1, 1.0), (1, 0, -5.0)])
        dv, _, stats = govm_sssp(g, 0)
        assert stats.negative_cycle
        assert dv.dist[0] == 0.0  # the guard pins the source
        assert bellman_ford_sssp(g, 0).negative_cycle

    def test_unreachable_cycle_not_flagged(self):
        # negative cycle exists but source 0 cannot reach it
        g = make_csr(4, [(0, 1, 1.0), (2, 3, -5.0), (3, 2, 1.0)])
        _, _, stats = govm_sssp(g, 0)
        assert not stats.negative_cycle
        assert not bellman_ford_sssp(g, 0).negative_cycle


class TestStatsAccounting:
    def test_write_identity_and_bounds(self, hand_trace_graph):
        for solver in (gsvm_sssp, govm_sssp):
            _, _, s = solver(hand_trace_graph, 0)
            assert s.writes == s.first_discoveries + s.re_updates
            assert s.mu >= 1.0 or s.first_discoveries == 0
            assert s.outer_steps <= hand_trace_graph.n

    def test_stats_serialize_flat(self, three_node):
        _, _, s = govm_sssp(three_node, 0)
        d = s.as_dict()
        assert d["writes"] == s.writes
        assert set(map(type, d.values())) <= {int, float, bool}


class TestPredecessors:
    def test_pred_source_is_none(self, three_node):
        _, pv, _ = govm_sssp(three_node, 0, record_pred=True)
        assert pv.pred[0] is None
        assert pv.path_to(2) == [0, 1, 2]
        assert pv.path_to(0) == [0]

    def test_unreachable_has_no_path(self):
        g = make_csr(3, [(1, 2, 1.0)])
        _, pv, _ = govm_sssp(g, 0, record_pred=True)
        assert pv.path_to(1) is None

    @given(seeds)
    @settings(max_examples=30, deadline=None)
    def test_witness_sums_to_distance(self, seed):
        g = random_graph(seed, n=30, avg_degree=3.0, regime="mixed")
        dv, pv, stats = govm_sssp(g, 0, record_pred=True)
        assert not stats.negative_cycle
        min_w = {}
        for u, v, w in edges_of(g):
            key = (u, v)
            min_w[key] = min(w, min_w.get(key, inf))
        for j in range(g.n):
            if dv.dist[j] == inf or j == 0:
                continue
            path = pv.path_to(j)
            assert path is not None and path[0] == 0 and path[-1] == j
            total = sum(min_w[(a, b)] for a, b in zip(path, path[1:]))
            assert math.isclose(total, dv.dist[j], rel_tol=0.0, abs_tol=1e-9)


class TestMssp:
    def test_single_source_matches_solver(self, three_node):
        [(dv, stats)] = mssp(three_node, [0], "govm", workers=1)
        dv2, _, stats2 = govm_sssp(three_node, 0)
        assert dv.dist.tolist() == dv2.dist.tolist()
        assert stats.as_dict() == stats2.as_dict()

    def test_all_sources_match_floyd(self, three_node):
        rows = mssp(three_node, range(3), "govm")
        fw = floyd_warshall_apsp(three_node)
        for (dv, _), want in zip(rows, fw.matrix):
            assert dv.dist.tolist() == want.tolist()

    def test_workers_do_not_change_results(self, three_node):
        seq = mssp(three_node, range(3), "govm", workers=1)
        par = mssp(three_node, range(3), "govm", workers=2)
        for (dv_a, st_a), (dv_b, st_b) in zip(seq, par):
            assert dv_a.dist.tolist() == dv_b.dist.tolist()
            assert st_a.as_dict() == st_b.as_dict()

    def test_invalid_source_rejected_before_work(self, three_node):
        with pytest.raises(ValueError, match="out of range"):
            mssp(three_node, [0, 7], "govm")

    def test_unknown_algo(self, three_node):
        with pytest.raises(ValueError, match="unknown solver"):
            mssp(three_node, [0], "dijkstra")


class TestApsp:
    def test_rows_match_floyd(self, three_node):
        rows = []
        apsp(three_node, "govm", sink=rows.append)
        assert [dv.source for dv in rows] == [0, 1, 2]
        fw = floyd_warshall_apsp(three_node)
        for dv in rows:
            assert dv.dist.tolist() == fw.matrix[dv.source].tolist()

    def test_edgeless_graph(self):
        g = make_csr(5, [])
        rows = []
        agg = apsp(g, "govm", sink=rows.append)
        assert len(rows) == 5
        for dv in rows:
            expect = [inf] * 5
            expect[dv.source] = 0.0
            assert dv.dist.tolist() == expect
        assert agg.reachable_sources == 0

    def test_unit_weights_mean_mu_one(self):
        g = generate_random_graph(60, 4.0, WeightMode.unit(), seed=9)
        agg = apsp(g, "govm")
        assert agg.re_updates == 0
        assert agg.mean_mu == 1.0

    def test_sink_failure_propagates(self, three_node):
        def sink(dv):
            raise RuntimeError("boom")

        with pytest.raises(RuntimeError, match="boom"):
            apsp(three_node, "govm", sink=sink)

    def test_aggregate_recomputes_from_detail(self, three_node):
        per_source = mssp(three_node, range(3), "govm")
        agg = aggregate_stats(s for _, s in per_source)
        assert agg.writes == sum(s.writes for _, s in per_source)
        mus = [s.mu for _, s in per_source if s.first_discoveries > 0]
        assert agg.mean_mu == sum(mus) / len(mus)


class TestFormatRow:
    def test_inf_token_and_precision(self):
        g = make_csr(3, [(0, 1, 0.1)])
        dv, _, _ = govm_sssp(g, 0)
        assert format_distance_row(dv) == "0,0,0.10000000000000001,inf"


# ---------------------------------------------------------------------------
# properties over seeded random graphs
# ---------------------------------------------------------------------------


@given(seeds, st.sampled_from(["unit", "uniform02", "mixed"]))
@settings(max_examples=60, deadline=None)
def test_solvers_match_brute_force(seed, regime):
    g = random_graph(seed, n=25, avg_degree=3.0, regime=regime)
    ref, cycle = walk_distances(g.n, edges_of(g), 0)
    assert not cycle  # these regimes never build a negative cycle
    for solver in (gsvm_sssp, govm_sssp):
        dv, _, stats = solver(g, 0)
        assert not stats.negative_cycle
        np.testing.assert_allclose(dv.dist, ref, rtol=0.0, atol=1e-9)


@given(seeds, st.sampled_from(["unit", "uniform02", "mixed"]))
@settings(max_examples=60, deadline=None)
def test_gsvm_govm_identical_and_dominated(seed, regime):
    g = random_graph(seed, n=30, avg_degree=4.0, regime=regime)
    dv_g, _, st_g = gsvm_sssp(g, 0)
    dv_o, _, st_o = govm_sssp(g, 0)
    assert dv_g.dist.tolist() == dv_o.dist.tolist()
    assert st_g.negative_cycle == st_o.negative_cycle
    assert st_o.relaxations <= st_g.relaxations
    assert st_o.outer_steps <= g.n and st_g.outer_steps <= g.n


@given(seeds)
@settings(max_examples=40, deadline=None)
def test_negative_cycle_agreement(seed):
    g, source = graph_with_negative_cycle(seed)
    bf = bellman_ford_sssp(g, source)
    assert bf.negative_cycle
    for solver in (gsvm_sssp, govm_sssp):
        _, _, stats = solver(g, source)
        assert stats.negative_cycle == bf.negative_cycle
        assert stats.outer_steps <= g.n


@given(seeds)
@settings(max_examples=40, deadline=None)
def test_cycle_free_negative_weights_not_flagged(seed):
    g = random_graph(seed, n=30, avg_degree=4.0, regime="mixed")
    bf = bellman_ford_sssp(g, 0)
    assert not bf.negative_cycle
    for solver in (gsvm_sssp, govm_sssp):
        dv, _, stats = solver(g, 0)
        assert not stats.negative_cycle
        np.testing.assert_allclose(dv.dist, bf.dist.dist, rtol=0.0, atol=1e-9)


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_frontier_soundness_and_monotone_distances(seed):
    g = random_graph(seed, n=20, avg_degree=3.0, regime="uniform02")
    records = []
    govm_sssp(g, 0, trace=lambda *args: records.append(args))
    prev_written = None
    prev_alpha = None
    for step, scanned, written, alpha in records:
        if prev_written is not None:
            assert scanned == prev_written  # scan exactly last round's writes
        if prev_alpha is not None:
            assert all(a <= b for a, b in zip(alpha, prev_alpha))  # never increases
        prev_written, prev_alpha = written, alpha
    if records:
        neighbors = {int(c) for c in g.col[g.row_ptr[0] : g.row_ptr[1]]}
        assert set(records[0][1]) <= neighbors  # first frontier comes from the seed
