import math
from fractions import Fraction

import numpy as np
import pytest

from online_spanners.graph import (Demand, DirectedGraph, distance_in_subgraph, local_graph,
                                   shortest_path_arborescence)
from online_spanners.spanner import (ARBORESCENCE, CONDITIONAL, GREEDY, Mode, OnlineSpanner, SpannerParams,
                                     lp_schedule, params_for, run_spanner)

from conftest import marginal_instance, random_feasible_demands, random_graph


def int_floor_root(num, den, p, q):
    """Largest m with m^q <= (num/den)^p, by integer arithmetic only."""
    m = 0
    while (m + 1) ** q * den ** p <= num ** p:
        m += 1
    return m


# -- parameter profiles ---------------------------------------------------

@pytest.mark.parametrize("n", [2, 5, 10, 32, 100, 243, 1000])
def test_general_profile(n):
    p = params_for("general", n)
    assert p.T == int_floor_root(n, 1, 4, 5) == p.t


@pytest.mark.parametrize("n,d", [(16, 2), (54, 2), (81, 3), (10, 1), (7, 7), (5, 9)])
def test_bounded_d_profile(n, d):
    p = params_for("bounded-d", n, d_opt=d)
    assert p.T == max(1, int_floor_root(n, d, 4, 3))
    assert p.t == pytest.approx((d * n * n) ** (1 / 3), rel=1e-12)


@pytest.mark.parametrize("mode", ["quasimetric", "all-server"])
@pytest.mark.parametrize("n", [8, 27, 30, 64])
def test_dense_profiles(mode, n):
    p = params_for(mode, n)
    assert p.T == int_floor_root(n, 1, 4, 3)
    assert p.t == pytest.approx(n ** (2 / 3), rel=1e-12)


def test_steiner_profile():
    p = params_for("steiner-forest", 8, epsilon=Fraction(1, 12))
    assert p.T == 8 and p.t == pytest.approx(8 ** 0.75)
    p = params_for("steiner-forest", 64, epsilon=0.25)
    assert p.T == 4 and p.t == pytest.approx(64 ** (11 / 12))
    for bad in (None, 0, 1 / 3, 0.5):
        with pytest.raises(ValueError):
            params_for("steiner-forest", 8, epsilon=bad)


def test_exact_integer_profiles():
    assert (params_for("general", 32).T, params_for("general", 32).t) == (16, 16)
    p = params_for("all-server", 8)
    assert (p.T, p.t) == (16, 4) and isinstance(p.t, int)
    p = params_for("bounded-d", 16, d_opt=2)
    assert (p.T, p.t) == (16, 8)
    with pytest.raises(ValueError):
        params_for("bounded-d", 16)
    with pytest.raises(ValueError):
        SpannerParams(Mode.GENERAL, 0, 1.0)


# -- rounds ---------------------------------------------------------------

def test_two_vertex_greedy_round():
    g = DirectedGraph(2, [(0, 1, 2)])
    run = OnlineSpanner(g, SpannerParams(Mode.GENERAL, T=5, t=1.0))
    out = run.process_demand(Demand(0, 1, 2))
    assert out.branch == GREEDY and out.edges_added == [0] and out.settled and not out.repaired


def test_settle_check():
    g = DirectedGraph(3, [(0, 1, 1), (1, 2, 1)])
    run = OnlineSpanner(g, SpannerParams(Mode.GENERAL, T=5, t=1.0))
    assert not run.settle_check(Demand(0, 2, 2))
    run.edges = {0, 1}
    assert run.settle_check(Demand(0, 2, 2))
    assert not run.settle_check(Demand(0, 2, 1))


def test_branch_sequence_and_record_shape():
    g, dems = marginal_instance()
    run = run_spanner(g, dems, SpannerParams(Mode.GENERAL, T=3, t=1.0, seed=4))
    assert [o.branch for o in run.outcomes] == [GREEDY, GREEDY, ARBORESCENCE] + [CONDITIONAL] * 3
    assert run.outcomes[2].roots and not run.outcomes[3].roots
    sizes = [o.num_edges for o in run.outcomes]
    assert sizes == sorted(sizes)


def test_saturated_marginal_skips_conditional_draw():
    g = DirectedGraph(3, [(0, 1, 1), (1, 2, 1), (0, 2, 5)])
    x = np.array([1.0, 1.0, 1.0])
    run = OnlineSpanner(g, SpannerParams(Mode.GENERAL, T=1, t=1.0), x_schedule=[x, x])
    run.process_demand(Demand(0, 2, 5))
    assert run.edges == {0, 1, 2}
    out = run.process_demand(Demand(0, 2, 5))
    assert out.edges_added == [] and np.all(run.p_prev == 1)


def test_all_server_uses_direct_edge():
    g = DirectedGraph(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)])
    run = OnlineSpanner(g, params_for("all-server", 3))
    out = run.process_demand(Demand(0, 2, 2))
    assert out.edges_added == [2]
    g2 = DirectedGraph(3, [(0, 1, 1), (1, 2, 1)])
    with pytest.raises(ValueError):
        OnlineSpanner(g2, params_for("all-server", 3)).process_demand(Demand(0, 2, 2))


def test_steiner_mode_ignores_distance():
    g = DirectedGraph(3, [(0, 1, 5), (1, 2, 5)])
    run = OnlineSpanner(g, params_for("steiner-forest", 3, epsilon=0.1))
    out = run.process_demand(Demand(0, 2, 1))
    assert out.settled and run.edges == {0, 1}


def test_feasibility_monotonicity_and_marginals_on_random_runs(rng):
    for trial in range(60):
        g = random_graph(rng, int(rng.integers(3, 9)), 0.4)
        dems = random_feasible_demands(rng, g, int(rng.integers(1, 7)))
        if not dems:
            continue
        mode = ["general", "bounded-d", "quasimetric"][trial % 3]
        dmax = max(d.d for d in dems)
        run = OnlineSpanner(g, params_for(mode, g.n, d_opt=max(1, dmax), seed=trial))
        prev_p, prev_edges = np.zeros(g.m), set()
        for i, dem in enumerate(dems):
            run.process_demand(dem)
            assert run.edges >= prev_edges
            assert np.all(run.p_prev >= prev_p - 1e-15)
            p = np.minimum(1, run.x * run.params.t * math.log(g.n))
            assert np.allclose(run.p_prev, p)
            for seen in dems[: i + 1]:
                assert distance_in_subgraph(g, run.edges, seen.s, seen.t) <= seen.d
            prev_p, prev_edges = run.p_prev.copy(), set(run.edges)


def test_repair_restores_feasibility():
    # a huge t means a single root; when it lands on an isolated vertex the trees are empty
    g = DirectedGraph(6, [(0, 1, 1), (1, 2, 1), (2, 3, 1)])
    repaired = 0
    for seed in range(30):
        run = OnlineSpanner(g, SpannerParams(Mode.GENERAL, T=1, t=1e6, seed=seed),
                            x_schedule=[np.zeros(3)])
        out = run.process_demand(Demand(0, 3, 3))
        assert out.settled
        repaired += out.repaired
        if out.repaired:
            assert out.repair_edges
    assert repaired > 0


def test_marginal_law_small_sample():
    g, dems = marginal_instance()
    xs = lp_schedule(g, dems)
    t = 0.25
    tree = set()
    for r in range(g.n):
        tree |= shortest_path_arborescence(g, r, "in") | shortest_path_arborescence(g, r, "out")
    free = [k for k in range(g.m) if k not in tree]
    assert free
    seeds = 2000
    counts = np.zeros((len(dems), g.m))
    for seed in range(seeds):
        run = OnlineSpanner(g, SpannerParams(Mode.GENERAL, T=1, t=t, seed=seed), x_schedule=xs)
        for i, dem in enumerate(dems):
            assert not run.process_demand(dem).repaired
            counts[i, sorted(run.edges)] += 1
    p = np.array([np.minimum(1, x * t * math.log(g.n)) for x in xs])
    assert np.max(np.abs(counts / seeds - p)[:, free]) <= 0.05


def test_thick_pairs_meet_sampled_roots():
    n = 12
    edges = [(u, (u + 1) % n, 1) for u in range(n)] + [(u, (u + 3) % n, 2) for u in range(n)]
    g = DirectedGraph(n, edges)
    dem = Demand(0, 6, 8)
    t_param = 6
    assert len(local_graph(g, dem)) >= t_param
    hits = 0
    seeds = 500
    for seed in range(seeds):
        run = OnlineSpanner(g, SpannerParams(Mode.GENERAL, T=1, t=t_param, seed=seed),
                            x_schedule=[np.zeros(g.m)])
        out = run.process_demand(dem)
        hits += bool(set(out.roots) & local_graph(g, dem))
    assert hits / seeds >= 1 - 2 / n


def test_same_seed_same_run():
    g, dems = marginal_instance()
    a = run_spanner(g, dems, SpannerParams(Mode.GENERAL, T=2, t=0.5, seed=9))
    b = run_spanner(g, dems, SpannerParams(Mode.GENERAL, T=2, t=0.5, seed=9))
    assert [vars(o) for o in a.outcomes] == [vars(o) for o in b.outcomes]
