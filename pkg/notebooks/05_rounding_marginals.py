"""Monte Carlo check of the conditional rounding marginals.

Edges that no shortest-path tree uses are only ever bought by rounding, so the
fraction of seeds in which such an edge is present after round i should match
p_i = min(1, x_i t ln n).

Run: python3 notebooks/05_rounding_marginals.py
"""
import math

import numpy as np

from online_spanners import (Demand, DirectedGraph, Mode, OnlineSpanner, SpannerParams, lp_schedule,
                             shortest_path_arborescence)

edges = [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 5, 1),
         (0, 2, 3), (1, 3, 3), (2, 4, 3), (3, 5, 3), (0, 3, 4), (5, 0, 1)]
g = DirectedGraph(6, edges)
demands = [Demand(0, 2, 3), Demand(1, 3, 3), Demand(2, 4, 3), Demand(3, 5, 3), Demand(0, 3, 4)]

xs = lp_schedule(g, demands)   # the LP part is deterministic, share it across seeds
t = 0.25
tree = set()
for r in range(g.n):
    tree |= shortest_path_arborescence(g, r, "in") | shortest_path_arborescence(g, r, "out")
free = [k for k in range(g.m) if k not in tree]

seeds = 3000
counts = np.zeros((len(demands), g.m))
for seed in range(seeds):
    run = OnlineSpanner(g, SpannerParams(Mode.GENERAL, T=1, t=t, seed=seed), x_schedule=xs)
    for i, dem in enumerate(demands):
        run.process_demand(dem)
        counts[i, sorted(run.edges)] += 1

p = np.array([np.minimum(1, x * t * math.log(g.n)) for x in xs])
print("edge  " + "  ".join(f"round {i + 1:<8}" for i in range(len(demands))))
for k in free:
    cells = "  ".join(f"{counts[i, k] / seeds:.3f}/{p[i, k]:.3f}" for i in range(len(demands)))
    print(f"{g.edges[k][:2]}  {cells}")
print("max deviation:", np.abs(counts / seeds - p)[:, free].max().round(4))
