"""Separation oracle for the path-based spanner LP.

Run: python3 notebooks/03_separation_oracle.py
"""
import numpy as np

from online_spanners import (CoveringState, Demand, DirectedGraph, enumerate_paths, exact_flow_value,
                             exact_lp_opt, restricted_min_weight_path, separate, solve_round)

# Three routes from 0 to 4: two of length 2 and a direct edge of length 3.
g = DirectedGraph(5, [(0, 1, 1), (1, 4, 1), (0, 2, 1), (2, 4, 1), (0, 4, 3), (0, 3, 2), (3, 4, 2)])
dem = Demand(0, 4, 3)
print("feasible paths:", enumerate_paths(g, dem))

# The length bound changes which path is lightest.
z = np.array([0.1, 0.1, 0.2, 0.2, 0.25, 0.0, 0.0])
print("lightest path, d=3:", restricted_min_weight_path(g, z, dem))
print("lightest path, d=4:", restricted_min_weight_path(g, z, Demand(0, 4, 4)))

# Capacities 0.3 everywhere carry 0.9 units on the three feasible paths: not enough.
x = np.full(g.m, 0.3)
res = separate(g, x, dem)
print(f"\nGood={res.good}  <x,z>={res.value:.4f}  exact flow={exact_flow_value(g, x, dem):.4f}")
z = res.constraint.z
print("every feasible path has z-weight >= 1:",
      all(sum(z[k] for k in p) >= 1 - 1e-9 for p in enumerate_paths(g, dem)))

# The covering engine drives x up until the oracle says Good.
cov = CoveringState(np.ones(g.m))
x = solve_round(cov, g, dem)
print(f"\nafter solve_round: flow={exact_flow_value(g, x, dem):.4f}  "
      f"objective={cov.objective():.4f}  LP optimum={exact_lp_opt(g, [dem]):.4f}")
