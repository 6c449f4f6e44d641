"""The online pairwise spanner: greedy rounds, then arborescences and rounding.

Run: python3 notebooks/04_online_spanner.py
"""
import math

from online_spanners import brute_force_opt, exact_lp_opt, generate, params_for, run_spanner

g, demands = generate("random", 8, 0.35, seed=4, k=7)
print(f"graph: {g.n} vertices, {g.m} edges; {len(demands)} demands")

for mode in ("general", "bounded-d", "quasimetric"):
    dmax = max(d.d for d in demands)
    params = params_for(mode, g.n, d_opt=dmax, seed=1)
    run = run_spanner(g, demands, params)
    print(f"\nmode={mode}  T={params.T}  t={params.t:.3f}")
    for o in run.outcomes:
        print(f"  round {o.round}: {o.branch:<20} +{len(o.edges_added)} edges  |E'|={o.num_edges:<3}"
              f" LP={o.lp_objective:.3f}  settled={o.settled}  repaired={o.repaired}")

lp = exact_lp_opt(g, demands)
opt = brute_force_opt(g, demands)
k = len({(d.s, d.t) for d in demands})
print(f"\nLP* = {lp:.3f} <= OPT = {opt} <= |E'| = {len(run.edges)};  OPT >= sqrt(k) = {math.sqrt(k):.3f}")

# Parameter profiles for each setting.
for mode, kw in (("general", {}), ("bounded-d", {"d_opt": 2}), ("all-server", {}),
                 ("steiner-forest", {"epsilon": 0.1})):
    p = params_for(mode, 32, **kw)
    print(f"n=32 {mode:<15} T={p.T:<4} t={p.t:.3f}")
