"""Online fractional covering with guess-and-double phases.

Run: python3 notebooks/01_online_covering.py
"""
import math

import numpy as np

from online_spanners import CoveringState, exact_covering_lp

# One variable, one row x >= 1. The first guess alpha = 1 is too small: the
# phase objective hits the cap before the row is covered twice, so a second
# phase with alpha = 2 starts, and its starting point x = 1 already covers it.
state = CoveringState([1.0])
rep = state.process([1.0])
print("alphas:", state.alphas, "phases started by the fix:", rep.phases_started)
print("x =", state.solution(), "objective =", round(state.objective(), 9))

# A random stream of rows: the online objective stays within 16 ln(2n) of the
# offline optimum (and in practice far below it).
rng = np.random.default_rng(0)
n = 6
c = rng.uniform(0.5, 3.0, size=n)
rows = []
for _ in range(15):
    a = np.where(rng.random(n) < 0.5, rng.uniform(0.1, 2.0, size=n), 0.0)
    a[rng.integers(n)] += 0.5
    rows.append(a)
state = CoveringState(c)
for a in rows:
    state.process(a)

opt = exact_covering_lp(c, rows)
print(f"\n{len(rows)} rows, {state.fixes} fixes, {state.phase} phases")
print(f"online objective {state.objective():.4f}  offline optimum {opt:.4f}  "
      f"ratio {state.objective() / opt:.3f}  (guarantee {16 * math.log(2 * n):.1f})")
print("min row coverage:", min(a @ state.solution() for a in rows).round(6))

# Per-phase bookkeeping: the duals raised inside one phase never overload a
# packing row, which is what ties each phase's cost to the optimum.
for r in range(1, state.phase + 1):
    load = state.phase_loads(r) / c
    print(f"phase {r}: alpha={state.alphas[r - 1]:.4g}  dual total={state.phase_dual_total(r):.4g}  "
          f"max load/c={load.max():.3f}")
