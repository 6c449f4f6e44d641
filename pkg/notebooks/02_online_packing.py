"""Online packing with bounded violation, and its scaled feasible version.

Run: python3 notebooks/02_online_packing.py
"""
import math

import numpy as np

from online_spanners import PackingState

# Single row, B = 3: x grows as expm1(y) until it reaches 2, so y = ln 3.
state = PackingState([1.0], B=3)
print("y =", state.process_column([1.0]), " ln 3 =", math.log(3))

# A random column stream.
rng = np.random.default_rng(1)
n, B = 5, 2.0
c = rng.uniform(0.5, 2.0, size=n)
cols = [np.where(rng.random(n) < 0.6, rng.uniform(0.2, 1.5, size=n), 0.0) + np.eye(n)[i % n] * 0.3
        for i in range(25)]
state = PackingState(c, B)
for a in cols:
    state.process_column(a)
rep = state.report()
print(f"\nY = {rep.objective:.4f}  X/B = {rep.covering_objective / B:.4f}  (Y >= X/B)")

A = np.array(cols)
load = A.T @ np.array(state.y)
for j in range(n):
    print(f"row {j}: load {load[j]:.4f}  ceiling {state.row_bound(j):.4f}  bound c_j {c[j]:.4f}")

# Scaling by B / B' turns the approximately feasible y into a feasible one.
scaled = state.report(scaled=True)
print(f"\nB' = {rep.b_prime:.4f}; scaled objective {scaled.objective:.4f}; "
      f"max scaled load/c = {(A.T @ scaled.y / c).max():.6f}")
