"""Exact ground truth for desk-scale instances.

Path enumeration plus the dense simplex give exact values for the spanner
LP, its per-demand flow LP and offline covering LPs; subset enumeration
gives the integral spanner optimum.
"""

from __future__ import annotations

from itertools import combinations
from typing import Sequence

import numpy as np

from . import simplex
from .covering import ConstraintRow
from .graph import DirectedGraph, Demand, InfeasibleDemand, shortest_distances, within

MAX_PATHS = 10_000


class SizeLimit(RuntimeError):
    """Instance too large for exhaustive treatment."""


def enumerate_paths(g: DirectedGraph, dem: Demand, limit: int = MAX_PATHS) -> list[tuple]:
    """All simple ``s -> t`` paths of length at most ``d``, as edge-id tuples."""
    s, t = g.check_vertex(dem.s), g.check_vertex(dem.t)
    dt, _ = shortest_distances(g, t, reverse=True)
    out: list[tuple] = []
    on_path = [False] * g.n
    on_path[s] = True
    stack: list[int] = []

    def walk(u, used):
        if u == t:
            out.append(tuple(stack))
            if len(out) > limit:
                raise SizeLimit(f"more than {limit} feasible paths for demand {dem}")
            return
        for k in g.out_edges[u]:
            _, v, length = g.edges[k]
            if on_path[v] or not within(used + length + dt[v], dem.d):
                continue
            on_path[v] = True
            stack.append(k)
            walk(v, used + length)
            stack.pop()
            on_path[v] = False

    if within(dt[s], dem.d):
        walk(s, 0)
    return out


def exact_flow_value(g: DirectedGraph, x, dem: Demand, limit: int = MAX_PATHS) -> float:
    """Maximum feasible-path flow from ``s`` to ``t`` under edge capacities ``x``."""
    x = np.asarray(x, dtype=float)
    paths = enumerate_paths(g, dem, limit)
    if not paths:
        return 0.0
    A = np.zeros((g.m, len(paths)))
    for j, p in enumerate(paths):
        A[list(p), j] = 1.0
    used = np.nonzero(A.any(axis=1))[0]
    res = simplex.solve(simplex.DenseLP(np.ones(len(paths)), A[used], x[used], ["<="] * used.size,
                                        maximize=True))
    return float(res.objective)


def exact_lp_opt(g: DirectedGraph, demands: Sequence[Demand], limit: int = MAX_PATHS) -> float:
    """Optimum of the path-based spanner LP relaxation (fractional OPT)."""
    per_demand = []
    for dem in demands:
        paths = enumerate_paths(g, dem, limit)
        if not paths:
            raise InfeasibleDemand(f"demand {dem} has no feasible path")
        per_demand.append(paths)
    if not demands:
        return 0.0
    n_y = sum(len(p) for p in per_demand)
    if n_y > limit:
        raise SizeLimit(f"{n_y} path variables exceed the limit of {limit}")
    n_var = g.m + n_y
    rows, rhs, senses = [], [], []
    offset = g.m
    for paths in per_demand:
        row = np.zeros(n_var)
        row[offset:offset + len(paths)] = 1.0
        rows.append(row)
        rhs.append(1.0)
        senses.append(">=")
        for e in sorted({k for p in paths for k in p}):
            row = np.zeros(n_var)
            row[e] = -1.0
            for j, p in enumerate(paths):
                if e in p:
                    row[offset + j] = 1.0
            rows.append(row)
            rhs.append(0.0)
            senses.append("<=")
        offset += len(paths)
    c = np.concatenate([np.ones(g.m), np.zeros(n_y)])
    res = simplex.solve(simplex.DenseLP(c, np.array(rows), rhs, senses))
    return float(res.objective)


def exact_covering_lp(c, rows: Sequence, exact: bool = False):
    """Offline optimum of ``min c.x  s.t.  A x >= 1, x >= 0``."""
    c = np.asarray(c, dtype=float)
    A = np.array([r.dense(c.size) if isinstance(r, ConstraintRow) else np.asarray(r, dtype=float)
                  for r in rows]).reshape(len(rows), c.size)
    if not len(rows):
        return 0.0
    res = simplex.solve(simplex.DenseLP(c, A, np.ones(len(rows)), [">="] * len(rows)), exact=exact)
    if not res.optimal:
        raise ValueError(f"covering LP is {res.status}")
    return res.objective if exact else float(res.objective)


def _masks(g: DirectedGraph, demands: Sequence[Demand], limit: int):
    masks = []
    for dem in demands:
        paths = enumerate_paths(g, dem, limit)
        if not paths:
            raise InfeasibleDemand(f"demand {dem} has no feasible path")
        masks.append([sum(1 << k for k in p) for p in paths])
    return masks


def brute_force_opt(g: DirectedGraph, demands: Sequence[Demand], max_edges: int = 20,
                    limit: int = MAX_PATHS) -> int:
    """Fewest edges settling every demand, by enumerating edge subsets by size.

    Only edges lying on some feasible path of some demand are candidates;
    more than ``max_edges`` candidates raises :class:`SizeLimit`.
    """
    if not demands:
        return 0
    masks = _masks(g, demands, limit)
    candidates = sorted({k for ms in masks for m in ms for k in range(g.m) if m >> k & 1})
    if len(candidates) > max_edges:
        raise SizeLimit(f"{len(candidates)} candidate edges exceed the limit of {max_edges}")
    # most constrained demands first so the all() check fails fast
    masks.sort(key=len)
    lower = max(min(bin(m).count("1") for m in ms) for ms in masks)
    for size in range(lower, len(candidates) + 1):
        for combo in combinations(candidates, size):
            chosen = 0
            for k in combo:
                chosen |= 1 << k
            if all(any(m & ~chosen == 0 for m in ms) for ms in masks):
                return size
    raise AssertionError("union of all candidate edges must settle every demand")  # pragma: no cover
