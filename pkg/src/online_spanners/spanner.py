"""Online pairwise spanner / directed Steiner forest.

Per arriving demand the algorithm

1. raises the fractional LP solution ``x`` through the covering engine,
2. before round ``T`` buys a cheapest feasible path (or the direct edge in the
   all-server setting),
3. in round ``T`` samples about ``3 n ln n / t`` roots, buys shortest-path in-
   and out-arborescences at each, and rounds ``x`` with marginals
   ``p_e = min(1, x_e t ln n)``,
4. after round ``T`` tops the rounding up conditionally so every untouched
   edge has been picked with overall probability ``p_e``,
5. repairs the round with a cheapest feasible path if the demand is still
   unsettled (an always-feasible guard on top of the high-probability bound).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .covering import CoveringState
from .graph import (UNBOUNDED, DirectedGraph, Demand, InfeasibleDemand, cheapest_feasible_path,
                    distance_in_subgraph, is_feasible, shortest_path_arborescence, within)
from .separation import solve_round


class Mode(enum.Enum):
    GENERAL = "general"
    BOUNDED_D = "bounded-d"
    QUASIMETRIC = "quasimetric"
    ALL_SERVER = "all-server"
    STEINER_FOREST = "steiner-forest"


GREEDY = "greedy"
ARBORESCENCE = "arborescence+round"
CONDITIONAL = "conditional-round"


@dataclass(frozen=True)
class SpannerParams:
    mode: Mode
    T: int
    t: float
    seed: int = 0
    d: Optional[int] = None
    epsilon: Optional[float] = None

    def __post_init__(self):
        if self.T < 1:
            raise ValueError("round threshold T must be at least 1")
        if not self.t > 0:
            raise ValueError("thickness parameter t must be positive")


def _as_fraction(value) -> Fraction:
    frac = Fraction(value)
    if not isinstance(value, Fraction):
        frac = Fraction(str(value)) if isinstance(value, float) else frac
        frac = frac.limit_denominator(10_000)
    return frac


def _power(base: Fraction, exponent: Fraction):
    """``base ** exponent``; an exact int whenever the true value is an integer."""
    val = float(base) ** float(exponent)
    m = round(val)
    if m > 0 and Fraction(m) ** exponent.denominator == base ** exponent.numerator:
        return m
    return val


def _floor_power(base: Fraction, exponent: Fraction) -> int:
    """Exact ``floor(base ** exponent)`` for positive rational base and exponent."""
    target = base ** exponent.numerator
    q = exponent.denominator
    m = max(0, math.floor(float(base) ** float(exponent)))
    while m > 0 and Fraction(m) ** q > target:
        m -= 1
    while Fraction(m + 1) ** q <= target:
        m += 1
    return m


def params_for(mode, n: int, d_opt=None, epsilon=None, seed: int = 0) -> SpannerParams:
    """Threshold ``T`` and thickness ``t`` for each problem variant."""
    mode = Mode(mode)
    if n < 2:
        raise ValueError("need at least two vertices")
    N = Fraction(n)
    if mode is Mode.GENERAL:
        T = _floor_power(N, Fraction(4, 5))
        t = T
    elif mode is Mode.BOUNDED_D:
        if d_opt is None:
            raise ValueError("bounded-d mode needs the maximum distance d")
        if d_opt < 1:
            raise ValueError("d must be at least 1")
        D = Fraction(d_opt)
        T = _floor_power(N / D, Fraction(4, 3))
        t = _power(D * N * N, Fraction(1, 3))
    elif mode in (Mode.QUASIMETRIC, Mode.ALL_SERVER):
        T = _floor_power(N, Fraction(4, 3))
        t = _power(N, Fraction(2, 3))
    else:
        eps = None if epsilon is None else _as_fraction(epsilon)
        if eps is None or not 0 < eps < Fraction(1, 3):
            raise ValueError("steiner-forest mode needs epsilon in (0, 1/3)")
        T = _floor_power(N, Fraction(4, 3) - 4 * eps)
        t = _power(N, Fraction(2, 3) + eps)
    return SpannerParams(mode, max(1, T), t, seed, d_opt, epsilon)


@dataclass
class RoundOutcome:
    round: int
    branch: str
    edges_added: list
    num_edges: int
    lp_objective: float
    settled: bool
    repaired: bool = False
    repair_edges: list = field(default_factory=list)
    roots: list = field(default_factory=list)


class OnlineSpanner:
    """One online run over a fixed graph; feed demands with :meth:`process_demand`.

    ``x_schedule`` replays precomputed LP solutions (one array per round)
    instead of running the covering engine, which is how Monte Carlo runs
    share the deterministic LP part across seeds.
    """

    def __init__(self, g: DirectedGraph, params: SpannerParams,
                 x_schedule: Optional[Sequence[np.ndarray]] = None):
        self.g = g
        self.params = params
        self.rng = np.random.Generator(np.random.Philox(params.seed))
        self.round = 0
        self.edges: set[int] = set()
        self.added_by: dict[int, str] = {}
        self.p_prev = np.zeros(g.m)
        self.x = np.zeros(g.m)
        self.cov = CoveringState(np.ones(g.m)) if g.m else None
        self.x_schedule = x_schedule
        self.demands: list[Demand] = []
        self.outcomes: list[RoundOutcome] = []
        self.roots: list[int] = []
        self._trees: dict = {}
        self._scale = params.t * math.log(g.n)

    def marginals(self, x=None) -> np.ndarray:
        x = self.x if x is None else x
        return np.minimum(1.0, x * self._scale)

    def _normalize(self, dem: Demand) -> Demand:
        if self.params.mode is Mode.STEINER_FOREST and dem.bounded:
            return Demand(dem.s, dem.t, UNBOUNDED)
        return dem

    def _buy(self, ids, branch) -> list:
        new = sorted(k for k in set(ids) if k not in self.edges)
        for k in new:
            self.edges.add(k)
            self.added_by[k] = branch
        return new

    def _trees_at(self, w: int) -> frozenset:
        if w not in self._trees:
            self._trees[w] = (shortest_path_arborescence(self.g, w, "in")
                              | shortest_path_arborescence(self.g, w, "out"))
        return self._trees[w]

    def _greedy_path(self, dem: Demand) -> list:
        if self.params.mode is Mode.ALL_SERVER:
            k = self.g.edge_id(dem.s, dem.t)
            if k is None:
                raise ValueError(f"all-server instance lacks the edge {dem.s}->{dem.t}")
            return [k]
        return cheapest_feasible_path(self.g, dem.s, dem.t, dem.d)

    def settle_check(self, dem: Demand) -> bool:
        dem = self._normalize(dem)
        return within(distance_in_subgraph(self.g, self.edges, dem.s, dem.t), dem.d)

    def process_demand(self, dem: Demand) -> RoundOutcome:
        dem = self._normalize(dem)
        self.g.check_vertex(dem.s)
        self.g.check_vertex(dem.t)
        if not is_feasible(self.g, dem):
            raise InfeasibleDemand(f"no path of length <= {dem.d} from {dem.s} to {dem.t}")
        self.round += 1
        i = self.round
        self.demands.append(dem)

        if self.x_schedule is not None:
            self.x = np.maximum(self.x, np.asarray(self.x_schedule[i - 1], dtype=float))
        elif self.cov is not None:
            self.x = solve_round(self.cov, self.g, dem, round_tag=i)
        p = self.marginals()
        T = self.params.T
        roots: list = []
        if i < T:
            branch = GREEDY
            added = self._buy(self._greedy_path(dem), GREEDY)
        elif i == T:
            branch = ARBORESCENCE
            size = math.ceil(3 * self.g.n * math.log(self.g.n) / self.params.t)
            roots = [int(w) for w in self.rng.integers(0, self.g.n, size=size)]
            self.roots = roots
            tree_edges = set()
            for w in sorted(set(roots)):
                tree_edges |= self._trees_at(w)
            added = self._buy(tree_edges, ARBORESCENCE)
            draws = self.rng.random(self.g.m)
            added += self._buy((k for k in range(self.g.m)
                                if k not in self.edges and draws[k] < p[k]), ARBORESCENCE)
        else:
            branch = CONDITIONAL
            q = np.zeros(self.g.m)
            open_ = self.p_prev < 1
            q[open_] = (p[open_] - self.p_prev[open_]) / (1 - self.p_prev[open_])
            draws = self.rng.random(self.g.m)
            added = self._buy((k for k in range(self.g.m)
                               if k not in self.edges and draws[k] < q[k]), CONDITIONAL)
        self.p_prev = p

        repaired, repair_edges = False, []
        if not within(distance_in_subgraph(self.g, self.edges, dem.s, dem.t), dem.d):
            repaired = True
            repair_edges = self._buy(cheapest_feasible_path(self.g, dem.s, dem.t, dem.d), "repair")
        outcome = RoundOutcome(
            round=i, branch=branch, edges_added=sorted(added), num_edges=len(self.edges),
            lp_objective=float(self.x.sum()), settled=self.settle_check(dem),
            repaired=repaired, repair_edges=repair_edges, roots=roots,
        )
        self.outcomes.append(outcome)
        return outcome


def lp_schedule(g: DirectedGraph, demands: Sequence[Demand], mode=Mode.GENERAL) -> list[np.ndarray]:
    """The seed-independent sequence of LP solutions, one per round."""
    mode = Mode(mode)
    cov = CoveringState(np.ones(g.m))
    xs = []
    for i, dem in enumerate(demands, 1):
        if mode is Mode.STEINER_FOREST:
            dem = Demand(dem.s, dem.t, UNBOUNDED)
        xs.append(solve_round(cov, g, dem, round_tag=i).copy())
    return xs


def run_spanner(g: DirectedGraph, demands: Sequence[Demand], params: SpannerParams,
                x_schedule=None) -> OnlineSpanner:
    run = OnlineSpanner(g, params, x_schedule=x_schedule)
    for dem in demands:
        run.process_demand(dem)
    return run
