"""Directed graphs with integer edge lengths and exact path primitives.

Everything here is a pure function of an immutable :class:`DirectedGraph`.
Distances use ``math.inf`` as the unreachable sentinel; finite distances are
plain Python ints so sums never overflow.
"""

from __future__ import annotations

import enum
import heapq
import math
import numbers
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

INF = math.inf
#: Target distance meaning "any path will do".
UNBOUNDED = math.inf


class InvalidGraphError(ValueError):
    pass


class InfeasibleDemand(ValueError):
    """No path of length at most ``d`` joins the demand's terminals."""


class Thickness(enum.Enum):
    THICK = "thick"
    THIN = "thin"


def _check_length(value) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise InvalidGraphError(f"edge length must be an integer, got {value!r}")
    value = int(value)
    if value < 0:
        raise InvalidGraphError(f"edge length must be non-negative, got {value}")
    return value


class DirectedGraph:
    """Simple digraph on vertices ``0..n-1``.

    Edge ``k`` is ``edges[k] = (u, v, length)``. ``out_edges[u]`` and
    ``in_edges[v]`` list edge ids in increasing order.
    """

    def __init__(self, n: int, edges: Iterable[Sequence]):
        if n < 1:
            raise InvalidGraphError("graph needs at least one vertex")
        self.n = int(n)
        cleaned = []
        seen = set()
        for u, v, length in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidGraphError(f"edge ({u}, {v}) has a vertex outside 0..{n - 1}")
            if u == v:
                raise InvalidGraphError(f"self-loop at vertex {u}")
            if (u, v) in seen:
                raise InvalidGraphError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
            cleaned.append((u, v, _check_length(length)))
        self.edges: tuple[tuple[int, int, int], ...] = tuple(cleaned)
        out_edges: list[list[int]] = [[] for _ in range(n)]
        in_edges: list[list[int]] = [[] for _ in range(n)]
        for k, (u, v, _) in enumerate(self.edges):
            out_edges[u].append(k)
            in_edges[v].append(k)
        self.out_edges = tuple(tuple(ids) for ids in out_edges)
        self.in_edges = tuple(tuple(ids) for ids in in_edges)
        self._index = {(u, v): k for k, (u, v, _) in enumerate(self.edges)}

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def max_length(self) -> int:
        return max((e[2] for e in self.edges), default=0)

    def edge_id(self, u: int, v: int) -> Optional[int]:
        return self._index.get((u, v))

    def check_vertex(self, v) -> int:
        if isinstance(v, bool) or not isinstance(v, numbers.Integral) or not 0 <= v < self.n:
            raise InvalidGraphError(f"invalid vertex id {v!r}")
        return int(v)

    def path_length(self, path: Iterable[int]) -> int:
        return sum(self.edges[k][2] for k in path)

    def __repr__(self):
        return f"DirectedGraph(n={self.n}, m={self.m})"

    def __eq__(self, other):
        return isinstance(other, DirectedGraph) and self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))


@dataclass(frozen=True)
class Demand:
    s: int
    t: int
    d: float = UNBOUNDED

    def __post_init__(self):
        if self.s == self.t:
            raise ValueError("demand terminals must differ")
        if self.d != UNBOUNDED:
            if isinstance(self.d, bool) or not isinstance(self.d, numbers.Integral) or self.d < 0:
                raise ValueError(f"target distance must be a non-negative integer or UNBOUNDED, got {self.d!r}")
            object.__setattr__(self, "d", int(self.d))

    @property
    def bounded(self) -> bool:
        return self.d != UNBOUNDED


def _direction_lists(g: DirectedGraph, reverse: bool):
    # (adjacency used to leave a vertex, index of the far endpoint in an edge)
    return (g.in_edges, 0) if reverse else (g.out_edges, 1)


def shortest_distances(g: DirectedGraph, source: int, reverse: bool = False,
                       allowed: Optional[Iterable[int]] = None):
    """Dijkstra from ``source``; returns ``(dist, parent_edge)`` lists.

    With ``reverse=True`` distances are *to* ``source``. ``allowed`` restricts
    the search to a subset of edge ids. Ties keep the first edge found, and
    edges are relaxed in id order, so the parent structure is deterministic.
    """
    source = g.check_vertex(source)
    allowed_set = None if allowed is None else set(allowed)
    adj, far = _direction_lists(g, reverse)
    dist = [INF] * g.n
    parent: list[Optional[int]] = [None] * g.n
    dist[source] = 0
    done = [False] * g.n
    heap = [(0, source)]
    while heap:
        du, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for k in adj[u]:
            if allowed_set is not None and k not in allowed_set:
                continue
            edge = g.edges[k]
            v = edge[far]
            nd = du + edge[2]
            if nd < dist[v]:
                dist[v] = nd
                parent[v] = k
                heapq.heappush(heap, (nd, v))
    return dist, parent


def hop_length_profile(g: DirectedGraph, source: int, direction: str = "forward") -> np.ndarray:
    """Hop-bounded Bellman-Ford table.

    ``table[v, h]`` is the minimum length of a ``source -> v`` walk
    (``v -> source`` for ``direction="reverse"``) with at most ``h`` edges,
    for ``h = 0..n-1``; ``inf`` where no such walk exists.
    """
    source = g.check_vertex(source)
    if direction not in ("forward", "reverse"):
        raise ValueError(f"direction must be 'forward' or 'reverse', got {direction!r}")
    n = g.n
    table = np.full((n, n), np.inf)
    table[source, 0] = 0.0
    if g.m:
        arr = np.array(g.edges, dtype=np.int64)
        tails, heads = (arr[:, 0], arr[:, 1]) if direction == "forward" else (arr[:, 1], arr[:, 0])
        lengths = arr[:, 2].astype(float)
    for h in range(1, n):
        col = table[:, h - 1].copy()
        if g.m:
            np.minimum.at(col, heads, table[tails, h - 1] + lengths)
        table[:, h] = col
    return table


def cheapest_feasible_path(g: DirectedGraph, s: int, t: int, d=UNBOUNDED) -> Optional[list[int]]:
    """Fewest-edge ``s -> t`` path whose length is at most ``d``.

    Among equally short paths (in hops) the lexicographically smallest
    edge-id sequence is returned. ``None`` when no path meets the bound.
    """
    s, t = g.check_vertex(s), g.check_vertex(t)
    if s == t:
        return []
    to_t = hop_length_profile(g, t, "reverse")
    feasible = np.nonzero((to_t[s] < INF) & (to_t[s] <= d))[0]
    if feasible.size == 0:
        return None
    hops = int(feasible[0])
    path = []
    u, budget = s, d
    for remaining in range(hops, 0, -1):
        for k in g.out_edges[u]:
            _, v, length = g.edges[k]
            if length <= budget and within(to_t[v, remaining - 1], budget - length):
                path.append(k)
                u, budget = v, budget - length
                break
        else:  # pragma: no cover - guarded by the profile
            raise AssertionError("hop profile inconsistent with greedy walk")
    return path


def within(dist, d) -> bool:
    """``dist <= d`` for a finite distance; an infinite distance never qualifies."""
    return dist < INF and dist <= d


def local_graph(g: DirectedGraph, dem: Demand) -> frozenset:
    """Vertices ``v`` with ``dist(s, v) + dist(v, t) <= d``."""
    ds, _ = shortest_distances(g, dem.s)
    dt, _ = shortest_distances(g, dem.t, reverse=True)
    return frozenset(v for v in range(g.n)
                     if ds[v] < INF and dt[v] < INF and ds[v] + dt[v] <= dem.d)


def classify_thickness(g: DirectedGraph, dem: Demand, t_param: float) -> Thickness:
    if not t_param > 0:
        raise ValueError("thickness parameter must be positive")
    return Thickness.THICK if len(local_graph(g, dem)) >= t_param else Thickness.THIN


def shortest_path_arborescence(g: DirectedGraph, root: int, direction: str = "out") -> frozenset:
    """Edge ids of a shortest-path out-tree (``"out"``) or in-tree (``"in"``) at ``root``."""
    if direction not in ("in", "out"):
        raise ValueError(f"direction must be 'in' or 'out', got {direction!r}")
    _, parent = shortest_distances(g, root, reverse=(direction == "in"))
    return frozenset(k for k in parent if k is not None)


def distance_in_subgraph(g: DirectedGraph, edges: Iterable[int], s: int, t: int):
    """Shortest ``s -> t`` length using only ``edges``; ``inf`` if disconnected."""
    edges = set(edges)
    for k in edges:
        if not 0 <= k < g.m:
            raise InvalidGraphError(f"edge id {k} not in graph")
    dist, _ = shortest_distances(g, s, allowed=edges)
    return dist[g.check_vertex(t)]


def is_feasible(g: DirectedGraph, dem: Demand) -> bool:
    dist, _ = shortest_distances(g, dem.s)
    return within(dist[dem.t], dem.d)
