"""Plain-text instance formats.

Graph:     ``n m`` then ``m`` lines ``u v len`` (0-based ids, integer len >= 0).
Demands:   one ``s t d`` line per round; ``d`` may be ``inf``.
Covering:  ``n_vars``, then the costs, then one sparse row ``idx:coef ...`` per
           line. Packing files use the same layout with columns per line.
Blank lines and ``#`` comments are ignored everywhere.
"""

from __future__ import annotations

import os
from typing import Iterable, Iterator, Union

from .covering import ConstraintRow
from .graph import UNBOUNDED, DirectedGraph, Demand, InvalidGraphError

PathLike = Union[str, os.PathLike]


class FormatError(ValueError):
    pass


def _lines(text: str) -> Iterator[tuple[int, list[str]]]:
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line.split()


def _int(token: str, no: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise FormatError(f"line {no}: expected an integer, got {token!r}") from None


def parse_graph(text: str) -> DirectedGraph:
    lines = list(_lines(text))
    if not lines:
        raise FormatError("empty graph file")
    no, head = lines[0]
    if len(head) != 2:
        raise FormatError(f"line {no}: header must be 'n m'")
    n, m = _int(head[0], no), _int(head[1], no)
    body = lines[1:]
    if len(body) != m:
        raise FormatError(f"header declares {m} edges, found {len(body)}")
    edges = []
    for no, tok in body:
        if len(tok) != 3:
            raise FormatError(f"line {no}: edge lines are 'u v len'")
        edges.append(tuple(_int(x, no) for x in tok))
    try:
        return DirectedGraph(n, edges)
    except InvalidGraphError as exc:
        raise FormatError(str(exc)) from None


def format_graph(g: DirectedGraph) -> str:
    out = [f"{g.n} {g.m}"]
    out += [f"{u} {v} {length}" for u, v, length in g.edges]
    return "\n".join(out) + "\n"


def parse_distance(token: str, no: int = 0):
    if token.lower() in ("inf", "infinity", "unbounded"):
        return UNBOUNDED
    return _int(token, no)


def parse_demands(text: str) -> list[Demand]:
    demands = []
    for no, tok in _lines(text):
        if len(tok) != 3:
            raise FormatError(f"line {no}: demand lines are 's t d'")
        try:
            demands.append(Demand(_int(tok[0], no), _int(tok[1], no), parse_distance(tok[2], no)))
        except ValueError as exc:
            raise FormatError(f"line {no}: {exc}") from None
    return demands


def format_demands(demands: Iterable[Demand]) -> str:
    return "".join(f"{d.s} {d.t} {'inf' if d.d == UNBOUNDED else d.d}\n" for d in demands)


def parse_sparse_stream(text: str):
    """Return ``(costs, rows)`` from a covering/packing stream file."""
    lines = list(_lines(text))
    if len(lines) < 2:
        raise FormatError("stream file needs a variable count and a cost line")
    no, head = lines[0]
    if len(head) != 1:
        raise FormatError(f"line {no}: first line is the variable count")
    n = _int(head[0], no)
    no, cost_tok = lines[1]
    if len(cost_tok) != n:
        raise FormatError(f"line {no}: expected {n} costs, got {len(cost_tok)}")
    try:
        costs = [float(v) for v in cost_tok]
    except ValueError:
        raise FormatError(f"line {no}: costs must be numbers") from None
    rows = []
    for no, tok in lines[2:]:
        entries = {}
        for item in tok:
            idx, sep, coef = item.partition(":")
            if not sep:
                raise FormatError(f"line {no}: entries are 'idx:coef', got {item!r}")
            j = _int(idx, no)
            if not 0 <= j < n:
                raise FormatError(f"line {no}: index {j} out of range")
            try:
                entries[j] = float(coef)
            except ValueError:
                raise FormatError(f"line {no}: bad coefficient {coef!r}") from None
        try:
            rows.append(ConstraintRow.from_mapping(entries))
        except ValueError as exc:
            raise FormatError(f"line {no}: {exc}") from None
    return costs, rows


def format_sparse_stream(costs, rows) -> str:
    out = [str(len(costs)), " ".join(repr(float(c)) for c in costs)]
    for row in rows:
        out.append(" ".join(f"{j}:{v!r}" for j, v in zip(row.indices, row.values)))
    return "\n".join(out) + "\n"


def read_text(path: PathLike) -> str:
    with open(path) as fh:
        return fh.read()


def load_graph(path: PathLike) -> DirectedGraph:
    return parse_graph(read_text(path))


def load_demands(path: PathLike) -> list[Demand]:
    return parse_demands(read_text(path))
