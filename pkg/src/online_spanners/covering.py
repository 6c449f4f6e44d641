"""Online covering LP solver with guess-and-double phases.

Solves ``min c.x  s.t.  A x >= 1, x >= 0`` when rows of ``A`` arrive one at
a time (or are produced by a separation oracle). Each phase ``r`` keeps its own
primal vector ``x^r`` driven by the exponential update

    x^r_j = alpha(r) / (2 n c_j) * exp(ln(2n) / c_j * sum_k a_kj y_k)

where the sum runs over the dual variables raised since the phase began. A
violated row is pushed until it is covered twice over; if the phase objective
would pass ``alpha(r)`` first, a new phase with ``2 alpha(r)`` restarts the
same row. The online solution is the coordinate-wise maximum over phases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

RTOL = 1e-9


class OracleContractError(RuntimeError):
    """A separation oracle returned a row that the current solution satisfies."""


@dataclass(frozen=True)
class ConstraintRow:
    """Sparse non-negative row ``sum_j a_j x_j >= 1``."""

    indices: tuple
    values: tuple

    def __post_init__(self):
        if len(self.indices) != len(self.values):
            raise ValueError("indices and values differ in length")
        if len(set(self.indices)) != len(self.indices):
            raise ValueError("duplicate index in constraint row")
        if any(not math.isfinite(v) or v < 0 for v in self.values):
            raise ValueError("row coefficients must be finite and non-negative")
        if not any(v > 0 for v in self.values):
            raise ValueError("row needs at least one positive coefficient")

    @classmethod
    def from_dense(cls, a) -> "ConstraintRow":
        a = np.asarray(a, dtype=float).ravel()
        nz = np.nonzero(a)[0]
        return cls(tuple(int(j) for j in nz), tuple(float(a[j]) for j in nz))

    @classmethod
    def from_mapping(cls, mapping) -> "ConstraintRow":
        items = sorted((int(j), float(v)) for j, v in mapping.items() if v != 0)
        return cls(tuple(j for j, _ in items), tuple(v for _, v in items))

    def dense(self, n: int) -> np.ndarray:
        a = np.zeros(n)
        if self.indices and max(self.indices) >= n:
            raise ValueError(f"row index {max(self.indices)} out of range for {n} variables")
        a[list(self.indices)] = self.values
        return a


RowLike = Union[ConstraintRow, Sequence[float], np.ndarray]


@dataclass
class FixReport:
    violated: bool = False
    phases_started: int = 0
    y_assigned: float = 0.0
    variables_doubled: list = field(default_factory=list)


def _as_dense(row: RowLike, n: int) -> np.ndarray:
    if isinstance(row, ConstraintRow):
        return row.dense(n)
    a = np.asarray(row, dtype=float).ravel()
    if a.size != n:
        raise ValueError(f"row has {a.size} entries, expected {n}")
    ConstraintRow.from_dense(a)  # validation only
    return a


def _crossing(f, target, rtol=RTOL):
    """Bracket ``[lo, hi]`` around the point where increasing ``f`` reaches ``target``.

    Requires ``f(0) < target``. Returns ``(lo, hi)`` with ``f(lo) < target <= f(hi)``.
    """
    hi = 1.0
    while f(hi) < target:
        hi *= 2.0
        if hi > 1e300:
            raise OverflowError("increment search diverged")
    lo = 0.0
    while hi > 1e-300 and f(hi / 2) >= target:
        hi /= 2
    if f(hi / 2) < target:
        lo = hi / 2
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if f(mid) >= target:
            hi = mid
        else:
            lo = mid
    return lo, hi


class CoveringState:
    """Mutable state of one online covering run; see module docstring."""

    def __init__(self, c):
        c = np.asarray(c, dtype=float).ravel()
        if c.size < 1:
            raise ValueError("need at least one variable")
        if not np.all(np.isfinite(c)) or np.any(c <= 0):
            raise ValueError("costs must be finite and strictly positive")
        self.c = c
        self.n = c.size
        self.phase = 0
        self.alpha: Optional[float] = None
        self.alphas: list[float] = []
        self.x_phase = np.zeros(self.n)
        self.load = np.zeros(self.n)
        self.phase_vectors: list[np.ndarray] = []
        self.phase_start_row: list[int] = []
        # (row number, phase, y, dense row) per dual raised
        self.duals: list[tuple] = []
        self.rows_seen = 0
        self.fixes = 0
        self._prev_max = np.zeros(self.n)

    @property
    def alpha_first(self) -> Optional[float]:
        return self.alphas[0] if self.alphas else None

    def solution(self) -> np.ndarray:
        if self.phase == 0:
            return np.zeros(self.n)
        return np.maximum(self._prev_max, self.x_phase)

    def objective(self) -> float:
        return float(self.c @ self.solution())

    def phase_objective(self) -> float:
        return float(self.c @ self.x_phase)

    def phase_dual_total(self, phase: int) -> float:
        return sum(y for _, r, y, _ in self.duals if r == phase)

    def phase_loads(self, phase: int) -> np.ndarray:
        load = np.zeros(self.n)
        for _, r, y, a in self.duals:
            if r == phase:
                load += a * y
        return load

    def _start_phase(self, alpha: float):
        if self.phase:
            self.phase_vectors[-1] = self.x_phase.copy()
            self._prev_max = np.maximum(self._prev_max, self.x_phase)
        self.phase += 1
        self.alpha = alpha
        self.alphas.append(alpha)
        self.load = np.zeros(self.n)
        self.x_phase = alpha / (2 * self.n * self.c)
        self.phase_vectors.append(self.x_phase.copy())
        self.phase_start_row.append(self.rows_seen - 1)

    def _x_at(self, a, y):
        with np.errstate(over="ignore"):
            return self.alpha / (2 * self.n * self.c) * np.exp(math.log(2 * self.n) / self.c * (self.load + a * y))

    def process(self, row: RowLike) -> FixReport:
        """Feed one covering row; returns what the update did."""
        a = _as_dense(row, self.n)
        self.rows_seen += 1
        if self.phase == 0:
            pos = a > 0
            self._start_phase(float(np.min(self.c[pos] / a[pos])))
        if a @ self.solution() >= 1:
            return FixReport()

        report = FixReport(violated=True)
        self.fixes += 1
        while a @ self.x_phase < 1:
            before = self.x_phase.copy()
            cov = lambda y: float(a @ self._x_at(a, y))
            obj = lambda y: float(self.c @ self._x_at(a, y))
            _, y_cov = _crossing(cov, 2.0)
            if obj(0.0) >= self.alpha:
                y_obj = 0.0
            else:
                y_obj, _ = _crossing(obj, self.alpha)
            y = min(y_cov, y_obj)
            self.x_phase = np.maximum(self.x_phase, self._x_at(a, y))
            self.load = self.load + a * y
            self.duals.append((self.rows_seen - 1, self.phase, y, a))
            self.phase_vectors[-1] = self.x_phase.copy()
            report.y_assigned += y
            if y_cov <= y_obj:
                # covered twice over from below 1: some coordinate at least doubled
                report.variables_doubled = [int(j) for j in np.nonzero(self.x_phase >= 2 * before)[0]]
                break
            self._start_phase(2 * self.alpha)
            report.phases_started += 1
        return report

    def process_with_oracle(self, oracle: Callable[[np.ndarray], Optional[RowLike]],
                            max_fixes: int = 1_000_000) -> int:
        """Repeatedly ask ``oracle(x)`` for a violated row and fix it.

        Returns the number of rows fixed. The oracle must return ``None`` once
        ``x`` is feasible, and otherwise a row with ``a.x < 1``.
        """
        count = 0
        while True:
            x = self.solution()
            row = oracle(x)
            if row is None:
                return count
            a = _as_dense(row, self.n)
            if a @ x >= 1:
                raise OracleContractError(f"oracle returned a satisfied row (a.x = {a @ x:.6g})")
            self.process(a)
            count += 1
            if count >= max_fixes:
                raise RuntimeError(f"oracle loop exceeded {max_fixes} fixes")
