"""Online packing LP with bounded constraint violation.

Solves ``max 1.y  s.t.  A^T y <= c, y >= 0`` when the columns of ``A^T``
arrive online. Each arriving column is the covering row ``a_i . x >= 1`` of the
dual problem; if it is violated, ``y_i`` grows until the row is covered twice
over, with

    x_j = max(x_j, (exp(B / (3 c_j) * L_j) - 1) / (n * amax_j))

where ``L_j`` is the running load of packing row ``j``. ``y_i`` is final once
the column has been processed.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .covering import ConstraintRow, RowLike, _as_dense, _crossing


@dataclass
class PackingReport:
    objective: float          # Y = sum_i y_i
    covering_objective: float  # X = c . x
    violation: np.ndarray     # L_j / c_j per packing row
    b_prime: float            # 3 max_j ln(2 n amax_j / amin_j + 1)
    alpha: float              # max_j amax_j / c_j
    y: np.ndarray


class PackingState:

    def __init__(self, c, B: float):
        c = np.asarray(c, dtype=float).ravel()
        if c.size < 1 or not np.all(np.isfinite(c)) or np.any(c <= 0):
            raise ValueError("packing bounds must be finite and strictly positive")
        if not (math.isfinite(B) and B > 0):
            raise ValueError("B must be a positive number")
        self.c = c
        self.n = c.size
        self.B = float(B)
        self.x = np.zeros(self.n)
        self.load = np.zeros(self.n)
        self.amax = np.zeros(self.n)
        self.amin = np.full(self.n, np.inf)
        self.y: list[float] = []
        self.columns: list[np.ndarray] = []

    @property
    def updates(self) -> int:
        """Number of columns that received a positive value."""
        return sum(1 for v in self.y if v > 0)

    def _x_at(self, a, y):
        x = self.x.copy()
        live = self.amax > 0
        with np.errstate(over="ignore"):
            grown = np.expm1(self.B / (3 * self.c[live]) * (self.load[live] + a[live] * y)) / (self.n * self.amax[live])
        x[live] = np.maximum(x[live], grown)
        return x

    def process_column(self, col: RowLike) -> float:
        a = _as_dense(col, self.n)
        self.columns.append(a)
        pos = a > 0
        self.amax = np.maximum(self.amax, a)
        self.amin[pos] = np.minimum(self.amin[pos], a[pos])
        if a @ self.x >= 1:
            self.y.append(0.0)
            return 0.0
        # lower end of the bracket: keeps a.x <= 2, hence x_j <= 2 / amin_j exactly
        y, _ = _crossing(lambda v: float(a @ self._x_at(a, v)), 2.0)
        self.x = self._x_at(a, y)
        self.load = self.load + a * y
        self.y.append(y)
        return y

    def report(self, scaled: bool = False) -> PackingReport:
        """Summary of the run; ``scaled=True`` returns ``y * B / B'`` instead of ``y``."""
        seen = self.amax > 0
        if seen.any():
            ratios = 2 * self.n * self.amax[seen] / self.amin[seen] + 1
            b_prime = 3 * float(np.max(np.log(ratios)))
            alpha = float(np.max(self.amax / self.c))
        else:
            b_prime, alpha = 0.0, 0.0
        y = np.array(self.y, dtype=float)
        if scaled and b_prime > 0:
            y = y * self.B / b_prime
        return PackingReport(
            objective=float(y.sum()),
            covering_objective=float(self.c @ self.x),
            violation=self.load / self.c,
            b_prime=b_prime,
            alpha=alpha,
            y=y,
        )

    def row_bound(self, j: int) -> Optional[float]:
        """Load ceiling ``c_j * 3 ln(2 n amax_j / amin_j + 1) / B`` for a touched row."""
        if self.amax[j] <= 0:
            return None
        return self.c[j] * 3 * math.log(2 * self.n * self.amax[j] / self.amin[j] + 1) / self.B


__all__ = ["PackingState", "PackingReport", "ConstraintRow"]
