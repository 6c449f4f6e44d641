"""Small dense two-phase simplex with Bland's rule.

Problems have the form ``min/max c.x  s.t.  A x (<=|>=|=) b,  x >= 0``. The
float path uses a pivot tolerance; ``exact=True`` runs the same tableau over
:class:`fractions.Fraction` (meant for tiny problems in tests).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

SENSES = ("<=", ">=", "=")


class SimplexError(RuntimeError):
    pass


@dataclass
class DenseLP:
    c: Sequence
    A: Sequence
    b: Sequence
    senses: Optional[Sequence[str]] = None
    maximize: bool = False

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=object if _has_fraction(self.c) else float).ravel()
        n = self.c.size
        A = np.asarray(self.A, dtype=object if _has_fraction(self.A) else float)
        if A.size == 0:
            A = A.reshape(0, n)
        if A.ndim != 2 or A.shape[1] != n:
            raise ValueError(f"constraint matrix shape {A.shape} does not match {n} variables")
        self.A = A
        self.b = np.asarray(self.b, dtype=object if _has_fraction(self.b) else float).ravel()
        if self.b.size != A.shape[0]:
            raise ValueError("right-hand side length does not match constraint count")
        if self.senses is None:
            self.senses = ["<="] * A.shape[0]
        self.senses = list(self.senses)
        if len(self.senses) != A.shape[0] or any(s not in SENSES for s in self.senses):
            raise ValueError(f"senses must be one of {SENSES} per row")

    @property
    def shape(self):
        return self.A.shape


@dataclass
class LPResult:
    status: str
    x: Optional[np.ndarray] = None
    objective: Optional[float] = None
    duals: Optional[np.ndarray] = None
    iterations: int = 0
    basis: list = field(default_factory=list)

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


def _has_fraction(values) -> bool:
    arr = np.asarray(values, dtype=object).ravel()
    return any(isinstance(v, Fraction) for v in arr)


def _pivot(T, row, col):
    T[row] = T[row] / T[row, col]
    for i in range(T.shape[0]):
        if i != row and T[i, col] != 0:
            T[i] = T[i] - T[i, col] * T[row]


def _run(T, basis, allowed, tol, max_iter):
    """Bland's-rule iterations on tableau ``T`` (objective in the last row)."""
    m = T.shape[0] - 1
    it = 0
    while True:
        obj = T[m, :-1]
        entering = next((j for j in allowed if obj[j] < -tol), None)
        if entering is None:
            return OPTIMAL, it
        col = T[:m, entering]
        best = None
        for i in range(m):
            if col[i] > tol:
                ratio = T[i, -1] / col[i]
                if best is None or ratio < best[0] - tol or (abs(ratio - best[0]) <= tol and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return UNBOUNDED, it
        _pivot(T, best[1], entering)
        basis[best[1]] = entering
        it += 1
        if it > max_iter:
            raise SimplexError(f"no convergence after {max_iter} pivots")


def solve(lp: DenseLP, exact: bool = False, tol: float = 1e-9, max_iter: int = 50_000) -> LPResult:
    """Solve ``lp``; duals follow the sign convention of the stated problem.

    For a minimisation the dual of a ``>=`` row is non-negative and of a
    ``<=`` row non-positive (the reverse for maximisation), so that
    ``c - A.T @ duals`` are the reduced costs.
    """
    m, n = lp.shape
    if exact:
        conv = np.vectorize(lambda v: Fraction(v), otypes=[object])
        A, b, c = (conv(a) if a.size else a.astype(object) for a in (lp.A, lp.b, lp.c))
        zero, one, tol = Fraction(0), Fraction(1), Fraction(0)
    else:
        A, b, c = lp.A.astype(float), lp.b.astype(float), lp.c.astype(float)
        zero, one = 0.0, 1.0
    if lp.maximize:
        c = -c
    senses = list(lp.senses)
    flip = np.array([b[i] < 0 for i in range(m)], dtype=bool)
    A = A.copy()
    b = b.copy()
    for i in np.nonzero(flip)[0]:
        A[i], b[i] = -A[i], -b[i]
        senses[i] = {"<=": ">=", ">=": "<=", "=": "="}[senses[i]]

    n_slack = sum(s != "=" for s in senses)
    n_art = sum(s != "<=" for s in senses)
    width = n + n_slack + n_art
    dtype = object if exact else float
    T = np.full((m + 1, width + 1), zero, dtype=dtype)
    T[:m, :n] = A
    T[:m, -1] = b
    basis = [0] * m
    unit_col = [0] * m
    slack_j, art_j = n, n + n_slack
    artificial = []
    for i, s in enumerate(senses):
        if s != "=":
            T[i, slack_j] = one if s == "<=" else -one
            if s == "<=":
                basis[i] = unit_col[i] = slack_j
            slack_j += 1
        if s != "<=":
            T[i, art_j] = one
            basis[i] = unit_col[i] = art_j
            artificial.append(art_j)
            art_j += 1

    iterations = 0
    if artificial:
        T[m, :] = zero
        for i in range(m):
            if basis[i] in artificial:
                T[m] = T[m] - T[i]
        for j in artificial:
            T[m, j] = zero
        status, it = _run(T, basis, list(range(width)), tol, max_iter)
        iterations += it
        phase_one = -T[m, -1]
        if phase_one > (0 if exact else tol * 10 * (1 + float(sum(abs(v) for v in b)))):
            return LPResult(INFEASIBLE, iterations=iterations)
        # pivot zero-level artificials out where a real column allows it
        art_set = set(artificial)
        for i in range(m):
            if basis[i] in art_set:
                for j in range(n + n_slack):
                    if abs(T[i, j]) > tol:
                        _pivot(T, i, j)
                        basis[i] = j
                        break

    T[m, :] = zero
    T[m, :n] = c
    for i in range(m):
        cb = T[m, basis[i]]
        if cb != 0:
            T[m] = T[m] - cb * T[i]
    status, it = _run(T, basis, list(range(n + n_slack)), tol, max_iter)
    iterations += it
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, iterations=iterations)

    x = np.full(n, zero, dtype=dtype)
    for i, j in enumerate(basis):
        if j < n:
            x[j] = T[i, -1]
    if not exact:
        x = np.where(np.abs(x) < tol, 0.0, x)
    objective = sum((c[j] * x[j] for j in range(n)), zero)
    # reduced cost of the unit column e_i is -y_i (unit columns cost nothing)
    duals = np.array([-T[m, unit_col[i]] for i in range(m)], dtype=dtype)
    duals = np.where(flip, -duals, duals)
    if lp.maximize:
        objective, duals = -objective, -duals
    return LPResult(OPTIMAL, x=x, objective=objective, duals=duals,
                    iterations=iterations, basis=basis)


def linprog_min(c, A_ge=None, b_ge=None, A_le=None, b_le=None, exact=False, tol=1e-9) -> LPResult:
    """Convenience wrapper for ``min c.x`` with ``>=`` and ``<=`` blocks."""
    c = np.asarray(c, dtype=object if exact else float)
    rows, rhs, senses = [], [], []
    for block, bvec, sense in ((A_ge, b_ge, ">="), (A_le, b_le, "<=")):
        if block is None:
            continue
        for row, val in zip(block, bvec):
            rows.append(row)
            rhs.append(val)
            senses.append(sense)
    A = np.array(rows, dtype=object if exact else float).reshape(len(rows), c.size)
    return solve(DenseLP(c, A, rhs, senses), exact=exact, tol=tol)
