"""Dense two-phase revised simplex in exact rational arithmetic.

Solves ``min c.x  s.t.  A x = b, x >= 0`` for small row counts.  Entries are
converted to ``fractions.Fraction`` (floats convert exactly), rows are scaled
to integers so that pricing is integer arithmetic on numpy object arrays.
Entering columns use Dantzig's rule; after a degenerate pivot the solver
switches to Bland's rule until progress resumes, which rules out cycling.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InfeasibleProblem


class UnboundedProblem(ValueError):
    pass


@dataclass
class LPResult:
    x: list            # Fraction per column
    objective: Fraction
    basis: list        # column indices, one per row
    duals: list        # Fraction per original row
    iterations: int

    @property
    def support(self):
        return [j for j, v in enumerate(self.x) if v != 0]


def _lcm_denominator(values) -> int:
    d = 1
    for v in values:
        d = d * v.denominator // math.gcd(d, v.denominator)
    return d


class _Tableau:
    def __init__(self, A, rhs, basis):
        self.A = A                      # object array of ints, m x N
        self.m = A.shape[0]
        self.basis = list(basis)
        self.Binv = [[Fraction(int(i == k)) for k in range(self.m)] for i in range(self.m)]
        self.xB = list(rhs)

    def column(self, j):
        a = self.A[:, j]
        return [sum((self.Binv[i][k] * int(a[k]) for k in range(self.m)), Fraction(0))
                for i in range(self.m)]

    def duals(self, cost):
        cB = [cost[j] for j in self.basis]
        return [sum((cB[i] * self.Binv[i][k] for i in range(self.m)), Fraction(0))
                for k in range(self.m)]

    def pivot(self, r, j, d):
        piv = d[r]
        row = [v / piv for v in self.Binv[r]]
        xr = self.xB[r] / piv
        for i in range(self.m):
            if i == r or d[i] == 0:
                continue
            f = d[i]
            self.Binv[i] = [a - f * b for a, b in zip(self.Binv[i], row)]
            self.xB[i] -= f * xr
        self.Binv[r] = row
        self.xB[r] = xr
        self.basis[r] = j


def _optimize(tab, cost, cost_int, denom, allowed, max_iter):
    """Run simplex iterations on ``tab`` for the given cost vector."""
    bland = False
    it = 0
    n_allowed = allowed.stop
    while True:
        if it >= max_iter:
            raise RuntimeError(f"simplex iteration limit {max_iter} reached")
        y = tab.duals(cost)
        D = _lcm_denominator(y)
        Y = np.array([int(v * D) for v in y], dtype=object)
        # D * denom * reduced cost, integer
        red = D * cost_int[:n_allowed] - Y.dot(tab.A[:, :n_allowed]) * denom
        in_basis = np.zeros(n_allowed, dtype=bool)
        for j in tab.basis:
            if j < n_allowed:
                in_basis[j] = True
        neg = np.flatnonzero((red < 0) & ~in_basis)
        if neg.size == 0:
            return it
        if bland:
            j = int(neg[0])
        else:
            vals = red[neg]
            j = int(neg[np.argmin(vals)])
        d = tab.column(j)
        best = None
        for i in range(tab.m):
            if d[i] > 0:
                ratio = tab.xB[i] / d[i]
                key = (ratio, tab.basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            raise UnboundedProblem(f"column {j} is an unbounded direction")
        (ratio, _), r = best
        bland = ratio == 0
        tab.pivot(r, j, d)
        it += 1


def solve_lp(A, b, c, max_iter: int = 100_000) -> LPResult:
    """Minimize ``c.x`` subject to ``A x = b``, ``x >= 0``, exactly."""
    rows = [[Fraction(v) for v in row] for row in A]
    rhs = [Fraction(v) for v in b]
    cost = [Fraction(v) for v in c]
    m = len(rows)
    n = len(cost)
    if any(len(r) != n for r in rows) or len(rhs) != m:
        raise ValueError("inconsistent LP dimensions")

    row_scale = []
    for i in range(m):
        s = _lcm_denominator(rows[i] + [rhs[i]])
        if rhs[i] < 0:
            s = -s
        rows[i] = [v * s for v in rows[i]]
        rhs[i] *= s
        row_scale.append(s)

    A_int = np.empty((m, n + m), dtype=object)
    for i in range(m):
        A_int[i, :n] = [int(v) for v in rows[i]]
        A_int[i, n:] = [int(i == k) for k in range(m)]

    tab = _Tableau(A_int, rhs, range(n, n + m))

    # phase 1: drive artificials to zero
    c1 = [Fraction(0)] * n + [Fraction(1)] * m
    c1_int = np.array([int(v) for v in c1], dtype=object)
    it1 = _optimize(tab, c1, c1_int, 1, slice(0, n), max_iter)
    infeas = sum((tab.xB[i] for i in range(m) if tab.basis[i] >= n), Fraction(0))
    if infeas > 0:
        raise InfeasibleProblem(f"constraints are infeasible (phase-1 residual {float(infeas):.3e})")
    for i in range(m):
        if tab.basis[i] >= n:
            for j in range(n):
                if j in tab.basis:
                    continue
                d = tab.column(j)
                if d[i] != 0:
                    tab.pivot(i, j, d)
                    break
            # otherwise the row is redundant; the artificial stays at zero

    # phase 2
    cden = _lcm_denominator(cost)
    c2 = cost + [Fraction(0)] * m
    c2_int = np.array([int(v * cden) for v in cost] + [0] * m, dtype=object)
    it2 = _optimize(tab, c2, c2_int, cden, slice(0, n), max_iter)

    x = [Fraction(0)] * n
    for i, j in enumerate(tab.basis):
        if j < n:
            x[j] = tab.xB[i]
    obj = sum((cost[j] * x[j] for j in range(n)), Fraction(0))
    y = tab.duals(c2)
    duals = [y[i] * row_scale[i] for i in range(m)]
    return LPResult(x, obj, list(tab.basis), duals, it1 + it2)
