"""Moment-constrained lower bound on the hitting probability.

The worst-case tail mass ``sum_{j>M} p_j`` over distributions on
``j = 1, 2, ...`` with prescribed first and second moments is a linear
program.  Any ``y`` satisfying

    j y1 + j^2 y2 + y3 + [j > M] >= 0   for all j >= 1

certifies ``tail >= -(a y1 + b y2 + y3)``.  At ``t = log M`` the moments and
the closed-form certificate are rational in ``M``, so most quantities here
are available exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import simplex
from .errors import InfeasibleProblem, InvalidArgument
from .excitation_core import analytic_first_moment, analytic_second_moment


@dataclass(frozen=True)
class DualCertificate:
    y1: Fraction
    y2: Fraction
    y3: Fraction
    M: int

    def __post_init__(self):
        for name in ("y1", "y2", "y3"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.M < 1:
            raise InvalidArgument(f"cut level M must be >= 1, got {self.M}")

    def as_floats(self):
        return float(self.y1), float(self.y2), float(self.y3)

    def slack(self, j: int) -> Fraction:
        return j * self.y1 + j * j * self.y2 + self.y3 + (1 if j > self.M else 0)


@dataclass(frozen=True)
class MomentVector:
    a: float | Fraction
    b: float | Fraction
    t: float

    def is_valid(self) -> bool:
        return self.b >= self.a * self.a >= 1


@dataclass
class FeasibilityReport:
    feasible: bool
    worst_slack: Fraction | float
    argmin: int | None
    j_max: int
    enumerated: bool
    worst_beyond: Fraction | float
    tight_points: list

    def as_dict(self):
        return {
            "feasible": self.feasible,
            "worst_slack": float(self.worst_slack),
            "argmin": self.argmin,
            "j_max": self.j_max,
            "enumerated": self.enumerated,
            "worst_beyond": float(self.worst_beyond),
            "tight_points": self.tight_points,
        }


@dataclass
class PrimalSolution:
    support: dict          # j -> probability (Fraction)
    objective: Fraction
    iterations: int

    @property
    def support_size(self) -> int:
        return len(self.support)


def paper_certificate(M: int) -> DualCertificate:
    """``y* = (-2(1+M)/M^3, 1/M^4, (1+M)^2/M^2 - 1)``."""
    if M < 1:
        raise InvalidArgument(f"M must be >= 1, got {M}")
    m = Fraction(M)
    return DualCertificate(-2 * (1 + m) / m**3, 1 / m**4, (1 + m) ** 2 / m**2 - 1, int(M))


def analytic_moments(t: float) -> MomentVector:
    return MomentVector(analytic_first_moment(t), analytic_second_moment(t), t)


def moments_at_log(M: int) -> MomentVector:
    """Exact rational moments at ``t = log M``.

    ``cosh(log M) = (M + 1/M)/2`` gives ``a = (M + 1/M)^2 / 4`` and
    ``b = (M + 1/M)^2 (M^2 + M^-2) / 8``.
    """
    m = Fraction(M)
    s = (m + 1 / m) ** 2
    return MomentVector(s / 4, s * (m**2 + 1 / m**2) / 8, math.log(M))


def quadratic_vertex(cert: DualCertificate):
    """Vertex ``(x*, f(x*))`` of ``f(x) = x y1 + x^2 y2 + y3``, or ``None`` if ``y2 <= 0``."""
    if cert.y2 <= 0:
        return None
    x = -cert.y1 / (2 * cert.y2)
    return x, cert.y3 - cert.y1**2 / (4 * cert.y2)


def _region_minimum(cert: DualCertificate, lo: int, hi: int | None):
    """Exact minimum of the slack over integers ``lo <= j <= hi`` (``hi=None``: unbounded).

    Returns ``(value, [minimizers])``; ``value`` is ``-inf`` if unbounded below.
    """
    cands = {lo}
    if hi is not None:
        cands.add(hi)
    if cert.y2 < 0 or (cert.y2 == 0 and cert.y1 < 0):
        if hi is None:
            return -math.inf, []
    if cert.y2 > 0:
        v = -cert.y1 / (2 * cert.y2)
        for k in (math.floor(v), math.ceil(v)):
            if k >= lo and (hi is None or k <= hi):
                cands.add(k)
    vals = {j: cert.slack(j) for j in cands}
    best = min(vals.values())
    return best, sorted(j for j, v in vals.items() if v == best)


def _exact_minimum(cert: DualCertificate, j_lo: int = 1, j_hi: int | None = None):
    """Minimum slack over ``j_lo <= j <= j_hi`` split at the cut."""
    parts = []
    M = cert.M
    if j_hi is None or j_hi >= j_lo:
        if j_lo <= M:
            parts.append(_region_minimum(cert, j_lo, M if j_hi is None else min(M, j_hi)))
        lo2 = max(j_lo, M + 1)
        if j_hi is None or j_hi >= lo2:
            parts.append(_region_minimum(cert, lo2, j_hi))
    best = min(p[0] for p in parts)
    pts = sorted(j for v, js in parts if v == best for j in js)
    return best, pts


def _enumerate_slack(cert: DualCertificate, j_max: int, chunk: int = 1 << 22):
    """Integer-exact scan of ``j = 1..j_max``; ``None`` if int64 would overflow."""
    D = math.lcm(cert.y1.denominator, cert.y2.denominator, cert.y3.denominator)
    Y1, Y2, Y3 = (int(v * D) for v in (cert.y1, cert.y2, cert.y3))
    bound = abs(Y2) * j_max * j_max + abs(Y1) * j_max + abs(Y3) + D
    if bound >= 1 << 62:
        return None
    best = None
    arg = None
    s = np.empty(chunk, dtype=np.int64)
    for lo, hi, const in ((1, min(cert.M, j_max), Y3), (cert.M + 1, j_max, Y3 + D)):
        for start in range(lo, hi + 1, chunk):
            j = np.arange(start, min(start + chunk, hi + 1), dtype=np.int64)
            v = s[: j.size]
            np.multiply(j, Y2, out=v)
            v += Y1
            v *= j
            v += const
            k = int(np.argmin(v))
            if best is None or v[k] < best:
                best, arg = int(v[k]), int(j[k])
    return Fraction(best, D), arg


def check_dual_feasibility(cert: DualCertificate, j_max: int) -> FeasibilityReport:
    """Verify the dual constraints for ``j <= j_max`` by scan and beyond analytically."""
    if j_max < cert.M + 1:
        raise InvalidArgument(f"j_max must be >= M+1 = {cert.M + 1}")
    scanned = _enumerate_slack(cert, j_max)
    exact_in, pts_in = _exact_minimum(cert, 1, j_max)
    if scanned is not None:
        worst_in, arg_in = scanned
        if worst_in != exact_in:
            raise AssertionError("scan and analytic minimum disagree")
    else:
        worst_in, arg_in = exact_in, pts_in[0]
    worst_out, pts_out = _exact_minimum(cert, j_max + 1, None)
    worst = min(worst_in, worst_out)
    tight = [j for j in pts_in if worst_in == worst] + [j for j in pts_out if worst_out == worst]
    argmin = arg_in if worst_in == worst else (pts_out[0] if pts_out else None)
    return FeasibilityReport(
        feasible=worst >= 0,
        worst_slack=worst,
        argmin=argmin,
        j_max=j_max,
        enumerated=scanned is not None,
        worst_beyond=worst_out,
        tight_points=tight,
    )


def is_feasible(cert: DualCertificate) -> bool:
    return _exact_minimum(cert)[0] >= 0


def dual_bound(cert: DualCertificate, moments: MomentVector) -> float:
    """Lower bound ``-(a y1 + b y2 + y3)`` on the tail mass beyond ``M``."""
    if not is_feasible(cert):
        raise InvalidArgument("certificate is infeasible; its bound is meaningless")
    if isinstance(moments.a, Fraction) and isinstance(moments.b, Fraction):
        return float(-(moments.a * cert.y1 + moments.b * cert.y2 + cert.y3))
    y1, y2, y3 = cert.as_floats()
    return -(moments.a * y1 + moments.b * y2 + y3)


def g(M: int) -> float:
    """Bound at ``t = log M`` for the closed-form certificate.

    In ``u = 1/M`` the bound is
    ``(1+u^2)^2 (1+u) / 2 - (1+u^2)^2 (1+u^4) / 8 - u (2+u)``,
    every term bounded, so there is no cancellation of large numbers.
    """
    if M < 1:
        raise InvalidArgument(f"M must be >= 1, got {M}")
    u = 1.0 / M
    w = (1.0 + u * u) ** 2
    return 0.5 * w * (1.0 + u) - 0.125 * w * (1.0 + u**4) - u * (2.0 + u)


def g_exact(M: int) -> Fraction:
    """``g(M)`` as an exact rational, straight from the dual objective."""
    cert = paper_certificate(M)
    mom = moments_at_log(M)
    return -(mom.a * cert.y1 + mom.b * cert.y2 + cert.y3)


def solve_primal_truncated(moments: MomentVector, M: int, L: int | None = None) -> PrimalSolution:
    """Minimize the tail mass over distributions on ``j = 1..L`` with given moments.

    ``L`` defaults to ``20 M^2``.  Solved exactly with the in-repo simplex;
    the optimum is attained at a basic solution with at most three atoms.
    """
    if L is None:
        L = 20 * M * M
    if L <= M + 1:
        raise InvalidArgument(f"support size L={L} must exceed M+1={M + 1}")
    a = Fraction(moments.a)
    b = Fraction(moments.b)
    if b < a * a or a < 1 or a > L or b > L * L:
        raise InfeasibleProblem(f"moments (a={float(a)}, b={float(b)}) not representable on 1..{L}")
    j = list(range(1, L + 1))
    A = [j, [k * k for k in j], [1] * L]
    c = [1 if k > M else 0 for k in j]
    res = simplex.solve_lp(A, [a, b, 1], c)
    support = {k: res.x[k - 1] for k in j if res.x[k - 1] != 0}
    return PrimalSolution(support, res.objective, res.iterations)
