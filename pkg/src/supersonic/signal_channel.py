"""Receiver statistics and the induced binary channel.

Party A either leaves the chain in the vacuum (click probability ``P0``) or
injects one excitation (click probability ``P1``).  The vacuum is an exact
eigenstate and the receiver projector annihilates it, so ``P0 = 0`` and the
channel is a Z-channel with signal strength ``delta = P1``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from scipy.optimize import minimize_scalar
from scipy.special import xlogy

from .errors import InvalidArgument
from .evolution import PropagationConfig, evolve_adaptive
from .excitation_core import ExcitationState, HittingOperator
from .tail_bound_lp import g


@dataclass
class SignalReport:
    m: int
    M: int
    t_star: float
    P1: float
    P0: float
    delta: float
    dual_bound_value: float
    capacity_bits: float
    level_count_used: int
    tail_weight: float

    def as_dict(self):
        return asdict(self)


def cut_level(m: int) -> int:
    """``M = 2m - 2`` for receiver site ``m``."""
    return 2 * m - 2


def hitting_probability(state: ExcitationState, m: int) -> float:
    """``tr[rho T]``: weight on levels ``l >= 2m - 1``."""
    T = HittingOperator(m, state.level_count)
    if T.first_level >= state.level_count:
        raise InvalidArgument(
            f"cut level {T.first_level} beyond truncation {state.level_count}; mass would be lost"
        )
    return T.expectation(state.amplitudes)


def _binary_entropy(p):
    q = 1.0 - p
    return -(xlogy(p, p) + xlogy(q, q)) / math.log(2.0)


def mutual_information(prior: float, P0: float, P1: float) -> float:
    """``I(X;Y)`` in bits for input prior ``Pr[X=1] = prior``."""
    out = prior * P1 + (1.0 - prior) * P0
    return float(_binary_entropy(out) - prior * _binary_entropy(P1) - (1.0 - prior) * _binary_entropy(P0))


def binary_channel_capacity(P0: float, P1: float, xatol: float = 1e-10) -> float:
    """Shannon capacity (bits) of the binary channel with click probabilities ``P0``, ``P1``.

    Mutual information is concave in the prior, so a bounded scalar search
    converges to the maximum.
    """
    for p in (P0, P1):
        if not 0.0 <= p <= 1.0:
            raise InvalidArgument(f"probability {p} outside [0, 1]")
    if P0 == P1:
        return 0.0
    res = minimize_scalar(
        lambda q: -mutual_information(q, P0, P1),
        bounds=(0.0, 1.0),
        method="bounded",
        options={"xatol": xatol},
    )
    return float(min(max(-res.fun, 0.0), 1.0))


def signal_report(m: int, t: float, cfg: PropagationConfig | None = None) -> SignalReport:
    if m < 2:
        raise InvalidArgument(f"receiver site m must be >= 2, got {m}")
    cfg = cfg or PropagationConfig()
    M = cut_level(m)
    # the hitting projector must lie inside the truncated space
    init = max(cfg.initial_level_count, 2 * m)
    if init != cfg.initial_level_count:
        cfg = PropagationConfig(cfg.tol, cfg.tail_tolerance, init, cfg.growth_factor, cfg.max_level_count)
    res = evolve_adaptive(t, cfg)
    P1 = hitting_probability(res.final_state, m)
    P0 = 0.0
    return SignalReport(
        m=m,
        M=M,
        t_star=t,
        P1=P1,
        P0=P0,
        delta=abs(P0 - P1),
        dual_bound_value=g(M),
        capacity_bits=binary_channel_capacity(P0, P1),
        level_count_used=res.level_count_used,
        tail_weight=res.tail_weight,
    )


def auto_time(m: int) -> float:
    """``t* = log M`` with ``M = 2m - 2``."""
    return math.log(cut_level(m))
