"""Certified propagation of excitation states under ``E``.

The propagator is a Chebyshev expansion of ``exp(-itE)`` scaled by the
Gershgorin bound ``R = 2(L-1)``.  Because ``E = iS`` with ``S`` real, the
terms ``u_k = (-i)^k T_k(E/R) psi0`` obey the real recurrence

    u_{k+1} = 2 (S/R) u_k + u_{k-1},

and ``exp(-itE) psi0 = J_0(Rt) u_0 + 2 sum_k J_k(Rt) u_k``.  For orders
``k > Rt`` the Bessel coefficients are positive and decrease with ratio
below ``Rt / (2k + 2 - Rt)``, which bounds the discarded tail.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import jv

from .errors import InvalidArgument, PropagationFailure, ResourceExhausted
from .excitation_core import EffectiveHamiltonian, ExcitationState

DEFAULT_TOL = 1e-10
DEFAULT_TAIL_TOL = 1e-12
MAX_DEGREE = 5_000_000


@dataclass(frozen=True)
class PropagationConfig:
    tol: float = DEFAULT_TOL
    tail_tolerance: float = DEFAULT_TAIL_TOL
    initial_level_count: int = 64
    growth_factor: float = 2.0
    max_level_count: int = 1 << 21

    def __post_init__(self):
        if not self.tol > 0:
            raise InvalidArgument("tol must be positive")
        if not self.tail_tolerance > 0:
            raise InvalidArgument("tail_tolerance must be positive")
        if not self.growth_factor > 1:
            raise InvalidArgument("growth_factor must exceed 1")
        if self.initial_level_count < 2:
            raise InvalidArgument("initial_level_count must be >= 2")


@dataclass
class EvolutionResult:
    final_state: ExcitationState
    level_count_used: int
    unitarity_defect: float
    tail_weight: float
    attempts: list = field(default_factory=list)


@dataclass
class PropagationInfo:
    degree: int
    degree_coarse: int
    unitarity_defect: float
    tolerance_gap: float
    truncation_bound: float


def _bessel_tail_bound(J: np.ndarray, z: float, K: int) -> float:
    """Upper bound on ``sum_{k>K} |J_k(z)|`` valid for ``K >= z``."""
    r = z / (2.0 * K + 4.0 - z)
    return abs(J[K + 1]) / (1.0 - r)


def _chebyshev_degree(z: float, tol: float) -> tuple[int, np.ndarray]:
    """Smallest degree ``K >= z`` whose discarded terms sum below ``tol``."""
    start = math.ceil(z)
    margin = 12.0 * z ** (1.0 / 3.0) + 60.0
    while True:
        kmax = math.ceil(z + margin)
        if kmax > MAX_DEGREE:
            raise PropagationFailure(
                "Chebyshev degree exceeds budget", z=z, tol=tol, budget=MAX_DEGREE
            )
        J = jv(np.arange(kmax + 2), z)
        for K in range(start, kmax + 1):
            if 2.0 * _bessel_tail_bound(J, z, K) <= tol:
                return K, J
        margin *= 2.0


def propagate(H: EffectiveHamiltonian, psi0: np.ndarray, t: float, tol: float = DEFAULT_TOL):
    """Return ``(exp(-itE) psi0, PropagationInfo)``.

    The series is summed to the degree required for ``tol / 10``; the partial
    sum at the degree for ``tol`` is kept to check that the two runs agree.
    """
    psi0 = np.asarray(psi0, dtype=np.complex128)
    L = H.level_count
    if psi0.shape != (L,):
        raise InvalidArgument(f"state has {psi0.shape[0]} levels, Hamiltonian has {L}")
    norm_defect = abs(float(np.vdot(psi0, psi0).real) - 1.0)
    if norm_defect > tol:
        raise InvalidArgument(f"initial state is not normalized (defect {norm_defect:.3e})")
    if t < 0:
        raise InvalidArgument("t must be >= 0")
    if t == 0:
        return psi0.copy(), PropagationInfo(0, 0, norm_defect, 0.0, 0.0)

    R = H.spectral_bound
    z = R * t
    K_fine, J = _chebyshev_degree(z, tol / 10.0)
    K_coarse = _chebyshev_degree(z, tol)[0]
    c = H.couplings
    scale = 2.0 / R

    # real and imaginary parts evolve independently under the real generator
    def run(v0):
        u_prev = v0.copy()
        u = np.empty_like(v0)
        u[0] = 0.0
        u[1:] = c * v0[:-1]
        u[:-1] -= c * v0[1:]
        u *= 0.5 * scale
        acc = J[0] * u_prev + 2.0 * J[1] * u
        coarse = acc.copy() if K_coarse <= 1 else None
        w = np.empty_like(v0)
        for k in range(2, K_fine + 1):
            w[0] = 0.0
            np.multiply(c, u[:-1], out=w[1:])
            w[:-1] -= c * u[1:]
            w *= scale
            w += u_prev
            u_prev, u, w = u, w, u_prev
            acc += (2.0 * J[k]) * u
            if k == K_coarse:
                coarse = acc.copy()
        return acc, coarse

    re, re_c = run(psi0.real.copy())
    if np.any(psi0.imag):
        im, im_c = run(psi0.imag.copy())
    else:
        im = im_c = np.zeros(L)
    psi = re + 1j * im
    psi_coarse = re_c + 1j * im_c

    defect = abs(float(np.vdot(psi, psi).real) - 1.0)
    gap = float(np.linalg.norm(psi - psi_coarse))
    info = PropagationInfo(
        degree=K_fine,
        degree_coarse=K_coarse,
        unitarity_defect=defect,
        tolerance_gap=gap,
        truncation_bound=2.0 * _bessel_tail_bound(J, z, K_fine),
    )
    if defect > tol or gap > 2.0 * tol:
        raise PropagationFailure(
            "propagation failed certification",
            unitarity_defect=defect,
            tolerance_gap=gap,
            degree=K_fine,
            level_count=L,
        )
    return psi, info


def evolve(H: EffectiveHamiltonian, psi0: ExcitationState, t: float, tol: float = DEFAULT_TOL) -> ExcitationState:
    psi, _ = propagate(H, psi0.amplitudes, t, tol)
    return ExcitationState(psi, psi0.time_stamp + t)


def evolve_adaptive(t: float, cfg: PropagationConfig | None = None) -> EvolutionResult:
    """Evolve ``||0>>`` to time ``t``, growing ``L`` until the tail is negligible."""
    cfg = cfg or PropagationConfig()
    if t < 0:
        raise InvalidArgument("t must be >= 0")
    L = cfg.initial_level_count
    attempts = []
    last_tail = None
    while True:
        if L > cfg.max_level_count:
            raise ResourceExhausted(
                f"level count {L} exceeds cap {cfg.max_level_count}",
                cap=cfg.max_level_count,
                last_tail_weight=last_tail,
                attempts=attempts,
            )
        H = EffectiveHamiltonian(L)
        psi, info = propagate(H, ExcitationState.basis(0, L).amplitudes, t, cfg.tol)
        state = ExcitationState(psi, t)
        last_tail = state.tail_weight()
        attempts.append({"level_count": L, "tail_weight": last_tail, "degree": info.degree})
        if last_tail <= cfg.tail_tolerance:
            return EvolutionResult(state, L, info.unitarity_defect, last_tail, attempts)
        L = math.ceil(L * cfg.growth_factor)


def measured_moment(state: ExcitationState, order: int) -> float:
    """``sum_l (l+1)^order |psi_l|^2``."""
    if order not in (1, 2):
        raise InvalidArgument("order must be 1 or 2")
    x = np.arange(1, state.level_count + 1, dtype=np.float64)
    return float(np.dot(x**order, state.populations))
