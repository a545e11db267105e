"""Uniform-hopping reduction of Bose-Hubbard-type chains.

Filling every site to ``N`` and adding one boson at site 1 confines the
dynamics (for strong on-site interaction) to the ``n``-dimensional subspace
with a single ``N+1`` site.  There the chain is the open uniform hopping
model ``V = J sum_{j<n} (|j><j+1| + h.c.)`` with ``J = N + 1``, solved in its
sine-mode eigenbasis.  The block-exponential lemma that justifies the
reduction is checked with a penalty ``x * identity`` on the complement.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import FitFailure, InvalidArgument


@dataclass(frozen=True)
class UniformChainConfig:
    n: int
    N: int
    t_grid: tuple = field(default=())

    def __post_init__(self):
        if self.n < 2:
            raise InvalidArgument(f"need n >= 2, got {self.n}")
        if self.N < 0:
            raise InvalidArgument(f"need N >= 0, got {self.N}")
        object.__setattr__(self, "t_grid", tuple(float(t) for t in self.t_grid))

    @property
    def J(self) -> float:
        return float(self.N + 1)


def _modes(n: int):
    k = np.arange(1, n + 1)
    theta = k * np.pi / (n + 1)
    # phi[k, j] = sqrt(2/(n+1)) sin(k j pi/(n+1)), j one-based
    phi = np.sqrt(2.0 / (n + 1)) * np.sin(np.outer(k, np.arange(1, n + 1)) * np.pi / (n + 1))
    return np.cos(theta), phi


def uniform_chain_amplitude(n: int, J: float, t, target: int | None = None):
    """``<target| exp(-itV) |1>``; ``target=None`` returns all sites (last axis)."""
    if target is not None and not 1 <= target <= n:
        raise InvalidArgument(f"target {target} outside 1..{n}")
    c, phi = _modes(n)
    t = np.asarray(t, dtype=np.float64)
    phase = np.exp(-1j * np.multiply.outer(t, 2.0 * J * c))      # (..., k)
    w = phase * phi[:, 0]
    if target is None:
        return w @ phi
    return w @ phi[:, target - 1]


def hopping_matrix(n: int, J: float) -> np.ndarray:
    V = np.zeros((n, n))
    i = np.arange(n - 1)
    V[i, i + 1] = V[i + 1, i] = J
    return V


@dataclass
class ArrivalProfile:
    n: int
    J: float
    times: np.ndarray
    probability: np.ndarray
    peak_time: float
    peak_value: float


def default_grid(n: int, J: float, steps: int = 2000) -> np.ndarray:
    """``[0, n/J]``: long enough for the first arrival at site ``n``, short of the echo."""
    return np.linspace(0.0, n / J, steps + 1)


def _profile(n: int, J: float, times: np.ndarray) -> ArrivalProfile:
    prob = np.abs(uniform_chain_amplitude(n, J, times, n)) ** 2
    k = int(np.argmax(prob))
    peak_t, peak_v = float(times[k]), float(prob[k])
    if 0 < k < len(times) - 1:
        res = minimize_scalar(
            lambda s: -abs(uniform_chain_amplitude(n, J, s, n)) ** 2,
            bounds=(times[k - 1], times[k + 1]),
            method="bounded",
            options={"xatol": 1e-12 * max(1.0, times[k])},
        )
        if -res.fun >= peak_v:
            peak_t, peak_v = float(res.x), float(-res.fun)
    return ArrivalProfile(n, J, times, prob, peak_t, peak_v)


def arrival_profile(cfg: UniformChainConfig) -> ArrivalProfile:
    """``|<n|exp(-itV)|1>|^2`` on the grid, with the peak refined between grid points."""
    times = np.asarray(cfg.t_grid) if cfg.t_grid else default_grid(cfg.n, cfg.J)
    return _profile(cfg.n, cfg.J, times)


@dataclass
class VelocityFit:
    J: float
    n_values: list
    peak_times: list
    peak_values: list
    speed: float
    intercept: float
    decay_exponent: float


def velocity_fit(n_values, J: float, steps: int = 2000) -> VelocityFit:
    """Least-squares slope of peak time against ``n``; speed is its inverse.

    Also reports the exponent ``alpha`` in ``|amplitude|_peak ~ n^-alpha``.
    """
    n_values = [int(n) for n in n_values]
    if len(set(n_values)) < 3:
        raise FitFailure("need at least three distinct chain lengths")
    peaks = [_profile(n, J, default_grid(n, J, steps)) for n in n_values]
    tp = np.array([p.peak_time for p in peaks])
    nv = np.array(n_values, dtype=float)
    slope, intercept = np.polyfit(nv, tp, 1)
    if not slope > 0:
        raise FitFailure(f"non-positive slope {slope}")
    amp = np.sqrt([p.peak_value for p in peaks])
    alpha = -np.polyfit(np.log(nv), np.log(amp), 1)[0]
    return VelocityFit(J, n_values, tp.tolist(), [p.peak_value for p in peaks],
                       float(1.0 / slope), float(intercept), float(alpha))


@dataclass
class LemmaInstance:
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    x: float
    t: float

    def assembled(self) -> np.ndarray:
        return np.block([[self.A, self.B], [self.B.conj().T, self.C]])


def random_lemma_blocks(dA: int, dC: int, seed: int, zero_coupling: bool = False):
    """Seeded complex Gaussian blocks with Hermitian ``A`` and ``C``."""
    rng = np.random.default_rng(seed)

    def herm(d):
        G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        return 0.5 * (G + G.conj().T)

    A = herm(dA)
    C = herm(dC)
    B = rng.standard_normal((dA, dC)) + 1j * rng.standard_normal((dA, dC))
    if zero_coupling:
        B = np.zeros_like(B)
    return A, B, C


def _expi(H: np.ndarray, t: float) -> np.ndarray:
    w, U = np.linalg.eigh(H)
    return (U * np.exp(1j * t * w)) @ U.conj().T


def lemma_gap(inst: LemmaInstance, use_structure: bool = True) -> float:
    """``|| O exp(itK) O^dag - exp(itA) ||`` with ``K = M + diag(0, x 1)``.

    With ``use_structure=False`` the dense route is taken even when the
    answer is known to vanish.
    """
    dA = inst.A.shape[0]
    if use_structure and (inst.t == 0 or not np.any(inst.B)):
        # block-diagonal K: the top block of exp(itK) is exp(itA) itself
        return 0.0
    K = inst.assembled()
    K[dA:, dA:] += inst.x * np.eye(K.shape[0] - dA)
    top = _expi(K, inst.t)[:dA, :dA]
    return float(np.linalg.norm(top - _expi(inst.A, inst.t), 2))
