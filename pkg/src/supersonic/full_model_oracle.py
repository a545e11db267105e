"""Truncated spin-1 bosonic chain, used as ground truth for ``E``.

Local basis ``|k, s>`` with Fock level ``0 <= k <= K`` and spin ``s`` in
{up, down}; local index ``2k + (0 if up else 1)``.  Product states are
indexed row-major over sites (site 1 most significant).

On-site term::

    g = 2 sum_k (i k |k+1,up><k,down| + h.c.) + |0,down><0,down|

Hopping term between sites j, j+1::

    f = sum_l (2l - 1) (i |0,down><l,up| (x) |l,down><0,down| + h.c.)

i.e. ``i A^dag_{j;l,0} B_{j+1;l,0}``: an up-excitation at level ``l`` on site
``j`` moves to a down-excitation at the same level on site ``j+1``.  Inside
the single-excitation sector this reproduces ``E`` plus ``(n-1)`` from the
vacuum sites.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply

from .errors import InvalidArgument, ResourceExhausted
from .evolution import propagate
from .excitation_core import EffectiveHamiltonian

UP, DOWN = 0, 1
DENSE_LIMIT = 4096
DEFAULT_DIMENSION_CAP = 10**6


@dataclass(frozen=True)
class FullModelConfig:
    n: int
    K: int
    dimension_cap: int = DEFAULT_DIMENSION_CAP

    def __post_init__(self):
        if self.n < 2:
            raise InvalidArgument(f"need n >= 2 sites, got {self.n}")
        if self.K < 1:
            raise InvalidArgument(f"Fock cutoff K must be >= 1, got {self.K}")

    @property
    def local_dim(self) -> int:
        return 2 * (self.K + 1)

    @property
    def dimension(self) -> int:
        return self.local_dim**self.n

    def check_cap(self):
        if self.dimension > self.dimension_cap:
            raise ResourceExhausted(
                f"dimension {self.dimension} exceeds cap {self.dimension_cap}",
                cap=self.dimension_cap,
                dimension=self.dimension,
            )


@dataclass(frozen=True)
class SectorState:
    level: int      # index l of ||l>>
    site: int       # one-based
    fock: int
    spin: int
    index: int      # position in the product basis


def local_index(k: int, spin: int) -> int:
    return 2 * k + spin


def product_index(cfg: FullModelConfig, local: list[int]) -> int:
    idx = 0
    for v in local:
        idx = idx * cfg.local_dim + v
    return idx


def vacuum_index(cfg: FullModelConfig) -> int:
    return product_index(cfg, [local_index(0, DOWN)] * cfg.n)


def excited_index(cfg: FullModelConfig) -> int:
    return product_index(cfg, [local_index(1, UP)] + [local_index(0, DOWN)] * (cfg.n - 1))


def sector_basis(cfg: FullModelConfig) -> list[SectorState]:
    """States ``||l>>`` for ``l = 0..2n-2`` representable under the cutoff.

    Even ``l``: ``|l/2+1, up>`` on site ``l/2+1``; odd ``l``: ``|(l+1)/2, down>``
    on site ``l/2+3/2``.
    """
    out = []
    vac = local_index(0, DOWN)
    for l in range(2 * cfg.n - 1):
        if l % 2 == 0:
            site, fock, spin = l // 2 + 1, l // 2 + 1, UP
        else:
            site, fock, spin = (l + 3) // 2, (l + 1) // 2, DOWN
        if fock > cfg.K:
            continue
        local = [vac] * cfg.n
        local[site - 1] = local_index(fock, spin)
        out.append(SectorState(l, site, fock, spin, product_index(cfg, local)))
    return out


def _onsite_term(K: int) -> sp.csr_matrix:
    d = 2 * (K + 1)
    g = sp.lil_matrix((d, d), dtype=np.complex128)
    for k in range(1, K):
        g[local_index(k + 1, UP), local_index(k, DOWN)] += 2j * k
        g[local_index(k, DOWN), local_index(k + 1, UP)] += -2j * k
    g[local_index(0, DOWN), local_index(0, DOWN)] += 1.0
    return g.tocsr()


def _hopping_term(K: int) -> sp.csr_matrix:
    d = 2 * (K + 1)
    f = sp.lil_matrix((d * d, d * d), dtype=np.complex128)
    vac = local_index(0, DOWN)
    for l in range(1, K + 1):
        src = local_index(l, UP) * d + vac
        dst = vac * d + local_index(l, DOWN)
        f[dst, src] += 1j * (2 * l - 1)
        f[src, dst] += -1j * (2 * l - 1)
    return f.tocsr()


def _embed(op: sp.spmatrix, left: int, right: int) -> sp.csr_matrix:
    out = op
    if left > 1:
        out = sp.kron(sp.identity(left, format="csr"), out, format="csr")
    if right > 1:
        out = sp.kron(out, sp.identity(right, format="csr"), format="csr")
    return out.tocsr()


@functools.lru_cache(maxsize=8)
def build_full_hamiltonian(cfg: FullModelConfig) -> sp.csr_matrix:
    """Sparse Hermitian ``H = sum_j f_{j,j+1} + sum_j g_j`` with open boundaries."""
    cfg.check_cap()
    d, n = cfg.local_dim, cfg.n
    g = _onsite_term(cfg.K)
    f = _hopping_term(cfg.K)
    H = sp.csr_matrix((cfg.dimension, cfg.dimension), dtype=np.complex128)
    for j in range(n):
        H = H + _embed(g, d**j, d ** (n - j - 1))
    for j in range(n - 1):
        H = H + _embed(f, d**j, d ** (n - j - 2))
    H.sum_duplicates()
    H.eliminate_zeros()
    H.sort_indices()
    return H


def export_coo(H: sp.spmatrix, path) -> None:
    """Write ``row col re im`` per nonzero, zero-based, row-major order."""
    C = sp.coo_matrix(H)
    order = np.lexsort((C.col, C.row))
    with open(path, "w") as fh:
        fh.write(f"# shape {C.shape[0]} {C.shape[1]} nnz {C.nnz}\n")
        for k in order:
            v = C.data[k]
            fh.write(f"{C.row[k]} {C.col[k]} {float(v.real)!r} {float(v.imag)!r}\n")


def sector_matrix(cfg: FullModelConfig) -> np.ndarray:
    """``Pi H Pi`` in the sector basis (rows/cols ordered by level)."""
    H = build_full_hamiltonian(cfg)
    idx = [s.index for s in sector_basis(cfg)]
    return H[idx][:, idx].toarray()


@functools.lru_cache(maxsize=4)
def _eigh(cfg: FullModelConfig):
    return np.linalg.eigh(build_full_hamiltonian(cfg).toarray())


def evolve_full(cfg: FullModelConfig, t: float) -> np.ndarray:
    """``exp(-itH) |1,up>|0,down>^(n-1)``.

    Dense diagonalization below ``DENSE_LIMIT`` states, ``expm_multiply`` above.
    """
    cfg.check_cap()
    psi0 = np.zeros(cfg.dimension, dtype=np.complex128)
    psi0[excited_index(cfg)] = 1.0
    if t == 0:
        return psi0
    if cfg.dimension < DENSE_LIMIT:
        w, V = _eigh(cfg)
        return V @ (np.exp(-1j * w * t) * V[excited_index(cfg)].conj())
    H = build_full_hamiltonian(cfg)
    return expm_multiply(-1j * t * H, psi0)


@functools.lru_cache(maxsize=8)
def _level_K_mask(cfg: FullModelConfig) -> np.ndarray:
    idx = np.arange(cfg.dimension, dtype=np.int64)
    hit = np.zeros(cfg.dimension, dtype=bool)
    for _ in range(cfg.n):
        hit |= (idx % cfg.local_dim) // 2 == cfg.K
        idx //= cfg.local_dim
    return hit


def level_K_occupation(cfg: FullModelConfig, psi: np.ndarray) -> float:
    """Probability that some site sits at the cutoff level ``K``."""
    return float(np.sum(np.abs(psi[_level_K_mask(cfg)]) ** 2))


def _leakage(cfg, psi):
    mask = np.ones(cfg.dimension, dtype=bool)
    mask[[s.index for s in sector_basis(cfg)]] = False
    return float(np.sum(np.abs(psi[mask]) ** 2))


def effective_state(n: int, t: float) -> np.ndarray:
    """``exp(-itE) ||0>>`` for the finite chain (``2n-1`` levels)."""
    H = EffectiveHamiltonian(2 * n - 1)
    psi0 = np.zeros(H.level_count, dtype=np.complex128)
    psi0[0] = 1.0
    return propagate(H, psi0, t, 1e-13)[0]


def _sector_overlap(cfg, psi_full, t):
    basis = sector_basis(cfg)
    eff = effective_state(cfg.n, t)
    # the n-1 vacuum sites contribute a uniform shift (n-1) inside the sector
    phase = np.exp(1j * (cfg.n - 1) * t)
    proj = np.zeros_like(eff)
    for s in basis:
        proj[s.level] = phase * psi_full[s.index]
    return np.vdot(eff, proj), float(np.linalg.norm(proj - eff))


def sector_leakage(cfg: FullModelConfig, t: float) -> float:
    """Weight of the evolved excited state outside the sector basis."""
    return _leakage(cfg, evolve_full(cfg, t))


def sector_fidelity(cfg: FullModelConfig, t: float) -> float:
    """``|<psi_eff(t)| Pi psi_full(t)>|`` after removing the sector phase."""
    return float(abs(_sector_overlap(cfg, evolve_full(cfg, t), t)[0]))


def energy_scale(cfg: FullModelConfig, excited: bool) -> float:
    """``sqrt(<phi|H^2|phi>) = ||H phi||`` for the vacuum or the excited state."""
    H = build_full_hamiltonian(cfg)
    phi = np.zeros(cfg.dimension, dtype=np.complex128)
    phi[excited_index(cfg) if excited else vacuum_index(cfg)] = 1.0
    return float(np.linalg.norm(H @ phi))


@dataclass
class OracleReport:
    n: int
    K: int
    t: float
    leakage: float
    fidelity: float
    amplitude_error: float
    level_K_occupation: float
    cutoff_ok: bool
    E0: float
    E1: float

    def as_dict(self):
        return dict(self.__dict__)


def run_oracle(cfg: FullModelConfig, t: float, occupation_guard: float = 1e-6) -> OracleReport:
    psi = evolve_full(cfg, t)
    overlap, err = _sector_overlap(cfg, psi, t)
    occ = level_K_occupation(cfg, psi)
    return OracleReport(
        n=cfg.n,
        K=cfg.K,
        t=t,
        leakage=_leakage(cfg, psi),
        fidelity=float(abs(overlap)),
        amplitude_error=err,
        level_K_occupation=occ,
        cutoff_ok=occ < occupation_guard,
        E0=energy_scale(cfg, False),
        E1=energy_scale(cfg, True),
    )
