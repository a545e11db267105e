"""Effective single-excitation Hamiltonian and its companion operators.

Levels ``l = 0..L-1`` index the basis ``||l>>``.  The Hamiltonian is

    E = sum_l i (l+1) (||l+1>><<l|| - ||l>><<l+1||)

truncated with a hard wall at level ``L-1``.  Writing ``E = i S`` with ``S``
a real antisymmetric integer matrix lets the algebra checks run in exact
integer arithmetic and the propagator in real arithmetic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import InvalidArgument


@dataclass(frozen=True)
class EffectiveHamiltonian:
    """Truncated tridiagonal ``E`` with couplings ``i(l+1)`` below the diagonal."""

    level_count: int

    def __post_init__(self):
        if self.level_count < 2:
            raise InvalidArgument(f"level_count must be >= 2, got {self.level_count}")

    @property
    def couplings(self) -> np.ndarray:
        """Coupling magnitudes ``l+1`` for ``l = 0..L-2``."""
        return np.arange(1, self.level_count, dtype=np.float64)

    @property
    def spectral_bound(self) -> float:
        # Gershgorin: row l has off-diagonal mass l + (l+1) <= 2(L-1)
        return 2.0 * (self.level_count - 1)

    def generator(self) -> sp.csr_matrix:
        """Integer antisymmetric ``S`` with ``E = i S``."""
        c = np.arange(1, self.level_count, dtype=np.int64)
        return sp.diags([c, -c], [-1, 1], format="csr", dtype=np.int64)

    def to_sparse(self) -> sp.csr_matrix:
        return (1j * self.generator()).astype(np.complex128).tocsr()

    def to_dense(self) -> np.ndarray:
        return self.to_sparse().toarray()


@dataclass
class ExcitationState:
    amplitudes: np.ndarray
    time_stamp: float = 0.0

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)

    @property
    def level_count(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    @property
    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def tail_weight(self, fraction: float = 0.1) -> float:
        """Weight in the top ``fraction`` of levels, i.e. ``l >= (1-fraction) L``."""
        start = math.ceil((1.0 - fraction) * self.level_count)
        return float(self.populations[start:].sum())

    @classmethod
    def basis(cls, level: int, level_count: int) -> "ExcitationState":
        if not 0 <= level < level_count:
            raise InvalidArgument(f"level {level} outside 0..{level_count - 1}")
        psi = np.zeros(level_count, dtype=np.complex128)
        psi[level] = 1.0
        return cls(psi, 0.0)


def build_effective_hamiltonian(L: int) -> EffectiveHamiltonian:
    return EffectiveHamiltonian(int(L))


def position_operator(L: int) -> sp.csr_matrix:
    """Diagonal ``X`` with entries ``l+1`` (integer)."""
    return sp.diags(np.arange(1, L + 1, dtype=np.int64), 0, format="csr", dtype=np.int64)


def momentum_operator(L: int) -> sp.csr_matrix:
    """Real symmetric ``P`` with ``(l+1)`` on both off-diagonals.

    The sum starts at ``l = 0``; this is what ``i[E, X] = P`` requires.
    """
    c = np.arange(1, L, dtype=np.int64)
    return sp.diags([c, c], [-1, 1], format="csr", dtype=np.int64)


@dataclass(frozen=True)
class HittingOperator:
    """Projector onto levels ``l >= 2m-1`` (receiver beyond site ``m``)."""

    cut_site: int
    level_count: int
    first_level: int = field(init=False)

    def __post_init__(self):
        if self.cut_site < 1:
            raise InvalidArgument(f"cut site must be >= 1, got {self.cut_site}")
        object.__setattr__(self, "first_level", 2 * self.cut_site - 1)

    @property
    def rank(self) -> int:
        return max(self.level_count - self.first_level, 0)

    def to_sparse(self) -> sp.csr_matrix:
        d = (np.arange(self.level_count) >= self.first_level).astype(np.int64)
        return sp.diags(d, 0, format="csr", dtype=np.int64)

    def expectation(self, amplitudes: np.ndarray) -> float:
        return float(np.sum(np.abs(amplitudes[self.first_level:]) ** 2))


def analytic_first_moment(t: float) -> float:
    """``<<0|X(t)|0>> = (1 + cosh 2t) / 2``."""
    return 0.5 * (1.0 + math.cosh(2.0 * t))


def analytic_second_moment(t: float) -> float:
    """``<<0|X(t)^2|0>> = cosh^2(t) cosh(2t)``."""
    return math.cosh(t) ** 2 * math.cosh(2.0 * t)


@dataclass
class AlgebraReport:
    level_count: int
    max_deviation_interior: int
    max_deviation_full: int
    defect_rows: tuple

    def as_dict(self):
        return {
            "level_count": self.level_count,
            "max_deviation_interior": self.max_deviation_interior,
            "max_deviation_full": self.max_deviation_full,
            "defect_rows": list(self.defect_rows),
        }


def verify_algebra(L: int) -> AlgebraReport:
    """Check ``i[E,X] = P`` and ``i[E,P] = 4X - 2`` in integer arithmetic.

    With ``E = iS`` both commutators reduce to ``-[S, .]`` which stays integer.
    The interior (rows and columns below ``L-2``) must be exactly zero; the
    hard wall leaves a defect in the last rows.
    """
    if L < 4:
        raise InvalidArgument(f"verify_algebra needs L >= 4, got {L}")
    S = EffectiveHamiltonian(L).generator()
    X = position_operator(L)
    P = momentum_operator(L)
    one = sp.identity(L, dtype=np.int64, format="csr")

    d1 = (-(S @ X - X @ S) - P).tocoo()
    d2 = (-(S @ P - P @ S) - (4 * X - 2 * one)).tocoo()

    interior = 0
    full = 0
    rows = set()
    for d in (d1, d2):
        nz = d.data != 0
        if not nz.any():
            continue
        r, c, v = d.row[nz], d.col[nz], np.abs(d.data[nz])
        full = max(full, int(v.max()))
        inside = (r < L - 2) & (c < L - 2)
        if inside.any():
            interior = max(interior, int(v[inside].max()))
        rows.update(int(x) for x in r)
    return AlgebraReport(L, interior, full, tuple(sorted(rows)))
