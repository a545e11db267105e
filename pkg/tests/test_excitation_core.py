import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from supersonic.errors import InvalidArgument
from supersonic.excitation_core import (
    ExcitationState,
    HittingOperator,
    analytic_first_moment,
    analytic_second_moment,
    build_effective_hamiltonian,
    momentum_operator,
    position_operator,
    verify_algebra,
)

# mpmath, 40 digits
A1 = 2.381097845541815729781106738886873054147
B1 = 8.958156054545937387081604141903638009772


def test_two_level_hamiltonian():
    E = build_effective_hamiltonian(2).to_dense()
    assert E[1, 0] == 1j
    assert E[0, 1] == -1j
    assert E[0, 0] == E[1, 1] == 0


def test_coupling_between_levels_one_and_two():
    E = build_effective_hamiltonian(3).to_dense()
    assert abs(E[2, 1]) == 2
    assert E[2, 1] == 2j


def test_rejects_single_level():
    with pytest.raises(InvalidArgument):
        build_effective_hamiltonian(1)


@given(st.integers(min_value=2, max_value=60))
def test_operators_hermitian_and_tridiagonal(L):
    E = build_effective_hamiltonian(L).to_dense()
    assert np.array_equal(E, E.conj().T)
    assert not np.any(np.diag(E))
    assert np.array_equal(np.abs(np.diag(E, -1)), np.arange(1, L))
    assert not np.any(np.triu(E, 2))
    X = position_operator(L).toarray()
    P = momentum_operator(L).toarray()
    assert np.array_equal(X, X.T) and np.array_equal(P, P.T)
    assert np.all(np.diff(np.diag(X)) > 0) and np.diag(X)[0] == 1
    assert not np.any(np.diag(P))


@pytest.mark.parametrize("L", [10, 100])
def test_algebra_interior_exact(L):
    rep = verify_algebra(L)
    assert rep.max_deviation_interior == 0


def test_algebra_edge_defect_confined():
    rep = verify_algebra(10)
    assert all(r >= 10 - 2 for r in rep.defect_rows)
    # at l = L-1 only the lower neighbour contributes: i[E,P]_ll = -2(L-1)^2
    # against 4L - 2, so the defect is -2 L^2
    E = build_effective_hamiltonian(10).to_dense()
    P = momentum_operator(10).toarray()
    X = position_operator(10).toarray()
    d = 1j * (E @ P - P @ E) - (4 * X - 2 * np.eye(10))
    expected = np.zeros((10, 10))
    expected[9, 9] = -200
    assert np.array_equal(d, expected)
    assert rep.max_deviation_full == 200


def test_verify_algebra_needs_four_levels():
    with pytest.raises(InvalidArgument):
        verify_algebra(3)


def test_first_moment_values(log9):
    assert analytic_first_moment(0.0) == 1.0
    assert analytic_first_moment(1.0) == pytest.approx(A1, rel=1e-14)
    # (1 + (81 + 1/81)/2)/2 exactly
    exact = (1 + (Fraction(81) + Fraction(1, 81)) / 2) / 2
    assert analytic_first_moment(log9) == pytest.approx(float(exact), rel=1e-13)
    assert float(exact) == pytest.approx(20.7531, abs=1e-4)


def test_second_moment_values(log9):
    assert analytic_second_moment(0.0) == 1.0
    assert analytic_second_moment(1.0) == pytest.approx(B1, rel=1e-14)
    exact = ((Fraction(9) + Fraction(1, 9)) / 2) ** 2 * (Fraction(81) + Fraction(1, 81)) / 2
    assert analytic_second_moment(log9) == pytest.approx(float(exact), rel=1e-13)
    assert float(exact) == pytest.approx(840.62, abs=0.01)


@given(st.floats(min_value=-6, max_value=6, allow_nan=False))
def test_variance_nonnegative(t):
    a = analytic_first_moment(t)
    b = analytic_second_moment(t)
    assert b >= a * a * (1 - 1e-14)


@given(st.integers(1, 20), st.integers(2, 50))
def test_hitting_operator_idempotent(m, L):
    T = HittingOperator(m, L).to_sparse()
    assert (T @ T != T).nnz == 0
    if 2 * m - 1 < L:
        assert HittingOperator(m, L).rank == L - (2 * m - 1)
        assert T.diagonal().sum() == L - (2 * m - 1)


def test_state_helpers():
    s = ExcitationState.basis(0, 10)
    assert s.norm_squared == 1.0
    assert s.tail_weight() == 0.0
    s2 = ExcitationState.basis(9, 10)
    assert s2.tail_weight() == 1.0
    with pytest.raises(InvalidArgument):
        ExcitationState.basis(10, 10)
