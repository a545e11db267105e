import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm

from supersonic.errors import FitFailure, InvalidArgument
from supersonic.hubbard_effective import (
    LemmaInstance,
    UniformChainConfig,
    arrival_profile,
    hopping_matrix,
    lemma_gap,
    random_lemma_blocks,
    uniform_chain_amplitude,
    velocity_fit,
)


def test_two_site_rabi():
    t = np.linspace(0, 5, 101)
    amp = uniform_chain_amplitude(2, 1.0, t, 2)
    assert np.allclose(np.abs(amp), np.abs(np.sin(t)), atol=1e-14)


def test_zero_time_localized():
    psi = uniform_chain_amplitude(7, 3.0, 0.0)
    expected = np.zeros(7)
    expected[0] = 1
    assert np.allclose(psi, expected, atol=1e-14)


@pytest.mark.parametrize("n,J,t", [(3, 1.0, 0.7), (10, 2.0, 1.3), (50, 1.0, 4.0), (200, 0.5, 20.0)])
def test_modes_match_dense_expm(n, J, t):
    ref = expm(-1j * t * hopping_matrix(n, J))[:, 0]
    assert np.max(np.abs(uniform_chain_amplitude(n, J, t) - ref)) < 1e-10


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 60), st.floats(0.1, 10.0), st.floats(0.0, 30.0))
def test_probability_conserved(n, J, t):
    psi = uniform_chain_amplitude(n, J, t)
    assert abs(np.sum(np.abs(psi) ** 2) - 1) < 1e-12


def test_time_rescaling():
    a = uniform_chain_amplitude(20, 4.0, 0.25, 20)
    b = uniform_chain_amplitude(20, 1.0, 1.0, 20)
    assert abs(a - b) < 1e-13


def test_two_site_profile_peak():
    prof = arrival_profile(UniformChainConfig(2, 0, tuple(np.linspace(0, 2, 401))))
    assert prof.peak_time == pytest.approx(np.pi / 2, abs=1e-8)
    assert prof.peak_value == pytest.approx(1.0, abs=1e-12)


def test_peak_near_ballistic_front():
    prof = arrival_profile(UniformChainConfig(100, 0))
    assert abs(prof.peak_time - 50) < 0.15 * 50


def test_peak_time_scales_with_J():
    p1 = arrival_profile(UniformChainConfig(60, 0)).peak_time
    p10 = arrival_profile(UniformChainConfig(60, 9)).peak_time
    assert abs(p10 / p1 - 0.1) < 0.005


@pytest.mark.parametrize("J", [1.0, 5.0, 10.0])
def test_velocity_fit(J):
    fit = velocity_fit([40, 60, 80, 100, 120], J)
    assert abs(fit.speed / (2 * J) - 1) < 0.05
    # peak amplitude decays like n^(-1/3) asymptotically
    assert 0.2 < fit.decay_exponent < 0.4


def test_velocity_fit_needs_three_lengths():
    with pytest.raises(FitFailure):
        velocity_fit([10, 10, 20], 1.0)


def test_config_validation():
    with pytest.raises(InvalidArgument):
        UniformChainConfig(1, 0)
    with pytest.raises(InvalidArgument):
        UniformChainConfig(3, -1)
    with pytest.raises(InvalidArgument):
        uniform_chain_amplitude(3, 1.0, 0.0, 4)


def test_lemma_zero_coupling():
    A, B, C = random_lemma_blocks(3, 3, 0, zero_coupling=True)
    inst = LemmaInstance(A, B, C, 10.0, 1.0)
    assert lemma_gap(inst) == 0.0
    assert lemma_gap(inst, use_structure=False) < 1e-13


def test_lemma_zero_time():
    A, B, C = random_lemma_blocks(3, 4, 1)
    assert lemma_gap(LemmaInstance(A, B, C, 5.0, 0.0)) == 0.0


@pytest.mark.parametrize("seed", range(20))
def test_lemma_gap_decreases_with_penalty(seed):
    A, B, C = random_lemma_blocks(3, 3, seed)
    gaps = [lemma_gap(LemmaInstance(A, B, C, x, 1.0)) for x in (1, 10, 100, 1000, 10000)]
    assert all(a > b for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 1e-2


def test_lemma_blocks_seeded_and_hermitian():
    A, B, C = random_lemma_blocks(4, 2, 7)
    A2, B2, C2 = random_lemma_blocks(4, 2, 7)
    assert np.array_equal(A, A2) and np.array_equal(B, B2)
    assert np.allclose(A, A.conj().T) and np.allclose(C, C.conj().T)
    assert B.shape == (4, 2)
