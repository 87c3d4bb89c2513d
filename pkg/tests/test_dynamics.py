import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm

from milburn.errors import (DimensionMismatch, NegativeTime, NoSteadyState, StepTooLarge,
                            TailNotConverged)
from milburn.dynamics import (Propagator, apply_kraus, evolve, evolve_many, evolve_matrix,
                              integrate_master, integrate_master_times, kraus_operators,
                              kraus_terms_needed, rhs_master, steady_state, steady_state_matrix)
from milburn.model import ModelParams, build_hamiltonian
from milburn.states import isotropic_matrix, random_density


def liouvillian_oracle(h, gamma):
    """Generator of the master equation on row-major vec(rho), built with kron."""
    n = h.shape[0]
    eye = np.eye(n)
    comm = np.kron(h, eye) - np.kron(eye, h.T)  # vec([H, rho])
    return -1j * comm - 0.5 * gamma * comm @ comm


def oracle_evolve(rho0, h, gamma, t):
    n = h.shape[0]
    return (expm(liouvillian_oracle(h, gamma) * t) @ rho0.reshape(-1)).reshape(n, n)


@pytest.mark.parametrize("bz,gamma,t", [(0.0, 0.03, 5.0), (1.8, 0.3, 2.0), (1.0, 0.0, 3.7)])
def test_evolve_matches_expm_oracle(bz, gamma, t):
    h = build_hamiltonian(ModelParams(0.8, -0.4, bz))
    rho0 = isotropic_matrix(0.7)
    got = evolve_matrix(rho0, Propagator.from_hamiltonian(h, gamma), t)
    assert np.allclose(got, oracle_evolve(rho0, h, gamma, t), atol=1e-12)


def test_evolve_random_state_matches_oracle(rng):
    h = build_hamiltonian(ModelParams(-1.1, 0.6, 0.45))
    rho0 = random_density(9, rng).matrix
    got = evolve(rho0, Propagator.from_hamiltonian(h, 0.2), 1.5).matrix
    assert np.allclose(got, oracle_evolve(rho0, h, 0.2, 1.5), atol=1e-12)


def test_gamma_zero_is_unitary():
    h = build_hamiltonian(ModelParams(0.8, -0.4, 1.0))
    rho0 = isotropic_matrix(0.7)
    u = expm(-1j * h * 2.0)
    got = evolve_matrix(rho0, Propagator.from_hamiltonian(h, 0.0), 2.0)
    assert np.allclose(got, u @ rho0 @ u.conj().T, atol=1e-12)


def test_rhs_is_oracle_generator(rng):
    h = build_hamiltonian(ModelParams(0.8, -0.4, 1.0))
    rho = random_density(9, rng).matrix
    expect = (liouvillian_oracle(h, 0.3) @ rho.reshape(-1)).reshape(9, 9)
    assert np.allclose(rhs_master(rho, h, 0.3), expect, atol=1e-13)
    with pytest.raises(DimensionMismatch):
        rhs_master(np.eye(3), h, 0.3)


def test_rk4_converges_to_evolve():
    h = build_hamiltonian(ModelParams(0.8, -0.4, 1.8))
    rho0 = isotropic_matrix(0.7)
    prop = Propagator.from_hamiltonian(h, 0.03)
    times = [0.5, 2.0]
    rk = integrate_master_times(rho0, h, 0.03, times, dt=1e-3)
    for t, r in zip(times, rk):
        assert np.allclose(r, evolve_matrix(rho0, prop, t), atol=1e-10)
    single = integrate_master(rho0, h, 0.03, 0.5, dt=1e-3)
    assert np.allclose(single.matrix, rk[0])


def test_rk4_step_guard():
    h = build_hamiltonian(ModelParams(0.8, -0.4, 4.0))
    with pytest.raises(StepTooLarge):
        integrate_master_times(isotropic_matrix(0.7), h, 0.3, [1.0], dt=0.5)


def test_kraus_series():
    h = build_hamiltonian(ModelParams(0.8, -0.4, 1.8))
    prop = Propagator.from_hamiltonian(h, 0.03)
    ks = kraus_operators(prop, 20.0)
    assert ks.tail_bound < 1e-14
    assert ks.completeness_defect < 1e-13
    assert ks.p_max == kraus_terms_needed(prop, 20.0)
    rho0 = isotropic_matrix(0.7)
    assert np.allclose(apply_kraus(ks, rho0), evolve_matrix(rho0, prop, 20.0), atol=1e-13)


def test_kraus_large_rate_no_overflow():
    h = build_hamiltonian(ModelParams(0.8, -0.4, 4.0))
    prop = Propagator.from_hamiltonian(h, 0.3)
    ks = kraus_operators(prop, 5.0)
    assert ks.p_max > 150
    assert all(np.all(np.isfinite(m)) for m in ks.operators)
    rho0 = isotropic_matrix(0.7)
    assert np.allclose(apply_kraus(ks, rho0), evolve_matrix(rho0, prop, 5.0), atol=1e-12)
    # Poisson mean above the term cap is refused rather than silently truncated
    with pytest.raises(TailNotConverged):
        kraus_operators(prop, 20.0)


def test_kraus_operator_form():
    # M_p = sqrt((gamma t)^p / p!) H^p exp(-iHt) exp(-gamma t H^2 / 2), direct construction
    h = build_hamiltonian(ModelParams(0.8, -0.4, 1.0))
    gamma, t = 0.1, 1.3
    ks = kraus_operators(Propagator.from_hamiltonian(h, gamma), t, p_max=3)
    base = expm(-1j * h * t) @ expm(-0.5 * gamma * t * h @ h)
    hp = np.eye(9)
    fact = 1.0
    for p, m in enumerate(ks.operators):
        if p:
            hp = hp @ h
            fact *= p
        assert np.allclose(m, np.sqrt((gamma * t) ** p / fact) * hp @ base, atol=1e-12)


def test_negative_time_rejected():
    prop = Propagator.from_hamiltonian(build_hamiltonian(ModelParams(0.8, -0.4)), 0.03)
    with pytest.raises(NegativeTime):
        evolve(isotropic_matrix(0.7), prop, -1.0)
    with pytest.raises(ValueError):
        Propagator.from_hamiltonian(np.eye(9), -0.1)


def test_evolve_many_matches_single():
    prop = Propagator.from_hamiltonian(build_hamiltonian(ModelParams(0.8, -0.4, 1.0)), 0.03)
    rho0 = isotropic_matrix(0.7)
    times = [0.0, 1.0, 7.5]
    for t, s in zip(times, evolve_many(rho0, prop, times)):
        assert np.allclose(s.matrix, evolve_matrix(rho0, prop, t), atol=1e-15)


@pytest.mark.parametrize("bz", [0.0, 1.0, 1.8, 4.0])
def test_steady_state_is_long_time_limit(bz):
    prop = Propagator.from_hamiltonian(build_hamiltonian(ModelParams(0.8, -0.4, bz)), 0.03)
    rho0 = isotropic_matrix(0.7)
    late = evolve_matrix(rho0, prop, 5000.0)
    assert np.allclose(steady_state(rho0, prop).matrix, late, atol=1e-9)


def test_steady_state_requires_decoherence():
    prop = Propagator.from_hamiltonian(build_hamiltonian(ModelParams(0.8, -0.4)), 0.0)
    with pytest.raises(NoSteadyState):
        steady_state_matrix(isotropic_matrix(0.7), prop)


# property tests on the channel

couplings = st.floats(-2, 2, allow_nan=False)


@settings(max_examples=40, deadline=None)
@given(J=couplings, K=couplings, bz=st.floats(-4, 4), gamma=st.floats(0, 1),
       t=st.floats(0, 30), seed=st.integers(0, 2 ** 32 - 1))
def test_channel_preserves_states(J, K, bz, gamma, t, seed):
    prop = Propagator.from_hamiltonian(build_hamiltonian(ModelParams(J, K, bz)), gamma)
    rho0 = random_density(9, np.random.default_rng(seed)).matrix
    out = evolve_matrix(rho0, prop, t)
    assert abs(np.trace(out) - 1) < 1e-12
    assert np.max(np.abs(out - out.conj().T)) < 1e-12
    assert np.linalg.eigvalsh(out).min() >= -1e-10
    assert np.vdot(out, out).real <= np.vdot(rho0, rho0).real + 1e-12


@settings(max_examples=30, deadline=None)
@given(J=couplings, K=couplings, bz=st.floats(-4, 4), gamma=st.floats(0, 1),
       s=st.floats(0, 10), t=st.floats(0, 10), c=st.floats(-5, 5),
       seed=st.integers(0, 2 ** 32 - 1))
def test_semigroup_and_energy_shift(J, K, bz, gamma, s, t, c, seed):
    h = build_hamiltonian(ModelParams(J, K, bz))
    prop = Propagator.from_hamiltonian(h, gamma)
    rho0 = random_density(9, np.random.default_rng(seed)).matrix
    direct = evolve_matrix(rho0, prop, s + t)
    composed = evolve_matrix(evolve_matrix(rho0, prop, s), prop, t)
    assert np.max(np.abs(direct - composed)) < 1e-11
    shifted = Propagator.from_hamiltonian(h + c * np.eye(9), gamma)
    assert np.max(np.abs(evolve_matrix(rho0, shifted, s) - evolve_matrix(rho0, prop, s))) < 1e-12


def test_unitary_limit_keeps_purity():
    prop = Propagator.from_hamiltonian(build_hamiltonian(ModelParams(0.8, -0.4, 1.0)), 0.0)
    rho0 = isotropic_matrix(0.7)
    p0 = np.vdot(rho0, rho0).real
    for t in (0.3, 4.0, 50.0):
        out = evolve_matrix(rho0, prop, t)
        assert abs(np.vdot(out, out).real - p0) < 1e-12


def test_kraus_trivial_cases():
    h = build_hamiltonian(ModelParams(0.8, -0.4, 1.0))
    ks = kraus_operators(Propagator.from_hamiltonian(h, 0.0), 2.0)
    assert ks.p_max == 0 and ks.completeness_defect < 1e-14
    assert np.allclose(ks.operators[0], expm(-2j * h))
    ks0 = kraus_operators(Propagator.from_hamiltonian(h, 0.3), 0.0, p_max=3)
    assert np.allclose(ks0.operators[0], np.eye(9))
    assert all(np.allclose(m, 0) for m in ks0.operators[1:])


def test_rhs_special_cases(rng):
    h = build_hamiltonian(ModelParams(0.8, -0.4, 1.0))
    prop = Propagator.from_hamiltonian(h, 0.3)
    diag_e = prop.spectrum.from_eigenbasis(np.diag(rng.uniform(0, 1, 9)))
    assert np.allclose(rhs_master(diag_e, h, 0.3), 0, atol=1e-13)
    rho = random_density(9, rng).matrix
    assert np.allclose(rhs_master(rho, h, 0.0), -1j * (h @ rho - rho @ h))
