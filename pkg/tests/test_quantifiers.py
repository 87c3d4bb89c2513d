import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from milburn.dynamics import Propagator, evolve_matrix
from milburn.model import ModelParams, build_hamiltonian
from milburn.quantifiers import (l1_coherence, l1_coherence_closed, linear_entropy,
                                 linear_entropy_closed, negativity, purity)
from milburn.states import isotropic_matrix, max_entangled_qutrit, random_density


def test_l1_coherence_hand_values():
    plus = np.full((2, 2), 0.5)
    assert l1_coherence(plus) == pytest.approx(1.0)
    assert l1_coherence(np.eye(3) / 3) == 0.0
    m = np.array([[0.5, 0.25j], [-0.25j, 0.5]])
    assert l1_coherence(m) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        l1_coherence(m, basis="energy")


def test_negativity_reference_states():
    assert negativity(max_entangled_qutrit()) == pytest.approx(1.0, abs=1e-13)
    assert negativity(max_entangled_qutrit(), rescale=True) == pytest.approx(2.0, abs=1e-13)
    prod = np.kron(np.diag([1.0, 0, 0]), np.diag([0, 0.5, 0.5]))
    assert negativity(prod) == 0.0
    assert negativity(np.eye(9) / 9) == 0.0


def test_negativity_is_half_trace_norm_defect(rng):
    from milburn.linalg import partial_transpose
    for _ in range(5):
        rho = random_density(9, rng, rank=2).matrix
        pt = partial_transpose(rho, 3, 3)
        expect = (np.abs(np.linalg.eigvalsh(pt)).sum() - 1) / 2
        assert negativity(rho) == pytest.approx(expect, abs=1e-12)
        assert negativity(rho, subsystem="B") == pytest.approx(expect, abs=1e-12)


def test_linear_entropy_bounds():
    assert linear_entropy(np.eye(9) / 9) == pytest.approx(1.0)
    assert linear_entropy(max_entangled_qutrit()) == pytest.approx(0.0, abs=1e-14)
    assert purity(np.eye(4) / 4) == pytest.approx(0.25)


@pytest.mark.parametrize("p", [0.0, 0.3, 0.7, 1.0])
def test_closed_forms_at_t0(p):
    mp = ModelParams(0.8, -0.4, 1.0)
    assert abs(l1_coherence_closed(mp, p, 0.03, 0.0) - 2 * p) < 1e-14
    assert abs(linear_entropy_closed(mp, p, 0.03, 0.0) - (1 - p * p)) < 1e-14


@settings(max_examples=60, deadline=None)
@given(J=st.floats(-2, 2), K=st.floats(-2, 2), bz=st.floats(-4, 4), p=st.floats(0, 1),
       gamma=st.floats(0, 1), t=st.floats(0, 40))
def test_closed_forms_match_pipeline(J, K, bz, p, gamma, t):
    mp = ModelParams(J, K, bz)
    rho = evolve_matrix(isotropic_matrix(p), Propagator.from_hamiltonian(build_hamiltonian(mp), gamma), t)
    assert abs(l1_coherence_closed(mp, p, gamma, t) - l1_coherence(rho)) < 1e-10
    assert abs(linear_entropy_closed(mp, p, gamma, t) - linear_entropy(rho)) < 1e-10


def test_closed_coherence_finite_for_huge_gamma_t():
    mp = ModelParams(0.8, -0.4, 1.0)
    v = l1_coherence_closed(mp, 0.7, 10.0, 1e4)
    assert np.isfinite(v)


@pytest.mark.parametrize("p", [0.0, 0.4, 1.0])
def test_isotropic_coherence(p):
    assert l1_coherence(isotropic_matrix(p)) == pytest.approx(2 * p)
    assert linear_entropy(isotropic_matrix(p)) == pytest.approx(1 - p * p)


def test_closed_coherence_long_time_equals_steady():
    from milburn.dynamics import steady_state_matrix
    mp = ModelParams(0.8, -0.4, 1.0)
    prop = Propagator.from_hamiltonian(build_hamiltonian(mp), 2.0)
    steady = steady_state_matrix(isotropic_matrix(0.7), prop)
    assert l1_coherence_closed(mp, 0.7, 2.0, 500.0) == pytest.approx(l1_coherence(steady), abs=1e-12)
    assert linear_entropy_closed(mp, 0.7, 2.0, 500.0) == pytest.approx(1 - 7 * 0.49 / 36, abs=1e-12)
    assert l1_coherence_closed(mp, 0.0, 2.0, 3.0) == 0.0
