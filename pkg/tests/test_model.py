import numpy as np
import pytest

from milburn.errors import InvalidHubbardParams
from milburn.model import (HubbardParams, ModelParams, analytic_energies, analytic_eigenvectors,
                           analytic_spectrum, basis_index, build_hamiltonian, hubbard_couplings,
                           main_resonance, resonance_fields, spin1_operators, spin_dot, total_sz)


def test_spin1_algebra():
    sx, sy, sz = spin1_operators()
    assert np.allclose(sx @ sy - sy @ sx, 1j * sz)
    assert np.allclose(sy @ sz - sz @ sy, 1j * sx)
    assert np.allclose(sx @ sx + sy @ sy + sz @ sz, 2 * np.eye(3))
    assert np.allclose(np.diag(sz).real, [1, 0, -1])


def test_basis_ordering():
    # |m1, m2> with label 0 -> Sz = +1
    assert basis_index(0, 0) == 0 and basis_index(1, 1) == 4 and basis_index(2, 2) == 8
    assert np.allclose(np.diag(total_sz()).real, [2, 1, 0, 1, 0, -1, 0, -1, -2])


def test_spin_dot_eigenvalues():
    # S1.S2 = (S(S+1) - 4)/2 for total spin S = 0, 1, 2
    w = np.linalg.eigvalsh(spin_dot())
    assert np.allclose(w, [-2, -1, -1, -1, 1, 1, 1, 1, 1])


@pytest.mark.parametrize("bz", [0.0, 1.0, 1.8, 4.0, -2.5])
@pytest.mark.parametrize("J,K", [(0.8, -0.4), (-0.8, 0.4), (1.3, 0.7)])
def test_energy_table_matches_lapack(J, K, bz):
    mp = ModelParams(J, K, bz)
    h = build_hamiltonian(mp)
    assert np.allclose(h, h.conj().T)
    numeric = np.linalg.eigvalsh(h)
    assert np.allclose(np.sort(analytic_energies(mp)), numeric, atol=1e-12)
    for pair in analytic_spectrum(mp):
        assert np.allclose(h @ pair.vector, pair.energy * pair.vector, atol=1e-12)


def test_energy_table_values():
    J, K, B = 0.8, -0.4, 1.0
    e = analytic_energies(ModelParams(J, K, B))
    expect = [4 * K - 2 * J, K - J, K - J - B, K - J + B, K + J,
              K + J - 2 * B, K + J - B, K + J + B, K + J + 2 * B]
    assert np.allclose(e, expect)


def test_analytic_eigenvectors_unitary():
    v = analytic_eigenvectors()
    assert np.allclose(v.conj().T @ v, np.eye(9), atol=1e-14)


def test_chi_shift():
    mp = ModelParams(0.8, -0.4, 0.3, include_chi=True)
    h0 = build_hamiltonian(ModelParams(0.8, -0.4, 0.3))
    assert np.allclose(build_hamiltonian(mp) - h0, 1.2 * np.eye(9))


def test_hubbard_couplings():
    mp = hubbard_couplings(HubbardParams(hop=1.0, U0=2.0, U2=4.0))
    assert mp.J == pytest.approx(-0.5)
    assert mp.K == pytest.approx(-2 / 12 - 2.0)
    assert mp.shift == pytest.approx(mp.J - mp.K)
    with pytest.raises(InvalidHubbardParams):
        hubbard_couplings(HubbardParams(1.0, 0.0, 1.0))


def test_resonances_reference_couplings():
    mp = ModelParams(0.8, -0.4)
    res = resonance_fields(mp)
    pairs = {(round(b, 12), i, j) for b, i, j in res.pairs}
    assert (1.8, 1, 6) in pairs and (-1.8, 1, 9) in pairs
    assert main_resonance(mp) == pytest.approx(1.8)
    # every listed crossing really is one
    for bz, i, j in res.pairs:
        e = analytic_energies(mp.with_field(bz))
        assert e[i - 1] == pytest.approx(e[j - 1], abs=1e-12)


def test_resonances_mirrored_couplings_same_fields():
    a = resonance_fields(ModelParams(0.8, -0.4)).crossings
    b = resonance_fields(ModelParams(-0.8, 0.4)).crossings
    assert np.allclose(sorted(a), sorted(b))


def test_resonances_zero_coupling():
    res = resonance_fields(ModelParams(0.0, 0.0))
    assert res.crossings == [0.0]
    assert set(res.permanent) == {(1, 2), (1, 5), (2, 5), (3, 7), (4, 8)}


def test_equal_couplings_not_only_zero_field():
    res = resonance_fields(ModelParams(0.5, 0.5))
    assert np.allclose(res.crossings, [-1, -0.5, -1 / 3, 0, 1 / 3, 0.5, 1])
    assert res.permanent == [(1, 5)]


def test_nonfinite_params_rejected():
    with pytest.raises(ValueError):
        ModelParams(float("nan"), 0.0)


def test_label_mapping_polarized_states():
    # label 0 <-> Sz = +1, so |2,2> carries K+J-2Bz and |0,0> carries K+J+2Bz
    mp = ModelParams(0.8, -0.4, 2.0)
    h = build_hamiltonian(mp)
    e22 = np.zeros(9)
    e22[basis_index(2, 2)] = 1
    e00 = np.zeros(9)
    e00[basis_index(0, 0)] = 1
    assert np.allclose(h @ e22, -3.6 * e22)
    assert np.allclose(h @ e00, 4.4 * e00)
    labels = {pair.label: pair.vector for pair in analytic_spectrum(mp)}
    assert abs(np.vdot(labels[6], e22)) == pytest.approx(1.0)
    assert abs(np.vdot(labels[9], e00)) == pytest.approx(1.0)


def test_hubbard_substitution_example():
    mp = hubbard_couplings(HubbardParams(hop=1.0, U0=10.0, U2=2.0))
    assert mp.J == pytest.approx(-1.0)
    # K = -2/(3*2) - 4/10
    assert mp.K == pytest.approx(-1 / 3 - 0.4)
    assert mp.shift == pytest.approx(-4 / 15)
    zero = hubbard_couplings(HubbardParams(0.0, 1.0, 1.0))
    assert zero.J == 0 and zero.K == 0


def test_zero_field_three_levels():
    e = analytic_energies(ModelParams(0.8, -0.4, 0.0))
    assert sorted(set(np.round(e, 12))) == [-3.2, -1.2, 0.4]
    assert np.allclose(build_hamiltonian(ModelParams(0.0, 0.0, 0.0)), 0)


def test_singlet_meets_polarized_level_at_resonance():
    e = analytic_energies(ModelParams(0.8, -0.4, 1.8))
    assert e[5] == pytest.approx(-3.2) and e[0] == pytest.approx(-3.2)
