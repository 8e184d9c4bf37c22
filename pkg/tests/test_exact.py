import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pairquant.bcs import solve_bcs
from pairquant.errors import TooLarge
from pairquant.exact import (FockSpace, QuasiSpinBasis, build_hamiltonian, collective_rho, exact_rho,
                             fock_oracle, fock_projected_bcs, fock_rho, ground_state, solve_exact)
from pairquant.model import PairingModel, PairType
from pairquant.projection import pbcs_energy, pbcs_rho, residue
from pairquant.xstate import discord


def valid_types(model):
    return [t for t in PairType if t is PairType.CROSS or model.omegas[t.levels[0]] >= 2]


@pytest.mark.parametrize("o1,o2,p", [(2, 2, 2), (3, 3, 3), (3, 2, 1), (7, 5, 6), (1, 4, 3)])
def test_basis_dimension(o1, o2, p):
    b = QuasiSpinBasis(o1, o2, p)
    assert b.dim == min(p, o1) - max(0, p - o2) + 1
    assert all(n1 + n2 == p for n1, n2 in b.states())


def test_ground_state_normalized_and_converged():
    model = PairingModel.uniform(7, 5)
    for p in range(0, 13):
        state = solve_exact(model, p)
        assert np.sum(state.amplitudes ** 2) == pytest.approx(1.0, abs=1e-12)
        assert state.residual() <= 1e-10


@settings(max_examples=50, deadline=None)
@given(o1=st.integers(1, 15), o2=st.integers(1, 15), g=st.tuples(*[st.floats(0.0, 2.0)] * 3),
       eps2=st.floats(0.0, 3.0), data=st.data())
def test_tridiagonal_matches_dense_eigensolver(o1, o2, g, eps2, data):
    model = PairingModel(o1, o2, eps2=eps2, g11=g[0], g12=g[1], g22=g[2])
    p = data.draw(st.integers(0, o1 + o2))
    h = build_hamiltonian(model, p)
    state = ground_state(h)
    assert state.energy == pytest.approx(np.linalg.eigvalsh(h.dense())[0], abs=1e-10)


def test_decoupled_levels_give_single_basis_state():
    model = PairingModel(4, 4, g11=0.6, g12=0.0, g22=0.6)
    h = build_hamiltonian(model, 3)
    assert not np.any(h.offdiagonal)
    state = ground_state(h)
    assert sorted(np.abs(state.amplitudes)) == pytest.approx([0, 0, 0, 1])


def test_dimension_one():
    model = PairingModel.uniform(3)
    state = solve_exact(model, 6)
    assert state.amplitudes.tolist() == [1.0]
    assert state.energy == float(build_hamiltonian(model, 6).diagonal[0])


@pytest.mark.parametrize("omega,p,eps1,g11", [(6, 2, 0.0, 0.6), (8, 5, -0.5, 0.3), (10, 10, 0.2, 1.1)])
def test_one_level_limit(omega, p, eps1, g11):
    # the upper level is pushed out of reach and decoupled
    model = PairingModel(omega, 1, eps1=eps1, eps2=1e6, g11=g11, g12=0.0, g22=0.0)
    assert solve_exact(model, p).energy == pytest.approx(2 * eps1 * p - g11 * p * (omega - p + 1), abs=1e-9)


SYSTEMS = [(2, 2), (3, 3), (3, 2), (2, 3), (4, 3), (5, 5), (7, 5), (1, 4)]


@pytest.mark.parametrize("o1,o2", SYSTEMS)
def test_collective_basis_matches_fock_oracle(o1, o2):
    for model in (PairingModel.uniform(o1, o2), PairingModel(o1, o2, eps2=0.4, g11=0.7, g12=0.6, g22=0.5)):
        for p in range(0, model.n_modes + 1):
            if math.comb(model.n_modes, p) > 10 ** 4:
                continue
            state = solve_exact(model, p)
            space = FockSpace(model, p)
            e0, psi = space.ground_state()
            assert state.energy == pytest.approx(e0, abs=1e-10)
            for t in valid_types(model):
                a = np.array(exact_rho(state, t).as_tuple())
                b = np.array(fock_rho(space, psi, t).as_tuple())
                assert np.abs(a - b).max() <= 1e-10, (p, t)


def test_fock_oracle_example_2_2():
    model = PairingModel.uniform(2)
    e0, rho = fock_oracle(model, 2, PairType.CROSS)
    h = FockSpace(model, 2).hamiltonian().toarray()
    assert h.shape == (6, 6)
    state = solve_exact(model, 2)
    assert state.energy == pytest.approx(e0, abs=1e-12)
    assert exact_rho(state, 2).as_tuple() == pytest.approx(rho.as_tuple(), abs=1e-12)
    # every tridiagonal eigenvalue appears in the seniority-zero Fock spectrum
    spectrum = np.linalg.eigvalsh(h)
    for w in np.linalg.eigvalsh(build_hamiltonian(model, 2).dense()):
        assert np.min(np.abs(spectrum - w)) < 1e-12


def test_vacuum():
    model = PairingModel.uniform(4)
    for t in PairType:
        assert exact_rho(solve_exact(model, 0), t).as_tuple() == (1.0, 0.0, 0.0, 0.0, 0.0)


def test_pbcs_norm_matches_residue():
    model = PairingModel.uniform(2)
    sol = solve_bcs(model, 1)
    _, _, norm2 = fock_projected_bcs(model, sol, 1)
    assert residue(model, sol, 0) == pytest.approx(norm2, rel=1e-13)


def test_symmetric_half_filling_swap():
    # eps1 = eps2 and equal strengths: exchanging the levels is a symmetry
    model = PairingModel(3, 3, eps1=0.0, eps2=0.0)
    rho = exact_rho(solve_exact(model, 3), PairType.CROSS)
    assert rho.swap_qubits().as_tuple() == pytest.approx(rho.as_tuple(), abs=1e-14)


def test_amplitude_sign_is_cosmetic():
    model = PairingModel(5, 4, g11=0.7, g12=0.6, g22=0.5)
    state = solve_exact(model, 4)
    b = state.basis
    for t in PairType:
        plus = collective_rho(5, 4, 4, b.n1_values, state.amplitudes, t)
        minus = collective_rho(5, 4, 4, b.n1_values, -state.amplitudes, t)
        assert plus == minus


def test_variational_ordering():
    for model in (PairingModel.uniform(6), PairingModel(6, 6, g11=0.7, g12=0.6, g22=0.5), PairingModel.uniform(7, 5)):
        for p in range(1, model.n_modes):
            sol = solve_bcs(model, p)
            e0 = solve_exact(model, p).energy
            assert e0 <= sol.energy + 1e-9
            assert e0 <= pbcs_energy(model, sol, p) + 1e-9


def test_states_are_valid():
    model = PairingModel.uniform(7, 5)
    for p in range(0, 13):
        state = solve_exact(model, p)
        for t in PairType:
            rho = exact_rho(state, t).check()
            assert min(np.linalg.eigvalsh(rho.matrix())) >= -1e-12


def test_exact_correlations_slightly_exceed_projected_omega6():
    model = PairingModel.uniform(6)
    for p in range(1, 12):
        d_exact = discord(exact_rho(solve_exact(model, p), 2))
        d_pbcs = discord(pbcs_rho(model, solve_bcs(model, p), p, 2))
        assert d_exact.concurrence >= d_pbcs.concurrence
        assert d_exact.discord >= d_pbcs.discord
        assert d_exact.discord - d_pbcs.discord < 0.01


def test_fock_size_guard():
    with pytest.raises(TooLarge):
        FockSpace(PairingModel.uniform(20), 20)
