import math

import numpy as np
import pytest

from brightdark import (
    DensityOperator,
    HilbertConfig,
    IntegratorError,
    StateVector,
    SystemParams,
    coherent,
    collective_state,
    evolve_unitary,
    hamiltonian,
    lindblad_evolve,
    observables,
    semiclassical_evolve,
    upsilon,
    vacuum,
)
from brightdark.collective import collective_creator, two_mode_mixer
from brightdark.dynamics import mode_channel_names
from brightdark.fock import atom_operator, creator, expectation, fidelity, inner

from conftest import random_state
from oracles import master_rk4, product_state, coherent_column, upsilon_columns

ALPHA = 1 / math.sqrt(2)


# --- Hamiltonian ------------------------------------------------------------


def test_hamiltonian_vacuum_ground_annihilated():
    cfg = HilbertConfig(2, 3, atom_levels=2)
    h = hamiltonian(cfg, SystemParams(g=1.0))
    assert (h @ vacuum(cfg, atom_level=0)).norm() == 0.0


def test_coupling_relation_single_excitation():
    # H |psi_1^1>|g> = g sqrt(2) |0,0>|e>
    cfg = HilbertConfig(2, 3, atom_levels=2)
    g = 0.7
    h = hamiltonian(cfg, SystemParams(g=g))
    bright = collective_state(cfg, (1, 0), atom_level=0)
    out = h @ bright
    target = vacuum(cfg, atom_level=1)
    resid = out.amplitudes - g * math.sqrt(2) * target.amplitudes
    assert np.linalg.norm(resid) < 1e-12


def test_coupling_relation_all_sectors():
    cfg = HilbertConfig(2, 8, atom_levels=2)
    h = hamiltonian(cfg, SystemParams(g=1.0))
    for total in range(1, 7):
        for bright in range(total + 1):
            st = collective_state(cfg, (bright, total - bright), atom_level=0)
            out = h @ st
            if bright == 0:
                assert out.norm() < 1e-10
                continue
            target = collective_state(
                cfg, (bright - 1, total - bright), atom_level=1
            )
            resid = out.amplitudes - math.sqrt(2 * bright) * target.amplitudes
            assert np.linalg.norm(resid) < 1e-10


def test_commutator_with_dark_creator_interior():
    # [H, a^dag - b^dag] vanishes away from the cutoff edge (to rounding;
    # the edge columns carry the documented truncation artifact instead)
    cfg = HilbertConfig(2, 5, atom_levels=2)
    h = hamiltonian(cfg, SystemParams(g=1.0)).matrix
    dark_dag = (creator(cfg, 1) - creator(cfg, 0)).matrix
    comm = (h @ dark_dag - dark_dag @ h).toarray()
    idx = np.arange(cfg.dim)
    interior = np.ones(cfg.dim, dtype=bool)
    for j in range(2):
        interior &= cfg.occupation_of(idx, j) < cfg.cutoff
    assert np.abs(comm[:, interior]).max() < 1e-14
    assert np.abs(comm).max() > 1.0  # edge columns are not silently aliased


# --- unitary evolution --------------------------------------------------------


def test_evolve_identity_at_zero_time(rng):
    cfg = HilbertConfig(2, 3, atom_levels=2)
    h = hamiltonian(cfg, SystemParams(g=1.0))
    psi = random_state(cfg, rng, max_total=2)
    assert fidelity(evolve_unitary(h, psi, 0.0), psi) == pytest.approx(1.0)


def test_vacuum_rabi_oscillation():
    cfg = HilbertConfig(2, 2, atom_levels=2)
    h = hamiltonian(cfg, SystemParams(g=1.0))
    excited = vacuum(cfg, atom_level=1)
    see = atom_operator(cfg, "sigma_ee")
    for t in (0.2, 0.8, 1.7, 3.0):
        out = evolve_unitary(h, excited, t)
        assert expectation(out, see) == pytest.approx(
            math.cos(math.sqrt(2) * t) ** 2, abs=1e-10
        )
        assert out.norm() == pytest.approx(1.0, abs=1e-10)


def test_dark_dressing_commutes_with_evolution():
    # f(a^dag - b^dag)|0,0>|e> evolves to f(a^dag - b^dag) U|0,0>|e>
    cfg = HilbertConfig(2, 4, atom_levels=2)
    h = hamiltonian(cfg, SystemParams(g=1.0))
    dark_dag = (1 / math.sqrt(2)) * (creator(cfg, 1) - creator(cfg, 0))
    seed = vacuum(cfg, atom_level=1)
    t = 1.3
    left = evolve_unitary(h, (dark_dag @ seed).normalized(), t)
    right = (dark_dag @ evolve_unitary(h, seed, t)).normalized()
    assert fidelity(left, right) == pytest.approx(1.0, abs=1e-10)


def test_dark_mode_occupation_conserved(rng):
    cfg = HilbertConfig(2, 6, atom_levels=2)
    h = hamiltonian(cfg, SystemParams(g=1.0))
    mixer = two_mode_mixer()
    dark_c = collective_creator(cfg, mixer, 1)
    n_dark = dark_c @ dark_c.dagger()
    for _ in range(5):
        psi = random_state(cfg, rng, max_total=cfg.cutoff - 1)
        ref = inner(psi, n_dark @ psi).real
        for t in (2.5, 10.0):
            out = evolve_unitary(h, psi, t)
            assert inner(out, n_dark @ out).real == pytest.approx(ref, abs=1e-10)


def test_evolve_rejects_non_hermitian():
    cfg = HilbertConfig(2, 2, atom_levels=2)
    bad = creator(cfg, 0)
    with pytest.raises(ValueError):
        evolve_unitary(bad, vacuum(cfg), 1.0)


# --- density operators --------------------------------------------------------


def test_density_operator_validation():
    cfg = HilbertConfig(2, 1)
    rho = DensityOperator.from_state(vacuum(cfg))
    assert rho.trace == pytest.approx(1.0)
    with pytest.raises(ValueError):
        DensityOperator(cfg, np.eye(cfg.dim, dtype=complex))  # trace != 1
    bad = np.zeros((cfg.dim, cfg.dim), dtype=complex)
    bad[0, 1] = 1.0
    with pytest.raises(ValueError):
        DensityOperator(cfg, bad)


# --- observables ---------------------------------------------------------------


def test_observables_of_collective_states():
    cfg = HilbertConfig(2, 4)
    obs = observables(collective_state(cfg, (1, 1)))
    assert obs["n_bright"] == pytest.approx(1.0, abs=1e-12)
    assert obs["n_dark"] == pytest.approx(1.0, abs=1e-12)
    obs = observables(vacuum(cfg))
    assert all(abs(v) < 1e-14 for v in obs.values())


@pytest.mark.filterwarnings("ignore:mode .*discards weight")
def test_observables_of_coherent_dark_state():
    cfg = HilbertConfig(2, 14)
    obs = observables(coherent(cfg, (ALPHA, -ALPHA)))
    assert obs["n_bright"] == pytest.approx(0.0, abs=1e-8)
    assert obs["n_dark"] == pytest.approx(1.0, abs=1e-8)
    assert obs["nA"] == pytest.approx(0.5, abs=1e-8)


def test_channel_names():
    assert mode_channel_names(2) == ["nA", "nB"]
    assert mode_channel_names(3) == ["n1", "n2", "n3"]


# --- master equation ------------------------------------------------------------


@pytest.mark.filterwarnings("ignore:mode .*discards weight")
def test_lindblad_pure_decay_of_dark_mode():
    # dark coherent input: atom silent, each mode decays at the bare rate
    cfg = HilbertConfig(2, 10, atom_levels=2)
    params = SystemParams(g=1.0, gamma=1.0, kappa=0.01)
    state = coherent(cfg, (ALPHA, -ALPHA), atom_level=0)
    t = np.linspace(0.0, 2.0, 11)
    series = lindblad_evolve(
        cfg, params, DensityOperator.from_state(state), t, convergence_check=False
    )
    assert series["sigma_ee"].max() < 1e-8
    np.testing.assert_allclose(series["nA"], 0.5 * np.exp(-0.01 * t), atol=1e-6)


@pytest.mark.filterwarnings("ignore:mode .*discards weight")
def test_lindblad_matches_independent_oracle():
    # short-horizon comparison against the dense halved-step reference
    cutoff = 6
    cfg = HilbertConfig(2, cutoff, atom_levels=2)
    params = SystemParams(g=1.0, gamma=1.0, kappa=0.01)
    state = coherent(
        cfg, (ALPHA, ALPHA), atom_level=0
    )
    t = np.linspace(0.0, 2.0, 11)
    series = lindblad_evolve(
        cfg, params, DensityOperator.from_state(state), t, convergence_check=False
    )
    col = coherent_column(ALPHA, cutoff)
    reference = master_rk4(
        cutoff, 1.0, 1.0, 0.01, product_state(col, col, "g"), t, substeps=128
    )
    np.testing.assert_allclose(series["sigma_ee"], reference["sigma_ee"], atol=1e-7)
    np.testing.assert_allclose(series["nA"], reference["nA"], atol=1e-7)
    # the coupled atom opens an extra loss channel beyond the bare cavity rate
    assert series["nA"][-1] < 0.5 * math.exp(-0.01 * t[-1]) - 1e-3


def test_lindblad_excites_atom_from_upsilon():
    cfg = HilbertConfig(2, 6, atom_levels=2)
    params = SystemParams(g=1.0, gamma=1.0, kappa=0.01)
    series = lindblad_evolve(
        cfg,
        params,
        DensityOperator.from_state(upsilon(cfg)),
        np.linspace(0.0, 3.0, 16),
        convergence_check=False,
    )
    assert series["sigma_ee"].max() > 0.05


def test_lindblad_trace_and_positivity():
    cfg = HilbertConfig(2, 4, atom_levels=2)
    params = SystemParams(g=1.0, gamma=0.5, kappa=0.05)
    series = lindblad_evolve(
        cfg,
        params,
        DensityOperator.from_state(upsilon(cfg)),
        np.linspace(0.0, 4.0, 9),
        convergence_check=False,
        keep_states=True,
    )
    for rho in series.states:
        assert rho.trace == pytest.approx(1.0, abs=1e-6)
        assert rho.min_eigenvalue() >= -1e-6


def test_lindblad_convergence_check_runs():
    cfg = HilbertConfig(2, 3, atom_levels=2)
    params = SystemParams(g=1.0, gamma=1.0, kappa=0.01)
    series = lindblad_evolve(
        cfg,
        params,
        DensityOperator.from_state(vacuum(cfg, atom_level=1)),
        np.linspace(0.0, 1.0, 6),
        convergence_check=True,
    )
    assert series["sigma_ee"][0] == pytest.approx(1.0, abs=1e-12)


def test_closed_system_energy_conservation():
    cfg = HilbertConfig(2, 4, atom_levels=2)
    params = SystemParams(g=1.0, gamma=0.0, kappa=0.0)
    series = lindblad_evolve(
        cfg,
        params,
        DensityOperator.from_state(upsilon(cfg)),
        np.linspace(0.0, 5.0, 11),
        convergence_check=False,
    )
    energy = series["nA"] + series["nB"] + series["sigma_ee"]
    assert np.abs(energy - energy[0]).max() < 1e-8


def test_lindblad_input_validation():
    cfg = HilbertConfig(2, 2, atom_levels=2)
    rho = DensityOperator.from_state(vacuum(cfg))
    with pytest.raises(ValueError):
        lindblad_evolve(cfg, SystemParams(), rho, np.array([1.0, 0.5]))
    other = HilbertConfig(2, 3, atom_levels=2)
    with pytest.raises(ValueError):
        lindblad_evolve(other, SystemParams(), rho, np.array([0.0, 1.0]))


# --- semiclassical model ----------------------------------------------------------


def test_semiclassical_decoupled_excited_atom():
    params = SystemParams(g=1.0, gamma=1.0, kappa=0.01)
    t = np.linspace(0.0, 10.0, 201)
    series = semiclassical_evolve(params, 0.0, "e", t)
    np.testing.assert_allclose(series["sigma_ee"], np.exp(-2.0 * t), atol=1e-8)
    assert np.all(np.diff(series["sigma_ee"]) < 0.0)
    assert np.abs(series["alpha_c"]).max() == 0.0


def test_semiclassical_damped_oscillator():
    params = SystemParams(g=0.0, gamma=0.0, kappa=0.3)
    t = np.linspace(0.0, 5.0, 51)
    series = semiclassical_evolve(params, 1.0, "g", t)
    np.testing.assert_allclose(
        np.abs(series["alpha_c"]), np.exp(-0.3 * t), atol=1e-9
    )


def test_semiclassical_lossless_energy_conservation():
    params = SystemParams(g=1.0, gamma=0.0, kappa=0.0)
    t = np.linspace(0.0, 4.0, 81)
    series = semiclassical_evolve(params, math.sqrt(2) * ALPHA, "g", t)
    energy = np.abs(series["alpha_c"]) ** 2 + series["sigma_ee"]
    np.testing.assert_allclose(energy, energy[0], atol=1e-8)


def test_semiclassical_csv_includes_alpha_columns():
    params = SystemParams(g=1.0, gamma=1.0, kappa=0.01)
    series = semiclassical_evolve(params, 1.0, "e", np.linspace(0, 1, 3))
    header = series.csv_body().splitlines()[0]
    assert header == "t,sigma_ee,nA,nB,n_bright,n_dark,alpha_c_re,alpha_c_im"


def test_quantum_csv_header():
    cfg = HilbertConfig(2, 2, atom_levels=2)
    series = lindblad_evolve(
        cfg,
        SystemParams(g=1.0),
        DensityOperator.from_state(vacuum(cfg)),
        np.linspace(0, 0.5, 3),
        convergence_check=False,
    )
    assert series.csv_body().splitlines()[0] == "t,sigma_ee,nA,nB,n_bright,n_dark"
