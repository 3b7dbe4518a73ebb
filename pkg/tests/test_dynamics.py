import math

import numpy as np
import pytest
from conftest import random_density, random_hermitian
from hypothesis import given, settings
from hypothesis import strategies as st

from lindblad_twophoton import (
    DensityMatrix,
    HilbertSpace,
    IntegrationError,
    InvalidDimensionError,
    LindbladGenerator,
    ModelParams,
    Operator,
    TruncationError,
    annihilation,
    build_effective_generator,
    build_full_generator,
    coherence,
    effective_params,
    embed,
    evolve,
    excited_population,
    expectation,
    ho_displaced_thermal,
    j_corr,
    one_qubit_steady_analytic,
    oscillator_marginal,
    partial_trace,
    qubit_marginal,
    qubit_ops,
    rhs,
    tensor,
)

Q1 = HilbertSpace.qubits(1)


def decay_generator(gamma):
    sm = qubit_ops()[2]
    return LindbladGenerator(Q1, Operator(Q1, np.zeros((2, 2))), [(gamma, sm)])


def random_generator(rng, space, n_jumps=3):
    d = space.total_dim
    h = Operator(space, random_hermitian(rng, d))
    jumps = []
    for _ in range(n_jumps):
        x = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        jumps.append((float(rng.uniform(0.1, 1.0)), Operator(space, x)))
    return LindbladGenerator(space, h, jumps)


def test_rhs_maximally_mixed_is_stationary(rng):
    space = HilbertSpace.qubits(2)
    gen = LindbladGenerator(space, Operator(space, random_hermitian(rng, 4)), ())
    assert np.max(np.abs(rhs(gen, np.eye(4) / 4))) < 1e-15


def test_rhs_pure_decay():
    out = rhs(decay_generator(0.3), np.diag([0.0, 1.0]))
    assert out[1, 1] == pytest.approx(-0.3)
    assert out[0, 0] == pytest.approx(0.3)


@pytest.mark.parametrize("l", [1, 2])
def test_rhs_vanishes_on_analytic_steady_state(l):
    p = ModelParams.from_alpha(l, 1, 0.01, 1.3 * np.exp(0.4j), nbar=0.5, P=2e-4, gamma_loc=1e-4)
    rho = one_qubit_steady_analytic(p).matrix()
    assert np.max(np.abs(rhs(build_effective_generator(p), rho))) < 1e-12


def test_rhs_traceless_and_hermitian(rng):
    space = HilbertSpace((3, 2), oscillator=True)
    gen = random_generator(rng, space)
    out = rhs(gen, random_density(rng, 6))
    assert abs(np.trace(out)) < 1e-12 * 6
    assert np.max(np.abs(out - out.conj().T)) < 1e-12


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000), st.floats(-2, 2), st.floats(-2, 2))
def test_rhs_linearity(seed, a, b):
    rng = np.random.default_rng(seed)
    gen = random_generator(rng, HilbertSpace.qubits(2))
    r1, r2 = random_hermitian(rng, 4), random_hermitian(rng, 4)
    lhs = rhs(gen, a * r1 + b * r2)
    assert np.max(np.abs(lhs - a * rhs(gen, r1) - b * rhs(gen, r2))) < 1e-12


def test_rhs_dimension_mismatch():
    with pytest.raises(InvalidDimensionError):
        rhs(decay_generator(1.0), np.eye(3) / 3)


def test_evolve_frozen_generator(rng):
    space = HilbertSpace.qubits(2)
    gen = LindbladGenerator(space, Operator(space, np.zeros((4, 4))), ())
    rho0 = random_density(rng, 4)
    traj = evolve(gen, DensityMatrix(space, rho0), 10.0, np.linspace(0, 10, 6), store_states=True)
    for state in traj.states:
        assert np.max(np.abs(state.data - rho0)) < 1e-14


@pytest.mark.parametrize("gamma", [0.1, 1.0, 3.0])
def test_evolve_exponential_decay(gamma):
    times = np.linspace(0, 5 / gamma, 21)
    traj = evolve(decay_generator(gamma), DensityMatrix.basis(Q1, 1), times[-1], times,
                  observables={"ee": excited_population})
    assert np.allclose(traj["ee"], np.exp(-gamma * times), rtol=1e-8, atol=1e-12)
    assert np.all(np.diff(traj.times) > 0)
    assert np.array_equal(traj.times, times)


def test_evolve_fig1_two_photon_timescale():
    p = ModelParams(l=2, N=1, g=0.01, beta=1.25)
    g2 = effective_params(p).gamma_l
    assert g2 == pytest.approx(26 * 4e-4)
    steady = one_qubit_steady_analytic(p).rho_ee
    times = np.array([0.0, 1 / g2, 5 / g2, 20 / g2])
    traj = evolve(build_effective_generator(p), DensityMatrix.basis(Q1, 0), times[-1], times,
                  observables={"ee": excited_population})
    gap = np.abs(traj["ee"] - steady)
    assert gap[0] > 0.4
    assert gap[2] < 0.05 * gap[0]
    assert gap[3] < 1e-6


def test_evolve_diagnostics_within_budget(rng):
    space = HilbertSpace.qubits(2)
    gen = random_generator(rng, space)
    traj = evolve(gen, DensityMatrix(space, random_density(rng, 4)), 3.0, np.linspace(0, 3, 31))
    assert np.all(traj.diagnostics["trace_error"] < 1e-9)
    assert np.all(traj.diagnostics["herm_error"] < 1e-9)
    assert np.all(traj.diagnostics["min_eig"] > -1e-8)
    traj.final_state.validate()


def test_halving_tolerances_converges():
    p = ModelParams.from_alpha(2, 2, 0.01, 1.5, nbar=0.3, P=3e-4, gamma_loc=1e-4)
    gen = build_effective_generator(p)
    rho0 = DensityMatrix.basis(HilbertSpace.qubits(2), 0)
    times = np.linspace(0, 2000, 11)
    obs = {"J": lambda s: j_corr(s, 2)}
    a = evolve(gen, rho0, times[-1], times, rel_tol=1e-9, abs_tol=1e-12, observables=obs)
    b = evolve(gen, rho0, times[-1], times, rel_tol=5e-10, abs_tol=5e-13, observables=obs)
    assert np.max(np.abs(a["J"] - b["J"])) < 10 * 1e-9


def test_evolve_input_validation():
    gen = decay_generator(1.0)
    rho = DensityMatrix.basis(Q1, 1)
    with pytest.raises(ValueError):
        evolve(gen, rho, 1.0, rel_tol=0)
    with pytest.raises(ValueError):
        evolve(gen, rho, -1.0)
    with pytest.raises(ValueError):
        evolve(gen, rho, 1.0, [0.5, 0.2])
    with pytest.raises(ValueError):
        evolve(gen, rho, 1.0, [0.0, 2.0])
    with pytest.raises(IntegrationError):
        evolve(gen, DensityMatrix(Q1, np.diag([0.5, 0.6])), 1.0)


def test_evolve_max_steps():
    with pytest.raises(IntegrationError):
        evolve(decay_generator(1.0), DensityMatrix.basis(Q1, 1), 100.0, max_steps=3)


def test_tail_monitor_raises():
    # strong drive pushes the vacuum out of a deliberately tiny Fock space
    p = ModelParams(l=1, N=1, g=0.01, beta=3.0)
    gen = build_full_generator(p, n_cut=6, check_truncation=False)
    rho0 = tensor(ho_displaced_thermal(0, 0, 6), DensityMatrix.basis(Q1, 0), oscillator=True)
    with pytest.raises(TruncationError):
        evolve(gen, rho0, 5.0, np.linspace(0, 5, 11))


def test_stop_at_steady():
    traj = evolve(decay_generator(1.0), DensityMatrix.basis(Q1, 1), 1000.0,
                  np.linspace(0, 1000, 1001), stop_at_steady=True)
    assert traj.converged
    assert traj.times[-1] < 100


def test_expectation_examples():
    sz = qubit_ops()[0]
    eye = Operator(HilbertSpace.qubits(1), np.eye(2))
    assert expectation(eye, DensityMatrix.basis(Q1, 0)) == pytest.approx(1.0)
    assert expectation(sz, DensityMatrix.basis(Q1, 1)) == pytest.approx(1.0)
    a = annihilation(40)
    rho = ho_displaced_thermal(-2.5j, 0.0, 40)
    assert expectation(a.dag() @ a, rho) == pytest.approx(6.25, abs=1e-6)
    value = expectation(a, rho)
    assert value == pytest.approx(-2.5j, abs=1e-6)


def test_j_corr_examples():
    space = HilbertSpace.qubits(2)
    product = DensityMatrix(space, np.diag([0.1, 0.2, 0.3, 0.4]))
    assert j_corr(product, 2) == pytest.approx(0.0, abs=1e-15)
    singlet = DensityMatrix.from_ket(space, np.array([0, -1, 1, 0]) / np.sqrt(2))
    triplet = DensityMatrix.from_ket(space, np.array([0, 1, 1, 0]) / np.sqrt(2))
    assert j_corr(singlet, 2) == pytest.approx(-1.0)
    assert j_corr(triplet, 2) == pytest.approx(1.0)
    with pytest.raises(InvalidDimensionError):
        j_corr(DensityMatrix(HilbertSpace.full(2, 2), np.eye(8) / 8), 2)


@pytest.mark.parametrize("n,lo,hi", [(2, -1, 1), (4, -2, 4)])
def test_j_corr_bounds(rng, n, lo, hi):
    from lindblad_twophoton.dynamics import _jcorr_operator

    eig = np.linalg.eigvalsh(_jcorr_operator(n).data)
    assert eig[0] == pytest.approx(lo)
    assert eig[-1] == pytest.approx(hi)
    rho = DensityMatrix(HilbertSpace.qubits(n), random_density(rng, 2 ** n))
    assert lo - 1e-12 <= j_corr(rho, n) <= hi + 1e-12


def test_qubit_marginal_of_product(rng):
    ho = ho_displaced_thermal(0.3, 0.2, 16)
    q = DensityMatrix(HilbertSpace.qubits(2), random_density(rng, 4))
    joint = tensor(ho, q, oscillator=True)
    assert np.allclose(qubit_marginal(joint).data, q.data, atol=1e-14)
    assert np.allclose(oscillator_marginal(joint).data, ho.data, atol=1e-14)
    assert qubit_marginal(joint).trace() == pytest.approx(1.0)


def test_single_qubit_marginal(rng):
    a = DensityMatrix(Q1, random_density(rng, 2))
    b = DensityMatrix(Q1, random_density(rng, 2))
    joint = tensor(ho_displaced_thermal(0, 0, 3), a, b, oscillator=True)
    assert np.allclose(qubit_marginal(joint, [1]).data, b.data, atol=1e-14)
    assert np.allclose(qubit_marginal(joint, [0]).data, a.data, atol=1e-14)
    assert excited_population(qubit_marginal(joint, [0])) == pytest.approx(a.data[1, 1].real)
    assert coherence(qubit_marginal(joint, [1])) == pytest.approx(b.data[1, 0])
    with pytest.raises(InvalidDimensionError):
        qubit_marginal(joint, [2])
    with pytest.raises(InvalidDimensionError):
        qubit_marginal(a)


def test_partial_trace_matches_einsum(rng):
    rho = random_density(rng, 12)
    t = rho.reshape(3, 2, 2, 3, 2, 2)
    want = np.einsum("abcaef->bcef", t).reshape(4, 4)
    assert np.allclose(partial_trace(rho, (3, 2, 2), [1, 2]), want)


def test_full_model_short_run_conserves():
    p = ModelParams(l=2, N=1, g=0.01, beta=1.25)
    gen = build_full_generator(p)
    n_cut = gen.space.n_cut
    rho0 = tensor(ho_displaced_thermal(p.alpha, 0, n_cut), DensityMatrix.basis(Q1, 0), oscillator=True)
    traj = evolve(gen, rho0, 20.0, np.linspace(0, 20, 5))
    assert np.all(traj.diagnostics["trace_error"] < 1e-9)
    assert np.all(traj.diagnostics["herm_error"] < 1e-9)
    assert np.all(traj.diagnostics["min_eig"] > -1e-8)


def test_embedded_number_operator_expectation():
    space = HilbertSpace.full(16, 1)
    num = embed(annihilation(16).dag() @ annihilation(16), 0, space)
    rho = tensor(ho_displaced_thermal(0.0, 0.25, 16), DensityMatrix.basis(Q1, 1), oscillator=True)
    assert expectation(num, rho) == pytest.approx(0.25, abs=1e-7)
    assert math.isclose(expectation(embed(qubit_ops()[0], 1, space), rho), 1.0)
