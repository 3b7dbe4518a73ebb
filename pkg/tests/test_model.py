import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lindblad_twophoton import (
    InvalidModelError,
    ModelParams,
    UnmappableError,
    Verdict,
    build_effective_generator,
    build_full_generator,
    effective_params,
    effective_temperature,
    effective_temperature_nbar,
    map_2ph_to_1ph,
    n2_alternative,
    nbar_double_frequency,
    nbar_from_temperature,
    steady_state_sparse,
    temperature_from_nbar,
    trace_distance,
    validity,
)
from lindblad_twophoton.dynamics import oscillator_marginal
from lindblad_twophoton.hilbert import ho_displaced_thermal
from lindblad_twophoton.steady import liouvillian


def test_params_validation():
    with pytest.raises(InvalidModelError):
        ModelParams(l=3, N=1, g=0.01)
    with pytest.raises(InvalidModelError):
        ModelParams(l=1, N=0, g=0.01)
    with pytest.raises(InvalidModelError):
        ModelParams(l=1, N=1, g=0.01, P=-1e-3)
    with pytest.raises(InvalidModelError):
        ModelParams(l=1, N=1, g=0.01, nbar=float("nan"))
    with pytest.raises(InvalidModelError):
        ModelParams(l=1, N=1, g=0.01, k=0)


@pytest.mark.parametrize("nbar", [0.1, 0.5, 1.0, 3.0, 17.0])
def test_double_frequency_occupation(nbar):
    n2w = nbar_double_frequency(nbar)
    assert 1 / n2w == pytest.approx((1 / nbar) ** 2 + 2 / nbar, rel=1e-14)
    T = temperature_from_nbar(nbar)
    assert nbar_from_temperature(T, 2.0) == pytest.approx(n2w, rel=1e-12)
    assert ModelParams(l=2, N=1, g=0.01, nbar=nbar).nbar_l == n2w
    assert ModelParams(l=1, N=1, g=0.01, nbar=nbar).nbar_l == nbar


def test_alpha_from_beta():
    p = ModelParams(l=2, N=1, g=0.01, beta=1.25)
    assert p.alpha == pytest.approx(-2.5j)
    assert abs(p.alpha) == pytest.approx(2.5)
    assert effective_params(p).alpha == p.alpha
    q = ModelParams.from_alpha(1, 1, 0.01, 0.3 - 0.7j)
    assert q.alpha == pytest.approx(0.3 - 0.7j, abs=1e-15)


def test_gamma1_and_pstar():
    p = ModelParams(l=1, N=2, g=0.01, gamma_loc=1e-4)
    e = effective_params(p)
    assert e.gamma_l == pytest.approx(4e-4, rel=1e-14)
    assert e.gamma_l + p.gamma_loc == pytest.approx(5e-4, rel=1e-14)


@pytest.mark.parametrize("abs_alpha", [0.0, 0.5, 2.5, 7.0])
def test_zero_temperature_two_photon(abs_alpha):
    p = ModelParams.from_alpha(2, 1, 0.01, abs_alpha)
    e = effective_params(p)
    assert e.n_l == 0
    assert e.gamma_l == pytest.approx(4e-4 * (1 + 4 * abs_alpha ** 2), rel=1e-14)


def test_two_photon_thermal_no_drive():
    e = effective_params(ModelParams(l=2, N=1, g=0.01, nbar=1.0))
    assert e.gamma_l == pytest.approx(3 * 4e-4, rel=1e-14)
    assert e.n_l == pytest.approx(1 / 3, rel=1e-14)
    assert e.n_l == pytest.approx(nbar_double_frequency(1.0), rel=1e-14)


@settings(max_examples=60, deadline=None)
@given(st.floats(0, 10), st.floats(0, 10), st.floats(1e-4, 0.2))
def test_effective_param_bounds(n1, abs_alpha, g):
    p = ModelParams.from_alpha(2, 1, g, abs_alpha, nbar=n1)
    e = effective_params(p)
    g1 = 4 * g ** 2
    assert e.gamma_l >= g1 * (1 - 1e-15)
    assert e.n_l <= n1 + 4 * abs_alpha ** 2 + 1e-12
    assert e.n_l >= nbar_double_frequency(n1) * (1 - 1e-12)


def test_gamma2_equals_gamma1_only_at_zero():
    assert effective_params(ModelParams(l=2, N=1, g=0.01)).gamma_l == pytest.approx(4e-4, rel=1e-15)
    assert effective_params(ModelParams(l=2, N=1, g=0.01, nbar=1e-3)).gamma_l > 4e-4
    assert effective_params(ModelParams.from_alpha(2, 1, 0.01, 1e-3)).gamma_l > 4e-4


def test_n2_alternative_examples():
    p0 = ModelParams(l=2, N=1, g=0.01, nbar=0.7)
    assert n2_alternative(p0) == nbar_double_frequency(0.7)
    assert n2_alternative(ModelParams.from_alpha(2, 1, 0.01, 2.0)) == 0
    p = ModelParams.from_alpha(2, 1, 0.01, 2.5, nbar=1.0)
    assert n2_alternative(p) == pytest.approx(effective_params(p).n_l, abs=1e-14)
    with pytest.raises(InvalidModelError):
        n2_alternative(ModelParams(l=1, N=1, g=0.01))


@pytest.mark.parametrize("n1", [0, 0.1, 1, 5])
@pytest.mark.parametrize("abs_alpha", [0, 0.5, 2.5, 10])
def test_n2_forms_agree_on_grid(n1, abs_alpha):
    p = ModelParams.from_alpha(2, 1, 0.01, abs_alpha * 1j, nbar=n1)
    assert abs(n2_alternative(p) - effective_params(p).n_l) < 1e-13


def test_effective_temperature_examples():
    p = ModelParams(l=2, N=1, g=0.01, nbar=0.8)
    assert effective_temperature_nbar(p) == pytest.approx(nbar_double_frequency(0.8), rel=1e-14)
    assert effective_temperature(p) == pytest.approx(temperature_from_nbar(0.8), rel=1e-13)
    assert effective_temperature_nbar(ModelParams.from_alpha(2, 1, 0.01, 3.0)) == 0
    assert effective_temperature(ModelParams.from_alpha(2, 1, 0.01, 3.0)) == 0
    q = ModelParams.from_alpha(2, 1, 0.01, 2.5, nbar=1.0)
    assert effective_temperature_nbar(q) == pytest.approx(26 / 28, rel=1e-14)
    with pytest.raises(InvalidModelError):
        effective_temperature(ModelParams(l=1, N=1, g=0.01, nbar=1.0))


@settings(max_examples=80, deadline=None)
@given(st.floats(1e-3, 20), st.floats(0, 10))
def test_effective_temperature_round_trip(n1, abs_alpha):
    p = ModelParams.from_alpha(2, 1, 0.01, abs_alpha, nbar=n1)
    T_star = effective_temperature(p)
    n2 = effective_params(p).n_l
    assert nbar_from_temperature(T_star, 2.0) == pytest.approx(n2, rel=1e-12)
    assert T_star >= temperature_from_nbar(n1) * (1 - 1e-12)


def test_full_generator_decoupled_hamiltonian():
    gen = build_full_generator(ModelParams(l=1, N=2, g=0.0), n_cut=4)
    assert np.count_nonzero(gen.hamiltonian.data) == 0


def test_full_generator_jaynes_cummings_element():
    gen = build_full_generator(ModelParams(l=1, N=1, g=0.01), n_cut=2, check_truncation=False)
    h = gen.hamiltonian.data
    # basis |n q>: index 2n + q
    assert h[1, 2] == pytest.approx(0.01)
    assert h[2, 1] == pytest.approx(0.01)


def test_full_generator_two_photon_element():
    gen = build_full_generator(ModelParams(l=2, N=1, g=0.01), n_cut=3, check_truncation=False)
    h = gen.hamiltonian.data
    assert h[1, 4] == pytest.approx(0.01 * math.sqrt(2))
    assert h[1, 2] == 0


def test_full_generator_jump_list():
    p = ModelParams(l=2, N=3, g=0.01, nbar=0.5, P=1e-3, gamma_loc=1e-4, beta=0.3)
    gen = build_full_generator(p)
    assert len(gen.jumps) == 2 + 2 * 3
    rates = [r for r, _ in gen.jumps]
    assert rates[0] == pytest.approx(1.5)
    assert rates[1] == pytest.approx(0.5)
    n2w = nbar_double_frequency(0.5)
    assert rates[2] == pytest.approx(1e-4 * (1 + n2w))
    assert rates[3] == pytest.approx(1e-4 * n2w + 1e-3)


def test_full_generator_drops_zero_rates():
    gen = build_full_generator(ModelParams(l=1, N=2, g=0.01), n_cut=4)
    assert len(gen.jumps) == 1


def test_effective_generator_drive_coefficient():
    p = ModelParams(l=2, N=1, g=0.01, beta=1.25)
    h = build_effective_generator(p).hamiltonian.data
    # <e|H|g> = g alpha^2
    assert h[1, 0] == pytest.approx(-6.25 * 0.01, abs=1e-15)


def test_effective_generator_no_drive():
    gen = build_effective_generator(ModelParams(l=2, N=2, g=0.01, nbar=1.0, P=1e-4))
    assert np.count_nonzero(gen.hamiltonian.data) == 0


def test_effective_generator_single_jump_at_zero_temperature():
    gen = build_effective_generator(ModelParams(l=1, N=2, g=0.01))
    assert len(gen.jumps) == 1
    rate, op = gen.jumps[0]
    assert rate == pytest.approx(4e-4)
    from lindblad_twophoton import collective_ops

    assert np.array_equal(op.data, collective_ops(2)[2].data)


def test_generator_validation():
    from lindblad_twophoton import HilbertSpace, LindbladGenerator, Operator

    space = HilbertSpace.qubits(1)
    with pytest.raises(InvalidModelError):
        LindbladGenerator(space, Operator(space, [[0, 1], [0, 0]]), ())
    with pytest.raises(InvalidModelError):
        LindbladGenerator(space, Operator(space, np.zeros((2, 2))), [(-1.0, Operator(space, np.eye(2)))])


def test_decoupled_oscillator_steady_state():
    p = ModelParams(l=1, N=1, g=0.0, beta=0.4 - 0.2j, nbar=0.3, gamma_loc=1e-3)
    gen = build_full_generator(p)
    rho = steady_state_sparse(gen)
    ho = oscillator_marginal(rho)
    assert trace_distance(ho, ho_displaced_thermal(p.alpha, p.nbar, gen.space.n_cut)) < 1e-6


def test_validity_examples():
    r = validity(ModelParams(l=1, N=1, g=0.01, beta=1.25))
    assert r.n_tilde == pytest.approx(6.25)
    assert r.bound_1ph == pytest.approx(0.025)
    assert r.verdict is Verdict.OK
    strong = validity(ModelParams.from_alpha(1, 1, 0.1, 10.0))
    assert strong.bound_1ph == pytest.approx(1.0)
    assert strong.verdict is Verdict.VIOLATED
    for l in (1, 2):
        assert validity(ModelParams(l=l, N=1, g=1e-4, P=2.0)).verdict is Verdict.VIOLATED
    assert validity(ModelParams(l=1, N=1, g=0.01, P=0.2)).verdict is Verdict.MARGINAL
    assert validity(ModelParams(l=2, N=1, g=0.01, nbar=0.5)).bound_2ph == 0.0
    assert "validity: ok" in r.summary("fig1")


def test_mapping_trivial_point():
    p = ModelParams(l=2, N=2, g=0.02, P=3e-4, gamma_loc=1e-4)
    q = map_2ph_to_1ph(p)
    assert q.l == 1
    assert q.g == pytest.approx(p.g)
    assert q.alpha == 0
    assert q.P == pytest.approx(p.P)
    assert q.gamma_loc == pytest.approx(p.gamma_loc)


def test_mapping_fig_values():
    p = ModelParams.from_alpha(2, 1, 0.01, -2.5j, nbar=1.0)
    q = map_2ph_to_1ph(p)
    assert q.g == pytest.approx(0.01 * math.sqrt(28), rel=1e-14)
    assert q.nbar == pytest.approx(26 / 28, rel=1e-14)
    assert q.P == 0
    assert q.k == p.k


def test_mapping_unmappable():
    p = ModelParams.from_alpha(2, 1, 0.01, 1.0, nbar=0.5, gamma_loc=1e-4)
    with pytest.raises(UnmappableError) as info:
        map_2ph_to_1ph(p)
    assert info.value.deficit > 0
    with pytest.raises(InvalidModelError):
        map_2ph_to_1ph(ModelParams(l=1, N=1, g=0.01))


def _superop_action(gen):
    return liouvillian(gen)


@settings(max_examples=30, deadline=None)
@given(
    st.integers(1, 3),
    st.floats(0, 2),
    st.floats(0, 3),
    st.floats(0, 2 * math.pi),
    st.floats(0, 1e-3),
    st.floats(0, 3e-3),
)
def test_mapping_reproduces_generator(N, n1, abs_alpha, phase, gamma_loc, extra_pump):
    p0 = ModelParams.from_alpha(2, N, 0.01, abs_alpha * np.exp(1j * phase), nbar=n1, gamma_loc=gamma_loc)
    e = effective_params(p0)
    need = (e.n_l - p0.nbar_2w) * gamma_loc / (1 + e.n_l)
    p = ModelParams.from_alpha(2, N, 0.01, p0.alpha, nbar=n1, gamma_loc=gamma_loc, P=need + extra_pump)
    q = map_2ph_to_1ph(p)
    a = _superop_action(build_effective_generator(p))
    b = _superop_action(build_effective_generator(q))
    assert np.max(np.abs(a - b)) < 1e-12


def test_tiny_cutoff_rejected_by_default():
    from lindblad_twophoton import TruncationError

    with pytest.raises(TruncationError):
        build_full_generator(ModelParams(l=1, N=1, g=0.01), n_cut=2)


@pytest.mark.parametrize("l", [1, 2])
def test_excitation_labels_conserved_without_drive(l):
    from lindblad_twophoton import excitation_labels

    p = ModelParams(l=l, N=2, g=0.01, nbar=0.2, P=1e-4, gamma_loc=1e-4)
    gen = build_full_generator(p)
    q = excitation_labels(gen.space, l)
    h = gen.hamiltonian.data
    rows, cols = np.nonzero(h)
    assert np.all(q[rows] == q[cols])
    for _, op in gen.jumps:
        rows, cols = np.nonzero(op.data)
        shifts = set((q[rows] - q[cols]).tolist())
        assert len(shifts) == 1
