"""
Time evolution under a :class:`LindbladGenerator` and observable extraction.

The integrator is an embedded Dormand-Prince 5(4) pair acting directly on the
density matrix. Every accepted step is re-Hermitized and trace-renormalised;
renormalisation is only allowed while the drift stays below ``TRACE_TOL``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from . import _dp45
from .errors import IntegrationError, InvalidDimensionError, TruncationError
from .hilbert import DensityMatrix, HilbertSpace, Operator, TAIL_TOL, collective_ops, embed, qubit_ops
from .model import LindbladGenerator

TRACE_TOL = 1e-9
HERM_TOL = 1e-9
EIG_TOL = 1e-8

def _as_array(rho, dim):
    data = rho.data if isinstance(rho, Operator) else np.asarray(rho, dtype=complex)
    if data.shape != (dim, dim):
        raise InvalidDimensionError(f"state of shape {data.shape} does not match dimension {dim}")
    return data


def rhs(gen: LindbladGenerator, rho) -> np.ndarray:
    """``-i[H, rho] + sum_j rate_j (X rho X^+ - 1/2 {X^+ X, rho})`` for any square ``rho``."""
    r = _as_array(rho, gen.dim)
    h = gen.hamiltonian.data
    out = -1j * (h @ r - r @ h)
    for rate, op in gen.jumps:
        x = op.data
        xdx = x.conj().T @ x
        out += rate * (x @ r @ x.conj().T - 0.5 * (xdx @ r + r @ xdx))
    return out


class _Kernel:
    """Fast right-hand side for Hermitian states.

    Uses ``-i(M - M^+)`` with ``M = H_eff rho`` and stores operators sparsely
    when they are sparse enough to benefit.
    """

    def __init__(self, gen: LindbladGenerator):
        d = gen.dim
        heff = gen.hamiltonian.data.astype(complex)
        jumps = []
        for rate, op in gen.jumps:
            x = op.data
            heff = heff - 0.5j * rate * (x.conj().T @ x)
            jumps.append(math.sqrt(rate) * x)
        self.sparse = d > 32
        if self.sparse:
            self.heff = sp.csr_matrix(heff)
            self.jumps = [sp.csr_matrix(x) for x in jumps]
        else:
            self.heff = heff
            self.jumps = jumps

    def __call__(self, r):
        m = self.heff @ r
        out = -1j * (m - m.conj().T)
        for x in self.jumps:
            b = x @ r
            b = x @ b.conj().T
            out += b.conj().T
        return out


@dataclass(frozen=True)
class Trajectory:
    """Sampled observables of one run.

    ``diagnostics`` holds per-sample ``trace_error`` and ``herm_error``
    (both measured before correction) and, when requested, ``min_eig``.
    """

    times: np.ndarray
    records: dict
    diagnostics: dict
    final_state: DensityMatrix
    states: tuple = ()
    converged: bool = False
    n_steps: int = 0
    n_rejected: int = 0
    meta: dict = field(default_factory=dict)

    def __getitem__(self, name):
        return self.records[name]


def _initial_step(f, y0, f0, rel_tol, abs_tol):
    scale = abs_tol + rel_tol * np.abs(y0)
    d0 = math.sqrt(np.mean(np.abs(y0 / scale) ** 2))
    d1 = math.sqrt(np.mean(np.abs(f0 / scale) ** 2))
    h0 = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
    y1 = y0 + h0 * f0
    d2 = math.sqrt(np.mean(np.abs((f(y1) - f0) / scale) ** 2)) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1 / 5)
    return min(100 * h0, h1)


def _fock_tail(r, space: HilbertSpace) -> float:
    n_cut = space.factors[0]
    rest = space.total_dim // n_cut
    diag = np.real(np.diag(r)).reshape(n_cut, rest).sum(axis=1)
    return float(diag[-2:].sum())


def _evaluate(observables, state: DensityMatrix):
    values = {}
    for name, obs in observables.items():
        values[name] = obs(state) if callable(obs) else expectation(obs, state)
    return values


def evolve(
    gen: LindbladGenerator,
    rho0,
    t_end: float,
    sample_times=None,
    rel_tol: float = 1e-9,
    abs_tol: float = 1e-12,
    observables: dict | None = None,
    store_states: bool = False,
    check_positivity: bool = True,
    stop_at_steady: bool = False,
    steady_tol: float = 1e-12,
    max_steps: int = 50_000_000,
) -> Trajectory:
    """Integrate the master equation from ``rho0`` up to ``t_end``.

    Parameters
    ----------
    sample_times : sequence of float, optional
        Strictly increasing times in ``[0, t_end]`` at which the state is
        recorded; steps are shortened to land on them exactly. Defaults to
        ``[0, t_end]``.
    observables : dict
        Name -> :class:`Operator` (expectation value) or callable taking a
        :class:`DensityMatrix`.
    stop_at_steady : bool
        End the run once ``max|drho/dt| < steady_tol * max|rho|`` holds at
        three consecutive samples.

    Raises
    ------
    IntegrationError
        On step-size underflow or trace drift beyond 1e-9.
    TruncationError
        For oscillator spaces, when the last two Fock levels hold >= 1e-8.
    """
    if rel_tol <= 0 or abs_tol <= 0:
        raise ValueError("tolerances must be positive")
    if t_end <= 0:
        raise ValueError("t_end must be positive")
    d = gen.dim
    y = np.array(_as_array(rho0, d), dtype=complex)
    if abs(np.trace(y) - 1) > TRACE_TOL:
        raise IntegrationError("initial state does not have unit trace")
    y = 0.5 * (y + y.conj().T)
    samples = np.array([0.0, t_end] if sample_times is None else sample_times, dtype=float)
    if samples.ndim != 1 or samples.size == 0:
        raise ValueError("sample_times must be a non-empty 1-d sequence")
    if np.any(np.diff(samples) <= 0):
        raise ValueError("sample_times must be strictly increasing")
    if samples[0] < 0 or samples[-1] > t_end * (1 + 1e-12):
        raise ValueError("sample_times must lie in [0, t_end]")
    observables = observables or {}

    f = _Kernel(gen)
    oscillator = gen.space.oscillator

    times, states = [], []
    records = {name: [] for name in observables}
    diag = {"trace_error": [], "herm_error": []}
    if check_positivity:
        diag["min_eig"] = []
    steady_hits = 0
    converged = False

    def record(t, state_arr, trace_err, herm_err):
        nonlocal steady_hits, converged
        if oscillator:
            tail = _fock_tail(state_arr, gen.space)
            if tail >= TAIL_TOL:
                raise TruncationError(
                    f"Fock tail population {tail:.2e} at t={t:.6g} exceeds {TAIL_TOL:g}; "
                    f"increase n_cut above {gen.space.factors[0]}"
                )
        state = DensityMatrix(gen.space, state_arr)
        times.append(t)
        diag["trace_error"].append(trace_err)
        diag["herm_error"].append(herm_err)
        if check_positivity:
            diag["min_eig"].append(state.min_eigenvalue())
        for name, value in _evaluate(observables, state).items():
            records[name].append(value)
        if store_states:
            states.append(state)
        if stop_at_steady:
            deriv = f(state_arr)
            if np.max(np.abs(deriv)) < steady_tol * np.max(np.abs(state_arr)):
                steady_hits += 1
            else:
                steady_hits = 0
            converged = steady_hits >= 3

    t = 0.0
    idx = 0
    if samples[0] == 0.0:
        record(0.0, y, abs(np.trace(y) - 1), 0.0)
        idx = 1

    f0 = f(y)
    h = _initial_step(f, y, f0, rel_tol, abs_tol)
    args = _dp45.Operators(
        gen.hamiltonian.data, [(rate, op.data) for rate, op in gen.jumps]
    ).args()
    k = np.zeros((7, d, d), dtype=complex)
    work, work2, ynew = (np.zeros((d, d), dtype=complex) for _ in range(3))
    n_steps = n_rejected = 0
    while idx < len(samples) and not converged:
        status, t, h, ns, nr, herm_err, trace_err = _dp45.advance(
            t, float(samples[idx]), h, y, f0, k, work, work2, ynew, rel_tol, abs_tol,
            max_steps - n_steps, *args, _dp45.A, _dp45.E, TRACE_TOL,
        )
        n_steps += ns
        n_rejected += nr
        if status == _dp45.UNDERFLOW:
            raise IntegrationError(f"step size underflow at t={t:.6g}")
        if status == _dp45.TRACE_DRIFT:
            raise IntegrationError(f"trace drift {trace_err:.3e} at t={t:.6g}")
        if status == _dp45.MAX_STEPS:
            raise IntegrationError(f"exceeded {max_steps} steps at t={t:.6g}")
        record(t, y.copy(), trace_err, herm_err)
        idx += 1

    return Trajectory(
        times=np.array(times),
        records={name: np.array(v) for name, v in records.items()},
        diagnostics={name: np.array(v) for name, v in diag.items()},
        final_state=DensityMatrix(gen.space, y),
        states=tuple(states),
        converged=converged,
        n_steps=n_steps,
        n_rejected=n_rejected,
    )


def expectation(op: Operator, rho) -> complex | float:
    """``Tr(op rho)``; real for Hermitian ``op`` (imaginary residue must be < 1e-10)."""
    r = _as_array(rho, op.dim)
    value = complex(np.sum(op.data * r.T))
    if op.is_hermitian(1e-12):
        if abs(value.imag) >= 1e-10:
            raise ValueError(f"Hermitian observable has imaginary expectation {value.imag:.3e}")
        return value.real
    return value


@lru_cache(maxsize=None)
def _jcorr_operator(n: int) -> Operator:
    space = HilbertSpace.qubits(n)
    _, jp, jm = collective_ops(n, space)
    _, sp_, sm, _ = qubit_ops()
    local = sum((embed(sp_ @ sm, i, space).data for i in range(n)), np.zeros((2 ** n, 2 ** n)))
    return Operator(space, (jp @ jm).data - local)


def j_corr(rho, n: int) -> float:
    """``<J+ J-> - sum_i <sigma+_i sigma-_i>`` on a qubits-only state."""
    if isinstance(rho, Operator) and (rho.space.oscillator or rho.space.factors != (2,) * n):
        raise InvalidDimensionError(f"j_corr needs a {n}-qubit space, got {rho.space.factors}")
    return expectation(_jcorr_operator(n), rho)


def partial_trace(data: np.ndarray, dims, keep) -> np.ndarray:
    """Reduced matrix on the factors listed in ``keep`` (order preserved)."""
    dims = list(dims)
    keep = sorted(keep)
    n = len(dims)
    t = data.reshape(dims + dims)
    trace_out = [i for i in range(n) if i not in keep]
    # contract traced factors one at a time, highest index first
    for i in sorted(trace_out, reverse=True):
        m = t.ndim // 2
        t = np.trace(t, axis1=i, axis2=i + m)
    d = math.prod(dims[i] for i in keep)
    return t.reshape(d, d)


def qubit_marginal(rho_g: DensityMatrix, qubits=None) -> DensityMatrix:
    """Trace out the oscillator (and every qubit not in ``qubits``).

    ``qubits`` holds zero-based qubit indices; ``None`` keeps all of them.
    """
    space = rho_g.space
    if not space.oscillator:
        raise InvalidDimensionError("qubit_marginal expects a space with an oscillator factor")
    n = space.n_qubits
    keep_q = list(range(n)) if qubits is None else sorted({int(q) for q in qubits})
    if any(q < 0 or q >= n for q in keep_q):
        raise InvalidDimensionError(f"qubit indices {keep_q} out of range for {n} qubits")
    reduced = partial_trace(rho_g.data, space.factors, [q + 1 for q in keep_q])
    return DensityMatrix(HilbertSpace.qubits(len(keep_q)), reduced)


def oscillator_marginal(rho_g: DensityMatrix) -> DensityMatrix:
    space = rho_g.space
    if not space.oscillator:
        raise InvalidDimensionError("state has no oscillator factor")
    reduced = partial_trace(rho_g.data, space.factors, [0])
    return DensityMatrix(HilbertSpace((space.factors[0],), oscillator=True), reduced)


def excited_population(rho) -> float:
    """``rho_ee`` of a single-qubit state."""
    return float(np.real(rho.data[1, 1]))


def coherence(rho) -> complex:
    """``rho_eg = <e|rho|g>`` of a single-qubit state."""
    return complex(rho.data[1, 0])
