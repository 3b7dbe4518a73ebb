"""
Steady states: dense null space of the Liouvillian, long-time integration,
and closed-form one- and two-qubit results of the effective model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .dynamics import evolve, rhs
from .errors import (
    CapExceededError,
    ConvergenceError,
    DegenerateSteadyStateError,
    InvalidModelError,
    SteadyStateError,
)
from .hilbert import DensityMatrix, HilbertSpace
from .model import LindbladGenerator, ModelParams, effective_params

DEFAULT_CAP = 4096
DEGENERACY_TOL = 1e-10
RESIDUAL_TOL = 1e-11


def liouvillian(gen: LindbladGenerator, sparse: bool = False):
    """Superoperator acting on row-major ``vec(rho)``.

    With this ordering ``vec(A rho B) = kron(A, B.T) vec(rho)``.
    """
    d = gen.dim
    kron = sp.kron if sparse else np.kron
    eye = sp.identity(d, dtype=complex, format="csr") if sparse else np.eye(d)
    conv = sp.csr_matrix if sparse else np.asarray
    h = conv(gen.hamiltonian.data)
    lv = -1j * (kron(h, eye) - kron(eye, h.T))
    for rate, op in gen.jumps:
        x = conv(op.data)
        xdx = x.conj().T @ x
        lv = lv + rate * (kron(x, x.conj()) - 0.5 * kron(xdx, eye) - 0.5 * kron(eye, xdx.T))
    return lv.tocsc() if sparse else lv


def _normalise(vec, d) -> np.ndarray:
    rho = vec.reshape(d, d)
    tr = np.trace(rho)
    if abs(tr) < 1e-300:
        raise SteadyStateError("null vector has zero trace")
    rho = rho / tr
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.real(np.trace(rho))


def steady_state(gen: LindbladGenerator, cap: int = DEFAULT_CAP) -> DensityMatrix:
    """Unique steady state from the SVD null vector of the dense Liouvillian.

    Raises
    ------
    CapExceededError
        If ``dim**2 > cap``; use :func:`steady_state_longtime` or
        :func:`steady_state_sparse` instead.
    DegenerateSteadyStateError
        If the second-smallest singular value is below 1e-10 of the largest.
    """
    d = gen.dim
    if d * d > cap:
        raise CapExceededError(
            f"superoperator size {d * d} exceeds cap {cap}; use long-time integration"
        )
    lv = liouvillian(gen)
    _, s, vh = la.svd(lv)
    if s[-2] < DEGENERACY_TOL * s[0]:
        raise DegenerateSteadyStateError(
            f"steady manifold is degenerate: second-smallest singular value "
            f"{s[-2]:.3e} vs largest {s[0]:.3e}"
        )
    rho = _normalise(vh[-1].conj(), d)
    residual = float(np.max(np.abs(rhs(gen, rho))))
    if residual >= RESIDUAL_TOL * max(1.0, s[0]):
        raise SteadyStateError(f"steady-state residual {residual:.3e} too large")
    return DensityMatrix(gen.space, rho)


def steady_state_sparse(
    gen: LindbladGenerator, residual_tol: float = 1e-9, labels=None
) -> DensityMatrix:
    """Steady state from a sparse LU solve with one row replaced by the trace condition.

    Intended for oscillator spaces too large for the dense path. Uniqueness is
    not diagnosed here.

    ``labels`` (one integer per basis state) restricts the solve to matrix
    elements with equal labels. This is valid when the generator is covariant
    under the matching U(1) rotation, which is verified before solving.
    """
    d = gen.dim
    lv = liouvillian(gen, sparse=True)
    if labels is not None:
        labels = np.asarray(labels)
        if labels.shape != (d,):
            raise ValueError(f"labels must have shape ({d},)")
        # row-major vec: entry (i, j) sits at i*d + j
        idx = np.flatnonzero((labels[:, None] == labels[None, :]).ravel())
        block = lv[:, idx]
        inside = block[idx, :]
        leak = abs(block).sum() - abs(inside).sum()
        if leak > 1e-12 * max(1.0, abs(inside).sum()):
            raise SteadyStateError("generator is not block diagonal in the given labels")
        lv = inside
        diag_pos = np.flatnonzero((np.arange(d)[:, None] == np.arange(d)[None, :]).ravel()[idx])
    else:
        idx = np.arange(d * d)
        diag_pos = np.arange(0, d * d, d + 1)
    m = lv.shape[0]
    lv = lv.tolil()
    trace_row = np.zeros(m, dtype=complex)
    trace_row[diag_pos] = 1.0
    lv[0, :] = trace_row
    b = np.zeros(m, dtype=complex)
    b[0] = 1.0
    sol = spla.spsolve(lv.tocsc(), b)
    vec = np.zeros(d * d, dtype=complex)
    vec[idx] = sol
    rho = _normalise(vec, d)
    residual = float(np.max(np.abs(rhs(gen, rho))))
    if not np.isfinite(residual) or residual >= residual_tol:
        raise SteadyStateError(f"sparse steady-state residual {residual:.3e} too large")
    return DensityMatrix(gen.space, rho)


def steady_state_longtime(
    gen: LindbladGenerator,
    rho0: DensityMatrix | None = None,
    max_t: float = 1e7,
    sample_dt: float | None = None,
    steady_tol: float = 1e-12,
    rel_tol: float = 1e-12,
    abs_tol: float = 1e-14,
) -> DensityMatrix:
    """Evolve until the steady-state detector fires.

    ``rho0`` defaults to the maximally mixed state. Raises
    :class:`ConvergenceError` if ``max_t`` passes without convergence.

    The tolerances are tighter than :func:`evolve`'s defaults: at 1e-9 the
    integration noise keeps ``|drho/dt|`` around 1e-11, above the detector
    threshold.
    """
    d = gen.dim
    if rho0 is None:
        rho0 = DensityMatrix(gen.space, np.eye(d) / d)
    if sample_dt is None:
        sample_dt = max_t / 4000
    n = int(math.floor(max_t / sample_dt))
    samples = sample_dt * np.arange(1, n + 1)
    traj = evolve(
        gen, rho0, samples[-1], samples, rel_tol=rel_tol, abs_tol=abs_tol,
        check_positivity=False, stop_at_steady=True, steady_tol=steady_tol,
    )
    if not traj.converged:
        raise ConvergenceError(f"no steady state detected before t={samples[-1]:.6g}")
    rho = traj.final_state.data
    residual = float(np.max(np.abs(rhs(gen, rho))))
    if residual >= 1e-9:
        raise ConvergenceError(f"long-time residual {residual:.3e} too large")
    return traj.final_state


def trace_distance(rho, sigma) -> float:
    a = rho.data if hasattr(rho, "data") else np.asarray(rho)
    b = sigma.data if hasattr(sigma, "data") else np.asarray(sigma)
    diff = a - b
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(0.5 * (diff + diff.conj().T)))))


@dataclass(frozen=True)
class AnalyticOneQubitSteady:
    Gamma_minus: float
    Gamma_plus: float
    rho_ee: float
    rho_eg: complex

    def matrix(self) -> np.ndarray:
        """2x2 state in the ``(|g>, |e>)`` basis."""
        return np.array(
            [[1.0 - self.rho_ee, np.conj(self.rho_eg)], [self.rho_eg, self.rho_ee]],
            dtype=complex,
        )

    def state(self) -> DensityMatrix:
        return DensityMatrix(HilbertSpace.qubits(1), self.matrix())


def one_qubit_steady_analytic(p: ModelParams) -> AnalyticOneQubitSteady:
    """Closed-form steady state of the single-qubit effective model."""
    if p.N != 1:
        raise InvalidModelError(f"one-qubit formula needs N=1, got N={p.N}")
    eff = effective_params(p)
    gm = p.gamma_loc * (1.0 + p.nbar_l) + eff.gamma_l * (1.0 + eff.n_l)
    gp = p.gamma_loc * p.nbar_l + eff.gamma_l * eff.n_l + p.P
    drive = eff.alpha ** p.l
    d2 = abs(drive) ** 2
    denom = 8.0 * p.g ** 2 * d2 + (gm + gp) ** 2
    rho_ee = (4.0 * p.g ** 2 * d2 + gp * (gm + gp)) / denom
    rho_eg = 2j * p.g * drive * (gp - gm) / denom
    return AnalyticOneQubitSteady(gm, gp, rho_ee, complex(rho_eg))


def one_qubit_large_alpha_limit(p: ModelParams):
    """Large-|alpha| limit of the single-qubit steady state (``gamma_loc``, P neglected).

    Returns ``(rho_ee, rho_eg)``.
    """
    if p.l == 1:
        return 0.5, 0j
    x = p.g / p.k
    n1 = p.nbar
    r = 1.0 + 2.0 * n1
    phi = np.angle(p.alpha)
    rho_ee = (1.0 + 64.0 * n1 * r * x ** 2) / (2.0 + 64.0 * r ** 2 * x ** 2)
    rho_eg = np.exp(1j * (2 * phi - np.pi / 2)) * 4.0 * x / (1.0 + 32.0 * r ** 2 * x ** 2)
    return rho_ee, complex(rho_eg)


@dataclass(frozen=True)
class TwoQubitJcorrAnalytic:
    R_l: float
    value: float


def two_qubit_jcorr_analytic(p: ModelParams) -> TwoQubitJcorrAnalytic:
    """Closed-form steady-state J_corr for two qubits without coherent drive."""
    if p.N != 2:
        raise InvalidModelError(f"two-qubit formula needs N=2, got N={p.N}")
    if p.beta != 0:
        raise InvalidModelError("two-qubit formula needs beta=0")
    eff = effective_params(p)
    gl, gloc, P = eff.gamma_l, p.gamma_loc, p.P
    R = 1.0 + 2.0 * eff.n_l
    s = P + gloc * R
    num = P * gl * (1.0 + R) * (P - gl - gloc)
    den = s ** 3 + 3.0 * gl * R * s ** 2 + gl ** 2 * (2.0 * gloc * R ** 3 + P * (1.0 + R + 2.0 * R ** 2))
    value = 0.0 if num == 0 else num / den
    return TwoQubitJcorrAnalytic(R, value)
