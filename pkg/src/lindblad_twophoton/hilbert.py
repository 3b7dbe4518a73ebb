"""
Dense operator algebra for a truncated oscillator coupled to N qubits.

Conventions
-----------
- Qubit basis: ``|g> = index 0``, ``|e> = index 1``; ``sigma_z = diag(-1, +1)``.
- Composite ordering: ``[oscillator, qubit 1, ..., qubit N]`` when the
  oscillator is present, otherwise ``[qubit 1, ..., qubit N]``.
- Units: hbar = k_B = 1 and all rates in units of the oscillator decay k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache, reduce

import numpy as np
from scipy.linalg import expm

from .errors import InvalidDimensionError, TruncationError

TAIL_TOL = 1e-8


@dataclass(frozen=True)
class HilbertSpace:
    """Ordered tensor-product space.

    ``oscillator`` marks factor 0 as a Fock space; every other factor is a qubit.
    """

    factors: tuple
    oscillator: bool = False

    def __post_init__(self):
        factors = tuple(int(f) for f in self.factors)
        object.__setattr__(self, "factors", factors)
        if not factors:
            raise InvalidDimensionError("a Hilbert space needs at least one factor")
        for i, f in enumerate(factors):
            minimum = 1 if (self.oscillator and i == 0) else 2
            if f < minimum:
                raise InvalidDimensionError(f"factor {i} has dimension {f} < {minimum}")

    @property
    def total_dim(self) -> int:
        return math.prod(self.factors)

    @property
    def n_qubits(self) -> int:
        return len(self.factors) - (1 if self.oscillator else 0)

    @property
    def n_cut(self):
        return self.factors[0] if self.oscillator else None

    @classmethod
    def qubits(cls, n: int) -> "HilbertSpace":
        return cls((2,) * n)

    @classmethod
    def full(cls, n_cut: int, n: int) -> "HilbertSpace":
        return cls((n_cut,) + (2,) * n, oscillator=True)


def _frozen_array(data) -> np.ndarray:
    arr = np.array(data, dtype=complex)
    arr.setflags(write=False)
    return arr


class Operator:
    """Square complex matrix tied to a :class:`HilbertSpace`. Immutable."""

    __slots__ = ("space", "data")

    def __init__(self, space: HilbertSpace, data):
        arr = _frozen_array(data)
        d = space.total_dim
        if arr.shape != (d, d):
            raise InvalidDimensionError(
                f"matrix of shape {arr.shape} does not match space dimension {d}"
            )
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "data", arr)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def __repr__(self):
        return f"{type(self).__name__}(factors={self.space.factors})"

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    def dag(self) -> "Operator":
        return Operator(self.space, self.data.conj().T)

    def _check(self, other):
        if self.space.factors != other.space.factors:
            raise InvalidDimensionError(
                f"space mismatch: {self.space.factors} vs {other.space.factors}"
            )

    def __add__(self, other):
        if not isinstance(other, Operator):
            return NotImplemented
        self._check(other)
        return Operator(self.space, self.data + other.data)

    def __sub__(self, other):
        if not isinstance(other, Operator):
            return NotImplemented
        self._check(other)
        return Operator(self.space, self.data - other.data)

    def __neg__(self):
        return Operator(self.space, -self.data)

    def __mul__(self, scalar):
        if isinstance(scalar, Operator):
            return NotImplemented
        return Operator(self.space, complex(scalar) * self.data)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if not isinstance(other, Operator):
            return NotImplemented
        self._check(other)
        return Operator(self.space, self.data @ other.data)

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.data - self.data.conj().T), initial=0.0))

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return self.hermiticity_error() <= tol

    def trace(self) -> complex:
        return complex(np.trace(self.data))


class DensityMatrix(Operator):
    """Operator interpreted as a quantum state.

    Construction does not enforce positivity; use :meth:`validate` to check the
    state against the tolerances used throughout the package.
    """

    __slots__ = ()

    @classmethod
    def from_ket(cls, space: HilbertSpace, ket) -> "DensityMatrix":
        ket = np.asarray(ket, dtype=complex).ravel()
        return cls(space, np.outer(ket, ket.conj()))

    @classmethod
    def basis(cls, space: HilbertSpace, index: int) -> "DensityMatrix":
        ket = np.zeros(space.total_dim, dtype=complex)
        ket[index] = 1.0
        return cls.from_ket(space, ket)

    def trace_error(self) -> float:
        return abs(self.trace() - 1.0)

    def min_eigenvalue(self) -> float:
        herm = 0.5 * (self.data + self.data.conj().T)
        return float(np.linalg.eigvalsh(herm)[0])

    def validate(self, herm_tol=1e-12, trace_tol=1e-9, eig_tol=1e-8) -> None:
        if self.hermiticity_error() > herm_tol:
            raise ValueError(f"state not Hermitian: error {self.hermiticity_error():.3e}")
        if self.trace_error() > trace_tol:
            raise ValueError(f"state trace off by {self.trace_error():.3e}")
        if self.min_eigenvalue() < -eig_tol:
            raise ValueError(f"state has negative eigenvalue {self.min_eigenvalue():.3e}")


def annihilation(n_cut: int) -> Operator:
    """Truncated bosonic lowering operator with ``<n-1|a|n> = sqrt(n)``."""
    if n_cut < 2:
        raise InvalidDimensionError(f"n_cut must be >= 2, got {n_cut}")
    data = np.diag(np.sqrt(np.arange(1, n_cut, dtype=float)), k=1)
    return Operator(HilbertSpace((n_cut,), oscillator=True), data)


@lru_cache(maxsize=None)
def qubit_ops():
    """Return ``(sigma_z, sigma_plus, sigma_minus, identity)`` for one qubit."""
    space = HilbertSpace((2,))
    sz = Operator(space, np.diag([-1.0, 1.0]))
    sp = Operator(space, [[0.0, 0.0], [1.0, 0.0]])
    sm = Operator(space, [[0.0, 1.0], [0.0, 0.0]])
    return sz, sp, sm, Operator(space, np.eye(2))


def embed(op: Operator, factor_index: int, space: HilbertSpace) -> Operator:
    """Place ``op`` on one factor of ``space`` with identities elsewhere."""
    if not 0 <= factor_index < len(space.factors):
        raise InvalidDimensionError(
            f"factor index {factor_index} out of range for {space.factors}"
        )
    if op.dim != space.factors[factor_index]:
        raise InvalidDimensionError(
            f"operator dimension {op.dim} != factor {factor_index} "
            f"dimension {space.factors[factor_index]}"
        )
    left = math.prod(space.factors[:factor_index])
    right = math.prod(space.factors[factor_index + 1:])
    data = np.kron(np.kron(np.eye(left), op.data), np.eye(right))
    return Operator(space, data)


def tensor(*ops: Operator, oscillator: bool = False) -> Operator:
    """Kronecker product of single-factor operators in the given order."""
    factors = sum((op.space.factors for op in ops), ())
    space = HilbertSpace(factors, oscillator=oscillator)
    data = reduce(np.kron, (op.data for op in ops))
    cls = DensityMatrix if all(isinstance(op, DensityMatrix) for op in ops) else Operator
    return cls(space, data)


def collective_ops(n: int, space: HilbertSpace | None = None):
    """Collective ``(J_z, J_plus, J_minus)`` summed over all qubits.

    With ``space`` given the operators act on the qubit factors of that space
    (which may include an oscillator); otherwise on the bare ``2**n`` space.
    """
    if n < 1:
        raise InvalidDimensionError(f"need at least one qubit, got {n}")
    if space is None:
        space = HilbertSpace.qubits(n)
    if space.n_qubits != n:
        raise InvalidDimensionError(f"space has {space.n_qubits} qubits, expected {n}")
    offset = 1 if space.oscillator else 0
    sz, sp, sm, _ = qubit_ops()
    out = []
    for single in (sz, sp, sm):
        terms = [embed(single, offset + i, space).data for i in range(n)]
        out.append(Operator(space, sum(terms)))
    return tuple(out)


def _thermal_weights(nbar: float, dim: int) -> np.ndarray:
    if nbar == 0:
        w = np.zeros(dim)
        w[0] = 1.0
        return w
    ratio = nbar / (1.0 + nbar)
    return ratio ** np.arange(dim) / (1.0 + nbar)


def _displaced_thermal_populations(alpha: complex, nbar: float, dim: int) -> np.ndarray:
    """Exact-enough Fock data of D(alpha) rho_th D(-alpha) in ``dim`` levels."""
    a = annihilation(dim).data
    disp = expm(alpha * a.conj().T - np.conj(alpha) * a)
    w = _thermal_weights(nbar, dim)
    return (disp * w) @ disp.conj().T


def _padded_dim(alpha: complex, nbar: float, n_cut: int) -> int:
    # thermal tail beyond the padded space must be far below TAIL_TOL
    pad = n_cut + 30 + int(4 * abs(alpha) ** 2)
    if nbar > 0:
        ratio = nbar / (1.0 + nbar)
        pad = max(pad, int(math.ceil(math.log(1e-16) / math.log(ratio))) + 10)
    return pad


def required_n_cut(alpha: complex, nbar: float, tol: float = TAIL_TOL) -> int:
    """Smallest cutoff whose last two kept levels plus discarded tail hold < tol."""
    guess = int(math.ceil(abs(alpha) ** 2 + nbar + 6 * math.sqrt(abs(alpha) ** 2 + nbar + 1))) + 4
    dim = _padded_dim(alpha, nbar, 2 * guess)
    pops = np.real(np.diag(_displaced_thermal_populations(alpha, nbar, dim)))
    # tail[m] = population in levels >= m
    tail = np.cumsum(pops[::-1])[::-1]
    for n_cut in range(2, dim - 2):
        if tail[n_cut - 2] < tol:
            return n_cut
    raise TruncationError("could not bracket required cutoff", required_n_cut=None)


def default_n_cut(alpha: complex, nbar: float) -> int:
    """Mean plus six standard deviations plus margin, raised to meet the tail bound."""
    n_tilde = abs(alpha) ** 2 + nbar
    heuristic = int(math.ceil(n_tilde + 6 * math.sqrt(n_tilde + 1))) + 4
    return max(heuristic, required_n_cut(alpha, nbar))


def ho_displaced_thermal(alpha: complex, nbar: float, n_cut: int | None = None) -> DensityMatrix:
    """Displaced thermal oscillator state ``D(alpha) rho_th(nbar) D(-alpha)``.

    The displacement is computed in a padded Fock space and then truncated to
    ``n_cut`` levels and renormalised. Raises :class:`TruncationError` if the
    population in the last two kept levels plus the discarded tail is >= 1e-8.
    """
    if nbar < 0:
        raise ValueError(f"nbar must be >= 0, got {nbar}")
    if n_cut is None:
        n_cut = default_n_cut(alpha, nbar)
    if n_cut < 2:
        raise InvalidDimensionError(f"n_cut must be >= 2, got {n_cut}")
    dim = _padded_dim(alpha, nbar, n_cut)
    rho = _displaced_thermal_populations(alpha, nbar, dim)
    pops = np.real(np.diag(rho))
    tail = float(np.sum(pops[n_cut - 2:]))
    if tail >= TAIL_TOL:
        need = required_n_cut(alpha, nbar)
        raise TruncationError(
            f"n_cut={n_cut} leaves tail population {tail:.2e} >= {TAIL_TOL:g}; "
            f"use n_cut >= {need}",
            required_n_cut=need,
        )
    kept = rho[:n_cut, :n_cut]
    kept = 0.5 * (kept + kept.conj().T)
    kept = kept / np.real(np.trace(kept))
    return DensityMatrix(HilbertSpace((n_cut,), oscillator=True), kept)
