"""
Physical parameters, effective (adiabatically eliminated) parameters and
Lindblad generators for the full oscillator+qubits model and the reduced
qubit-only model, for one-photon (l=1) and two-photon (l=2) couplings.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import InvalidModelError, UnmappableError
from .hilbert import (
    HilbertSpace,
    Operator,
    annihilation,
    collective_ops,
    default_n_cut,
    embed,
    ho_displaced_thermal,
    qubit_ops,
)


def nbar_double_frequency(nbar: float) -> float:
    """Thermal occupation at 2*omega given the occupation at omega."""
    return nbar * nbar / (1.0 + 2.0 * nbar)


def temperature_from_nbar(nbar: float) -> float:
    """Temperature in units of hbar*omega/k_B for a mode at omega."""
    if nbar == 0:
        return 0.0
    return 1.0 / math.log1p(1.0 / nbar)


def nbar_from_temperature(T: float, frequency: float = 1.0) -> float:
    """Bose occupation of a mode at ``frequency`` (units of omega) and temperature T."""
    if T == 0:
        return 0.0
    return 1.0 / math.expm1(frequency / T)


@dataclass(frozen=True)
class ModelParams:
    """Physical inputs shared by the full and the effective model.

    ``nbar`` is the thermal occupation of the oscillator mode at omega; rates
    are in units of ``k``.
    """

    l: int
    N: int
    g: float
    beta: complex = 0.0
    nbar: float = 0.0
    P: float = 0.0
    gamma_loc: float = 0.0
    k: float = 1.0

    def __post_init__(self):
        if self.l not in (1, 2):
            raise InvalidModelError(f"coupling order l must be 1 or 2, got {self.l}")
        if int(self.N) != self.N or self.N < 1:
            raise InvalidModelError(f"N must be a positive integer, got {self.N}")
        object.__setattr__(self, "beta", complex(self.beta))
        for name in ("g", "nbar", "P", "gamma_loc"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise InvalidModelError(f"{name} must be finite and >= 0, got {value}")
        if not self.k > 0:
            raise InvalidModelError(f"k must be > 0, got {self.k}")

    @classmethod
    def from_alpha(cls, l, N, g, alpha=0.0, k=1.0, **kwargs) -> "ModelParams":
        """Build from the oscillator displacement alpha = -2i beta / k."""
        return cls(l=l, N=N, g=g, beta=0.5j * complex(alpha) * k, k=k, **kwargs)

    @property
    def alpha(self) -> complex:
        return -2j * self.beta / self.k

    @property
    def nbar_l(self) -> float:
        """Thermal occupation at the qubit frequency l*omega."""
        return self.nbar if self.l == 1 else nbar_double_frequency(self.nbar)

    @property
    def nbar_2w(self) -> float:
        return nbar_double_frequency(self.nbar)


@dataclass(frozen=True)
class EffectiveParams:
    alpha: complex
    gamma_l: float
    n_l: float
    T_star_nbar: float


def effective_params(p: ModelParams) -> EffectiveParams:
    alpha = p.alpha
    gamma_1 = 4.0 * p.g ** 2 / p.k
    n_1 = p.nbar
    if p.l == 1:
        return EffectiveParams(alpha, gamma_1, n_1, p.nbar_2w)
    s = 1.0 + 2.0 * n_1 + 4.0 * abs(alpha) ** 2
    n_2 = n_1 * (n_1 + 4.0 * abs(alpha) ** 2) / s
    return EffectiveParams(alpha, gamma_1 * s, n_2, n_2)


def n2_alternative(p: ModelParams) -> float:
    """Two-photon collective occupation written as thermal part plus drive excess."""
    if p.l != 2:
        raise InvalidModelError("n2_alternative is defined for l=2 only")
    n1 = p.nbar
    a2 = abs(p.alpha) ** 2
    return p.nbar_2w + 4.0 * n1 * a2 * (1.0 + n1) / ((1.0 + 2.0 * n1 + 4.0 * a2) * (1.0 + 2.0 * n1))


def effective_temperature_nbar(p: ModelParams) -> float:
    """Occupation at 2*omega of the collective bath seen by the qubits (l=2)."""
    if p.l != 2:
        raise InvalidModelError("the effective bath temperature is defined for l=2 only")
    return effective_params(p).n_l


def effective_temperature(p: ModelParams) -> float:
    """Collective bath temperature T* in units of hbar*omega/k_B (l=2).

    Closed form in terms of u = exp(hbar omega / k_B T):
    ``T* = 2 / log[u (u + 4|alpha|^2 (u-1)) / (1 + 4|alpha|^2 (u-1))]``.
    """
    if p.l != 2:
        raise InvalidModelError("the effective bath temperature is defined for l=2 only")
    if p.nbar == 0:
        return 0.0
    a2 = abs(p.alpha) ** 2
    um1 = 1.0 / p.nbar  # u - 1
    u = 1.0 + um1
    ratio = u * (u + 4.0 * a2 * um1) / (1.0 + 4.0 * a2 * um1)
    return 2.0 / math.log(ratio)


@dataclass(frozen=True)
class LindbladGenerator:
    """Time-independent generator ``-i[H, .] + sum_j rate_j D[X_j]``."""

    space: HilbertSpace
    hamiltonian: Operator
    jumps: tuple

    def __post_init__(self):
        object.__setattr__(self, "jumps", tuple((float(r), op) for r, op in self.jumps))
        if self.hamiltonian.space.factors != self.space.factors:
            raise InvalidModelError("Hamiltonian space does not match generator space")
        if not self.hamiltonian.is_hermitian(1e-12):
            raise InvalidModelError("Hamiltonian is not Hermitian")
        for rate, op in self.jumps:
            if rate < 0:
                raise InvalidModelError(f"negative jump rate {rate}")
            if op.space.factors != self.space.factors:
                raise InvalidModelError("jump operator space does not match generator space")

    @property
    def dim(self) -> int:
        return self.space.total_dim


def _jump_list(terms):
    return tuple((r, op) for r, op in terms if r > 0)


def _local_terms(p: ModelParams, space: HilbertSpace):
    _, sp, sm, _ = qubit_ops()
    offset = 1 if space.oscillator else 0
    terms = []
    for i in range(p.N):
        terms.append((p.gamma_loc * (1.0 + p.nbar_l), embed(sm, offset + i, space)))
        terms.append((p.gamma_loc * p.nbar_l + p.P, embed(sp, offset + i, space)))
    return terms


def build_full_generator(
    p: ModelParams, n_cut: int | None = None, check_truncation: bool = True
) -> LindbladGenerator:
    """Oscillator + qubits generator in the interaction picture.

    The cutoff is checked against the zero-order oscillator state (displaced
    thermal); an insufficient ``n_cut`` raises :class:`TruncationError`.
    ``check_truncation=False`` skips that check, which is only meant for
    inspecting matrix elements in tiny spaces.
    """
    if n_cut is None:
        n_cut = default_n_cut(p.alpha, p.nbar)
    if check_truncation:
        ho_displaced_thermal(p.alpha, p.nbar, n_cut)
    space = HilbertSpace.full(n_cut, p.N)
    a = embed(annihilation(n_cut), 0, space)
    ad = a.dag()
    _, jp, jm = collective_ops(p.N, space)
    al = a @ a if p.l == 2 else a
    adl = al.dag()
    h = p.g * (al @ jp + adl @ jm) + (np.conj(p.beta) * a + p.beta * ad)
    h = Operator(space, 0.5 * (h.data + h.data.conj().T))
    terms = [(p.k * (1.0 + p.nbar), a), (p.k * p.nbar, ad)] + _local_terms(p, space)
    return LindbladGenerator(space, h, _jump_list(terms))


def excitation_labels(space: HilbertSpace, l: int) -> np.ndarray:
    """``n + l * (number of excited qubits)`` for every basis state of ``space``.

    Without coherent drive the full generator commutes with rotations
    generated by this number, so its steady state is block diagonal in it.
    """
    n_cut = space.n_cut if space.oscillator else 1
    n = np.arange(n_cut)
    excited = np.zeros(1, dtype=np.int64)
    for _ in range(space.n_qubits):
        excited = (excited[:, None] + np.array([0, 1])[None, :]).ravel()
    return (n[:, None] + l * excited[None, :]).ravel()


def build_effective_generator(p: ModelParams) -> LindbladGenerator:
    """Qubit-only generator after eliminating the oscillator."""
    eff = effective_params(p)
    space = HilbertSpace.qubits(p.N)
    _, jp, jm = collective_ops(p.N, space)
    drive = eff.alpha ** p.l
    h = p.g * (drive * jp + np.conj(drive) * jm)
    h = Operator(space, 0.5 * (h.data + h.data.conj().T))
    terms = [(eff.gamma_l * eff.n_l, jp), (eff.gamma_l * (1.0 + eff.n_l), jm)]
    terms += _local_terms(p, space)
    return LindbladGenerator(space, h, _jump_list(terms))


class Verdict(str, enum.Enum):
    OK = "ok"
    MARGINAL = "marginal"
    VIOLATED = "violated"


@dataclass(frozen=True)
class ValidityReport:
    epsilon: float
    n_tilde: float
    bound_1ph: float
    bound_2ph: float
    pump_ratio: float
    verdict: Verdict

    def summary(self, label: str = "") -> str:
        prefix = f"[{label}] " if label else ""
        return (
            f"{prefix}validity: {self.verdict.value} (g/k={self.epsilon:.3g}, "
            f"n~={self.n_tilde:.3g}, g*sqrt(n~)/k={self.bound_1ph:.3g}, "
            f"g*sqrt(n~(n~-1))/k={self.bound_2ph:.3g}, P/k={self.pump_ratio:.3g})"
        )


OK_THRESHOLD = 0.1
MARGINAL_THRESHOLD = 0.3


def validity(p: ModelParams) -> ValidityReport:
    """Rough bad-cavity validity estimate from the zero-order oscillator excitation.

    The verdict uses the Rabi-frequency bound matching ``p.l`` together with P/k.
    """
    n_tilde = abs(p.alpha) ** 2 + p.nbar
    bound_1 = p.g * math.sqrt(n_tilde) / p.k
    bound_2 = p.g * math.sqrt(n_tilde * (n_tilde - 1.0)) / p.k if n_tilde >= 1 else 0.0
    pump = p.P / p.k
    worst = max(bound_1 if p.l == 1 else bound_2, pump)
    if worst < OK_THRESHOLD:
        verdict = Verdict.OK
    elif worst < MARGINAL_THRESHOLD:
        verdict = Verdict.MARGINAL
    else:
        verdict = Verdict.VIOLATED
    return ValidityReport(p.g / p.k, n_tilde, bound_1, bound_2, pump, verdict)


def map_2ph_to_1ph(p: ModelParams) -> ModelParams:
    """One-photon parameters reproducing the two-photon effective dynamics.

    The primed decay rate is pinned to ``k' = k``. Raises
    :class:`UnmappableError` when the required pump would be negative.
    """
    if p.l != 2:
        raise InvalidModelError("mapping starts from a two-photon (l=2) model")
    a = p.alpha
    s = 1.0 + 2.0 * p.nbar + 4.0 * abs(a) ** 2
    n2 = effective_params(p).n_l
    excess = n2 - p.nbar_2w
    P_new = p.P - excess * p.gamma_loc / (1.0 + n2)
    if P_new < 0:
        # roundoff-sized negatives are clipped to zero
        if P_new > -1e-15 * max(p.P, p.gamma_loc, 1e-300):
            P_new = 0.0
        else:
            raise UnmappableError(
                f"mapping needs a negative pump P'={P_new:.6g} (deficit {-P_new:.6g})",
                deficit=-P_new,
            )
    g_new = p.g * math.sqrt(s)
    alpha_new = a * a / math.sqrt(s)
    gamma_loc_new = p.gamma_loc * (1.0 + p.nbar_2w) / (1.0 + n2)
    return replace(
        p,
        l=1,
        g=g_new,
        beta=0.5j * alpha_new * p.k,
        nbar=n2,
        P=P_new,
        gamma_loc=gamma_loc_new,
    )
